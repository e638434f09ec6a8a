#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hgl/combinatorics.hpp"
#include "hgl/error.hpp"

namespace hgl {

using Label = std::uint16_t;  // class labels are 1..l

// Shape of the cell space [l]^{r([k])}: one coordinate per nonempty subset
// mask of [k] (bit i-1 <-> element i). A cell is packed into an integer code
// sum_A (label(A) - 1) * l^(A - 1).
class CellSpace {
 public:
  CellSpace(unsigned k, unsigned l) : k_(k), l_(l) {
    require(k >= 1 && k <= 5, "k must lie in 1..5");
    require(l >= 1 && l <= 255, "l must lie in 1..255");
    size_ = checked_pow(l, dimension());
    require(size_ < (std::uint64_t{1} << 62), "cell space [l]^(2^k-1) too large");
    place_.resize(std::size_t{1} << k);
    std::uint64_t p = 1;
    for (Mask m = 1; m < place_.size(); ++m, p *= l) place_[m] = p;
    perms_ = all_permutations(k);
  }

  unsigned k() const { return k_; }
  unsigned l() const { return l_; }
  unsigned dimension() const { return (1u << k_) - 1; }
  Mask top() const { return (Mask{1} << k_) - 1; }
  std::uint64_t size() const { return size_; }
  std::uint64_t place(Mask m) const { return place_[m]; }
  const std::vector<std::vector<unsigned>>& permutations() const { return perms_; }

  Label label(std::uint64_t code, Mask m) const { return static_cast<Label>(code / place_[m] % l_ + 1); }

  // labels[m] for m in 1..2^k-1; labels[0] ignored.
  std::uint64_t encode(std::span<const Label> labels) const {
    std::uint64_t code = 0;
    for (Mask m = 1; m <= top(); ++m) {
      require(labels[m] >= 1 && labels[m] <= l_, "cell label out of range 1..l");
      code += std::uint64_t{labels[m] - 1u} * place_[m];
    }
    return code;
  }

  std::vector<Label> decode(std::uint64_t code) const {
    std::vector<Label> labels(std::size_t{1} << k_, 0);
    for (Mask m = 1; m <= top(); ++m) labels[m] = label(code, m);
    return labels;
  }

  // The induced action: result(pi(A)) = cell(A), i.e. cell o pi^-1.
  std::uint64_t act(std::uint64_t code, std::span<const unsigned> perm) const {
    std::uint64_t out = 0;
    for (Mask m = 1; m <= top(); ++m) out += std::uint64_t{label(code, m) - 1u} * place_[permute_mask(m, perm)];
    return out;
  }

  std::vector<std::uint64_t> orbit(std::uint64_t code) const {
    std::vector<std::uint64_t> out;
    out.reserve(perms_.size());
    for (const auto& p : perms_) out.push_back(act(code, p));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::uint64_t orbit_representative(std::uint64_t code) const {
    std::uint64_t best = code;
    for (const auto& p : perms_) best = std::min(best, act(code, p));
    return best;
  }

  friend bool operator==(const CellSpace& a, const CellSpace& b) { return a.k_ == b.k_ && a.l_ == b.l_; }

 private:
  unsigned k_, l_;
  std::uint64_t size_;
  std::vector<std::uint64_t> place_;
  std::vector<std::vector<unsigned>> perms_;
};

// Abstract (k,l)-cell: a function from nonempty subsets of [k] to [l].
class CellCoordinate {
 public:
  CellCoordinate() = default;
  explicit CellCoordinate(unsigned k, Label fill = 1) : labels_(std::size_t{1} << k, fill) { labels_[0] = 0; }
  CellCoordinate(const CellSpace& space, std::uint64_t code) : labels_(space.decode(code)) {}

  unsigned k() const { return static_cast<unsigned>(std::countr_zero(labels_.size())); }
  Label operator[](Mask m) const { return labels_[m]; }
  Label& operator[](Mask m) { return labels_[m]; }
  std::span<const Label> labels() const { return labels_; }

  // (c o pi^-1)(A) = c(pi^-1(A)).
  CellCoordinate permuted(std::span<const unsigned> perm) const {
    CellCoordinate out(k());
    for (Mask m = 1; m < labels_.size(); ++m) out.labels_[permute_mask(m, perm)] = labels_[m];
    return out;
  }

  std::uint64_t code(const CellSpace& space) const { return space.encode(labels_); }

  friend auto operator<=>(const CellCoordinate&, const CellCoordinate&) = default;

 private:
  std::vector<Label> labels_;
};

// Set of cell codes with O(1) membership when the space is small enough for a
// bitmap, binary search otherwise.
class CellSet {
 public:
  CellSet() = default;
  CellSet(const CellSpace& space, std::vector<std::uint64_t> codes) : codes_(std::move(codes)) {
    std::sort(codes_.begin(), codes_.end());
    codes_.erase(std::unique(codes_.begin(), codes_.end()), codes_.end());
    for (auto c : codes_) require(c < space.size(), "cell code outside the cell space");
    if (space.size() <= (std::uint64_t{1} << 26)) {
      bitmap_.assign((space.size() + 63) / 64, 0);
      for (auto c : codes_) bitmap_[c >> 6] |= std::uint64_t{1} << (c & 63);
    }
  }

  bool contains(std::uint64_t code) const {
    if (!bitmap_.empty()) return bitmap_[code >> 6] >> (code & 63) & 1u;
    return std::binary_search(codes_.begin(), codes_.end(), code);
  }
  std::size_t size() const { return codes_.size(); }
  bool empty() const { return codes_.empty(); }
  const std::vector<std::uint64_t>& codes() const { return codes_; }

  friend bool operator==(const CellSet& a, const CellSet& b) { return a.codes_ == b.codes_; }

 private:
  std::vector<std::uint64_t> codes_;
  std::vector<std::uint64_t> bitmap_;
};

inline bool is_symmetric(const CellSpace& space, const CellSet& cells) {
  for (auto c : cells.codes())
    for (const auto& p : space.permutations())
      if (!cells.contains(space.act(c, p))) return false;
  return true;
}

inline CellSet symmetrize(const CellSpace& space, const CellSet& cells) {
  std::vector<std::uint64_t> out;
  for (auto c : cells.codes())
    for (auto o : space.orbit(c)) out.push_back(o);
  return CellSet(space, std::move(out));
}

// An S_k-closed set of cells on a fixed (k,l) space. Shared by combinatorial
// structures and step hypergraphons, which carry the same data.
class SymmetricCellSystem {
 public:
  SymmetricCellSystem(unsigned k, unsigned l, std::vector<std::uint64_t> codes)
      : space_(k, l), cells_(space_, std::move(codes)) {
    if (!is_symmetric(space_, cells_)) throw InputError("cells: not S_k-closed");
  }
  SymmetricCellSystem(const CellSpace& space, CellSet cells) : space_(space), cells_(std::move(cells)) {
    if (!is_symmetric(space_, cells_)) throw InputError("cells: not S_k-closed");
  }

  unsigned k() const { return space_.k(); }
  unsigned l() const { return space_.l(); }
  const CellSpace& space() const { return space_; }
  const CellSet& cells() const { return cells_; }
  bool contains(std::uint64_t code) const { return cells_.contains(code); }
  bool contains(const CellCoordinate& c) const { return cells_.contains(c.code(space_)); }

  friend bool operator==(const SymmetricCellSystem& a, const SymmetricCellSystem& b) {
    return a.space_ == b.space_ && a.cells_ == b.cells_;
  }

 private:
  CellSpace space_;
  CellSet cells_;
};

}  // namespace hgl
