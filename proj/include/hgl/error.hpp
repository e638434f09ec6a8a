#pragma once

#include <stdexcept>
#include <string>

namespace hgl {

// Malformed or inconsistent input: wrong arity, out-of-range vertex,
// asymmetric cell system and so on. The CLI maps this to exit status 2.
class InputError : public std::invalid_argument {
 public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// An enumeration or table would exceed a desk-scale cap.
class CapExceeded : public InputError {
 public:
  explicit CapExceeded(const std::string& what) : InputError("cap exceeded: " + what) {}
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InputError(message);
}

}  // namespace hgl
