#pragma once

#include "hgl/cells.hpp"
#include "hgl/combinatorics.hpp"
#include "hgl/error.hpp"
#include "hgl/experiments.hpp"
#include "hgl/hypergraph.hpp"
#include "hgl/hypergraphon.hpp"
#include "hgl/hyperpartition.hpp"
#include "hgl/io.hpp"
#include "hgl/metrics.hpp"
#include "hgl/parallel.hpp"
#include "hgl/random.hpp"
#include "hgl/rational.hpp"
#include "hgl/regularity.hpp"
#include "hgl/sampling.hpp"
