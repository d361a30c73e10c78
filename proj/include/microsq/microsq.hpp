#pragma once

// Umbrella header for the microsq library: counting representations of
// integers as two squares plus one or two constrained "microsquares",
// together with the local densities, truncated singular series/integral,
// major-arc quadrature, and sphere-geometry scans that surround that count.

#include "microsq/arith.hpp"
#include "microsq/circle_method.hpp"
#include "microsq/exp_sums.hpp"
#include "microsq/local_densities.hpp"
#include "microsq/rational.hpp"
#include "microsq/representations.hpp"
#include "microsq/sphere.hpp"
#include "microsq/survey.hpp"
#include "microsq/two_squares.hpp"
#include "microsq/util.hpp"
