#pragma once

#include <gmpxx.h>

#include "qbiject/rat.hpp"

namespace qbiject {

enum class Side { below, above };

/// Grid point floor(M*lo)/M (below) or ceil(M*hi)/M (above) for a bracket
/// [lo, hi] inside [0,1] of width < 1/(2M). H(result) <= M.
Rat bounded_rational_near(const Rat& lo, const Rat& hi, const mpz_class& M, Side side);

}  // namespace qbiject
