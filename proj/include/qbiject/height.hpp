#pragma once

#include <gmpxx.h>

#include <string_view>

#include "qbiject/rat.hpp"

namespace qbiject {

enum class Verdict { pass, fail, marginal };

std::string_view verdict_name(Verdict v);

// Two-tier constants bracketing 1/ln 2 = 1.442695...
// Lower tiers certify 2^(cB) <= e^B, the upper one certifies 2^(c'B) > e^B.
inline constexpr long kTier1Num = 144, kTier1Den = 100;
inline constexpr long kTier2Num = 14426, kTier2Den = 10000;
inline constexpr long kFailNum = 14427, kFailDen = 10000;

struct CertifyResult {
  Verdict verdict;
  int tier;  // 1 or 2 on pass, 0 otherwise
};

/// Decides value <= factor * e^B without evaluating a logarithm.
/// value >= 0, factor >= 1, B >= 0.
CertifyResult certify_le_exp(const mpz_class& value, const mpz_class& factor,
                             const mpz_class& B);

inline CertifyResult certify_le_exp(const mpz_class& value, const mpz_class& B) {
  return certify_le_exp(value, mpz_class(1), B);
}

/// h(q) <= B, i.e. H(q) <= e^B.
Verdict certify_h_le(const Rat& q, const mpz_class& B);

}  // namespace qbiject
