#include "qbiject/height.hpp"

#include "qbiject/error.hpp"

namespace qbiject {

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::marginal: return "marginal";
  }
  return "?";
}

namespace {

// value <= factor * 2^k, for k possibly huge.
bool le_factor_pow2(const mpz_class& value, const mpz_class& factor, const mpz_class& k) {
  if (sgn(value) <= 0) return true;
  // ceil(value / factor) <= 2^k  <=>  bitlen(ceil(value/factor) - 1) <= k
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), value.get_mpz_t(), factor.get_mpz_t());
  return mpz_class(static_cast<unsigned long>(bit_length(q - 1))) <= k;
}

// value >= factor * 2^k.
bool ge_factor_pow2(const mpz_class& value, const mpz_class& factor, const mpz_class& k) {
  // floor(value / factor) >= 2^k  <=>  bitlen(floor(value/factor)) > k
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), value.get_mpz_t(), factor.get_mpz_t());
  if (sgn(q) <= 0) return false;
  return mpz_class(static_cast<unsigned long>(bit_length(q))) > k;
}

mpz_class floor_scaled(const mpz_class& B, long num, long den) {
  mpz_class r = B * num;
  mpz_fdiv_q_ui(r.get_mpz_t(), r.get_mpz_t(), static_cast<unsigned long>(den));
  return r;
}

mpz_class ceil_scaled(const mpz_class& B, long num, long den) {
  mpz_class r = B * num;
  mpz_cdiv_q_ui(r.get_mpz_t(), r.get_mpz_t(), static_cast<unsigned long>(den));
  return r;
}

}  // namespace

CertifyResult certify_le_exp(const mpz_class& value, const mpz_class& factor,
                             const mpz_class& B) {
  if (sgn(B) < 0 || sgn(factor) <= 0) {
    throw Error(Errc::invalid_argument, "certify_le_exp needs B >= 0 and factor >= 1");
  }
  if (sgn(B) == 0) {
    return value <= factor ? CertifyResult{Verdict::pass, 1} : CertifyResult{Verdict::fail, 0};
  }
  if (le_factor_pow2(value, factor, floor_scaled(B, kTier1Num, kTier1Den))) {
    return {Verdict::pass, 1};
  }
  if (le_factor_pow2(value, factor, floor_scaled(B, kTier2Num, kTier2Den))) {
    return {Verdict::pass, 2};
  }
  if (ge_factor_pow2(value, factor, ceil_scaled(B, kFailNum, kFailDen))) {
    return {Verdict::fail, 0};
  }
  return {Verdict::marginal, 0};
}

Verdict certify_h_le(const Rat& q, const mpz_class& B) {
  return certify_le_exp(q.height(), B).verdict;
}

}  // namespace qbiject
