#include "qbiject/approx.hpp"

#include "qbiject/error.hpp"

namespace qbiject {

Rat bounded_rational_near(const Rat& lo, const Rat& hi, const mpz_class& M, Side side) {
  if (sgn(M) <= 0) throw Error(Errc::invalid_argument, "M must be positive");
  if (hi < lo || !lo.in_unit() || !hi.in_unit()) {
    throw Error(Errc::invalid_argument, "bracket must be an ordered subinterval of [0,1]");
  }
  // width < 1/(2M)  <=>  2M (hi - lo) < 1
  const Rat width = hi - lo;
  if (!(Rat(mpz_class(2 * M)) * width < Rat(1))) {
    throw Error(Errc::bracket_too_wide,
                "bracket width " + width.str() + " is not below 1/(2*" + M.get_str() + ")");
  }
  mpz_class k;
  if (side == Side::below) {
    mpz_class t = lo.num() * M;
    mpz_fdiv_q(k.get_mpz_t(), t.get_mpz_t(), lo.den().get_mpz_t());
  } else {
    mpz_class t = hi.num() * M;
    mpz_cdiv_q(k.get_mpz_t(), t.get_mpz_t(), hi.den().get_mpz_t());
  }
  return Rat(k, M);
}

}  // namespace qbiject
