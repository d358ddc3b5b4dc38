#pragma once

#include <gmpxx.h>

#include <optional>
#include <utility>

#include "qbiject/poly.hpp"
#include "qbiject/rat.hpp"

namespace qbiject {

/// Evidence that a polynomial is strictly increasing on [0,1].
struct IncreasingCertificate {
  enum class Kind { derivative_lower_bound, sturm };
  Kind kind;
  Rat lower_bound;  // meaningful for derivative_lower_bound: p' >= lower_bound > 0

  /// p' >= lb on [0,1], lb > 0 supplied by a caller that proved it.
  static IncreasingCertificate from_lower_bound(const Rat& lb);
  /// p' has no root in (0,1) and is positive inside; exact.
  static std::optional<IncreasingCertificate> by_sturm(const Poly& p);
};

/// Locates the unique preimage of y under an increasing polynomial by refining a
/// dyadic bracket [X/2^k, (X+1)/2^k]. The brackets are exactly those midpoint
/// bisection would produce; long refinements are accelerated by Newton steps
/// whose every output is re-verified by exact sign evaluation.
class MonotoneInverter {
 public:
  MonotoneInverter(IntPoly f, const Rat& y);

  /// Bracket of width 2^-K, or a degenerate one at an exact dyadic preimage.
  std::pair<Rat, Rat> bracket_at(unsigned long K);
  const std::optional<Rat>& exact_root() const { return exact_; }
  unsigned long level() const { return k_; }
  const IntPoly& poly() const { return f_; }

  /// sign(f(X / 2^k) - y)
  int cmp_at(const mpz_class& X, unsigned long k) const;

 private:
  void bisect_to(unsigned long K);
  void newton_to(unsigned long K);
  bool settle(mpz_class& X, unsigned long k);

  IntPoly f_;
  mpz_class yn_, yd_;
  unsigned long k_ = 0;
  mpz_class X_{0};
  std::optional<Rat> exact_;
};

/// Convenience entry point: bracket of width <= 1/width_den around p^-1(y).
std::pair<Rat, Rat> monotone_invert(const Poly& p, const Rat& y, const mpz_class& width_den,
                                    const IncreasingCertificate* cert);

/// Smallest K with 2^-K <= 1/width_den.
unsigned long level_for_width(const mpz_class& width_den);

}  // namespace qbiject
