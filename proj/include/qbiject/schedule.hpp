#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace qbiject {

/// X(0) = 1, X(t) = c^t (t-1)! for t >= 1; c = 48 is the strict schedule.
class HeightSchedule {
 public:
  static HeightSchedule strict() { return HeightSchedule(48, true); }
  static HeightSchedule scaled(unsigned long c) { return HeightSchedule(c, false); }

  bool is_strict() const { return strict_; }
  unsigned long c() const { return c_; }
  std::string kind_name() const { return strict_ ? "strict" : "scaled"; }

  const mpz_class& X(unsigned long t) const;
  /// B(t) = 4 t X(t), t >= 1.
  mpz_class B(unsigned long t) const;
  /// The even-step exponent 13 m X(m).
  mpz_class apriori_exponent(unsigned long m) const { return 13 * m * X(m); }

 private:
  HeightSchedule(unsigned long c, bool strict) : c_(c), strict_(strict) {}

  unsigned long c_;
  bool strict_;
  mutable std::vector<mpz_class> memo_;
};

}  // namespace qbiject
