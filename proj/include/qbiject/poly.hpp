#pragma once

#include <gmpxx.h>

#include <utility>
#include <vector>

#include "qbiject/rat.hpp"

namespace qbiject {

/// Dense polynomial over Q, lowest degree first, no trailing zeros.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rat> coeffs);
  static Poly constant(const Rat& c) { return Poly({c}); }
  static Poly x() { return Poly({Rat(0), Rat(1)}); }
  /// x - r
  static Poly linear_root(const Rat& r) { return Poly({-r, Rat(1)}); }

  const std::vector<Rat>& coeffs() const { return c_; }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  Rat coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Rat(0); }
  Rat leading() const { return c_.empty() ? Rat(0) : c_.back(); }

  Rat eval(const Rat& q) const;
  Frac eval_frac(const Rat& q) const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(const Rat& s, const Poly& p);
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

  /// Euclidean division; divisor must be nonzero.
  std::pair<Poly, Poly> divmod(const Poly& divisor) const;

 private:
  void trim();
  std::vector<Rat> c_;
};

Poly derivative(const Poly& p);

/// Monic polynomial prod (x - node). Throws DuplicateNode.
Poly node_product(const std::vector<Rat>& nodes);

/// sum |c_i|, an upper bound for sup |p| on [0,1].
Rat sup_abs_bound_unit(const Poly& p);

/// (4/3) 4^-n = sum_{k>n} 4^(1-k).
Rat tail_bound(unsigned long n);

/// [f_n(q) - tail, f_n(q) + tail].
std::pair<Rat, Rat> eval_enclosure(const Poly& fn, unsigned long n, const Rat& q);

/// Integer form p(x) = (1/L) sum a_i x^i, evaluated without intermediate gcds.
struct IntPoly {
  std::vector<mpz_class> a;  // lowest degree first
  mpz_class L{1};

  static IntPoly from(const Poly& p);  // L = lcm of the coefficient denominators
  int degree() const { return static_cast<int>(a.size()) - 1; }

  Frac eval(const Rat& q) const;
  /// sum a_i X^i 2^(k(d-i)); the value at X/2^k is this over L 2^(kd).
  mpz_class eval_dyadic_num(const mpz_class& X, unsigned long k) const;
  /// Same for the derivative, whose value at X/2^k is this over L 2^(k(d-1)).
  mpz_class eval_dyadic_deriv_num(const mpz_class& X, unsigned long k) const;
  /// Divides out the common content of a and L.
  void normalize();
};

/// Sturm-exact count of distinct real roots of p in the closed interval [lo, hi].
int count_roots_closed(const Poly& p, const Rat& lo, const Rat& hi);

/// Quotient of polynomials, used for avoid functions and the LFT families.
class RatFunc {
 public:
  RatFunc() = default;
  RatFunc(Poly num, Poly den);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  /// Throws PoleInUnit if den(q) = 0.
  Rat eval(const Rat& q) const;
  /// den has no root in [0,1], decided by a Sturm count.
  bool unit_safe() const;

 private:
  Poly num_;
  Poly den_;
};

}  // namespace qbiject
