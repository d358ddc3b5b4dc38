#pragma once

#include <gmpxx.h>

#include <vector>

#include "qbiject/poly.hpp"
#include "qbiject/rat.hpp"

namespace qbiject {

/// f_n(x) = sum_{k=1..n} c_k prod_{i<k} (x - x_i), kept in this nested form so that
/// evaluation never expands the huge coefficients. c_k = eps_k / k.
class PartialSum {
 public:
  /// Appends a node x_i; nodes must be pushed before the coefficient that uses them.
  void push_node(const Rat& x);
  /// Appends c_{n+1}; requires n+1 nodes present.
  void push_coeff(const Rat& c);

  std::size_t terms() const { return c_.size(); }
  const std::vector<Rat>& nodes() const { return nodes_; }
  const std::vector<Rat>& coeffs() const { return c_; }

  /// f_n(q) for n <= terms(), unreduced.
  Frac eval(const Rat& q, std::size_t n) const;
  Frac eval(const Rat& q) const { return eval(q, terms()); }
  /// Canonical f_n(q); sums term by term when the common denominator is huge,
  /// which keeps every gcd unbalanced and cheap.
  Rat eval_rat(const Rat& q, std::size_t n) const;
  Rat eval_rat(const Rat& q) const { return eval_rat(q, terms()); }
  /// p_n(q) = c_n prod_{i<n}(q - x_i) for 1 <= n <= terms().
  Rat term(std::size_t n, const Rat& q) const;
  /// prod_{i<n} (q - x_i).
  static Frac node_prod(const std::vector<Rat>& nodes, std::size_t n, const Rat& q);

  /// Integer form of f_n with a (not necessarily least) common denominator.
  IntPoly to_int_poly(std::size_t n) const;
  IntPoly to_int_poly() const { return to_int_poly(terms()); }
  /// Expanded rational form; canonical coefficients, use for small instances.
  Poly to_poly(std::size_t n) const;

 private:
  std::vector<Rat> nodes_;
  std::vector<Rat> c_;
  // c_k = a_[k] / lcm_ with a common denominator maintained incrementally.
  std::vector<mpz_class> a_;
  mpz_class lcm_{1};
};

}  // namespace qbiject
