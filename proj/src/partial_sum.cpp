#include "qbiject/partial_sum.hpp"

#include "qbiject/error.hpp"

namespace qbiject {

void PartialSum::push_node(const Rat& x) { nodes_.push_back(x); }

void PartialSum::push_coeff(const Rat& c) {
  if (nodes_.size() < c_.size() + 1) {
    throw Error(Errc::invalid_argument, "coefficient pushed before its nodes");
  }
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), lcm_.get_mpz_t(), c.den().get_mpz_t());
  mpz_class grow;
  mpz_divexact(grow.get_mpz_t(), c.den().get_mpz_t(), g.get_mpz_t());
  if (grow != 1) {
    for (auto& a : a_) a *= grow;
    lcm_ *= grow;
  }
  mpz_class scale;
  mpz_divexact(scale.get_mpz_t(), lcm_.get_mpz_t(), c.den().get_mpz_t());
  a_.push_back(c.num() * scale);
  c_.push_back(c);
}

Frac PartialSum::eval(const Rat& q, std::size_t n) const {
  if (n > c_.size()) throw Error(Errc::invalid_argument, "partial sum index beyond terms");
  if (n == 0) return Frac();
  const mpz_class& p = q.num();
  const mpz_class& Q = q.den();
  // R_k = a_k + (q - x_k) R_{k+1}, held as S/D; (q - x_k) = w_k / e_k.
  mpz_class S = a_[n - 1];
  mpz_class D = 1;
  mpz_class w, e;
  for (std::size_t k = n - 1; k >= 1; --k) {
    const Rat& x = nodes_[k];
    w = p * x.den() - x.num() * Q;
    e = Q * x.den();
    S = a_[k - 1] * D * e + w * S;
    D *= e;
  }
  const Rat& x0 = nodes_[0];
  w = p * x0.den() - x0.num() * Q;
  e = Q * x0.den();
  return Frac(w * S, e * D * lcm_);
}

Rat PartialSum::eval_rat(const Rat& q, std::size_t n) const {
  constexpr std::size_t kTermwiseBits = std::size_t{1} << 20;
  if (bit_length(lcm_) < kTermwiseBits) return eval(q, n).reduce();
  Rat sum;
  Rat prod(1);
  for (std::size_t k = 1; k <= n; ++k) {
    prod *= q - nodes_[k - 1];
    if (prod.is_zero()) break;
    if (!c_[k - 1].is_zero()) sum += c_[k - 1] * prod;
  }
  return sum;
}

Rat PartialSum::term(std::size_t n, const Rat& q) const {
  if (n == 0 || n > c_.size()) throw Error(Errc::invalid_argument, "term index out of range");
  if (c_[n - 1].is_zero()) return Rat(0);
  return (Frac::of(c_[n - 1]) * node_prod(nodes_, n, q)).reduce();
}

Frac PartialSum::node_prod(const std::vector<Rat>& nodes, std::size_t n, const Rat& q) {
  Frac r(1, 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Rat& x = nodes[i];
    r.num *= q.num() * x.den() - x.num() * q.den();
    r.den *= q.den() * x.den();
    if (sgn(r.num) == 0) return Frac();
  }
  return r;
}

IntPoly PartialSum::to_int_poly(std::size_t n) const {
  if (n > c_.size()) throw Error(Errc::invalid_argument, "partial sum index beyond terms");
  IntPoly out;
  if (n == 0) return out;
  // R_k = a_k V_k + (v_k x - u_k) R_{k+1}, V_k = prod_{i=k..n-1} v_i.
  std::vector<mpz_class> R{a_[n - 1]};
  mpz_class V = 1;
  auto mul_linear = [](std::vector<mpz_class>& r, const mpz_class& v, const mpz_class& u) {
    r.push_back(0);
    for (std::size_t i = r.size() - 1; i > 0; --i) r[i] = v * r[i - 1] - u * r[i];
    r[0] = -u * r[0];
  };
  for (std::size_t k = n - 1; k >= 1; --k) {
    const Rat& x = nodes_[k];
    mul_linear(R, x.den(), x.num());
    V *= x.den();
    R[0] += a_[k - 1] * V;
  }
  const Rat& x0 = nodes_[0];
  mul_linear(R, x0.den(), x0.num());
  V *= x0.den();
  out.a = std::move(R);
  out.L = lcm_ * V;
  return out;
}

Poly PartialSum::to_poly(std::size_t n) const {
  if (n > c_.size()) throw Error(Errc::invalid_argument, "partial sum index beyond terms");
  Poly f;
  Poly prod = Poly::constant(Rat(1));
  for (std::size_t k = 1; k <= n; ++k) {
    prod = prod * Poly::linear_root(nodes_[k - 1]);
    f += c_[k - 1] * prod;
  }
  return f;
}

}  // namespace qbiject
