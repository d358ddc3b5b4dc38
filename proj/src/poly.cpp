#include "qbiject/poly.hpp"

#include <algorithm>

#include "qbiject/error.hpp"

namespace qbiject {

Poly::Poly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Rat Poly::eval(const Rat& q) const { return eval_frac(q).reduce(); }

Frac Poly::eval_frac(const Rat& q) const {
  if (c_.empty()) return Frac();
  return IntPoly::from(*this).eval(q);
}

Poly& Poly::operator+=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<Rat> out(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  }
  return Poly(std::move(out));
}

Poly operator*(const Rat& s, const Poly& p) {
  if (s.is_zero()) return Poly();
  std::vector<Rat> out = p.c_;
  for (auto& c : out) c *= s;
  return Poly(std::move(out));
}

std::pair<Poly, Poly> Poly::divmod(const Poly& divisor) const {
  if (divisor.is_zero()) throw Error(Errc::invalid_argument, "polynomial division by zero");
  std::vector<Rat> rem = c_;
  const int dd = divisor.degree();
  const Rat lead = divisor.leading();
  if (degree() < dd) return {Poly(), *this};
  std::vector<Rat> quo(static_cast<std::size_t>(degree() - dd + 1));
  for (int i = degree(); i >= dd; --i) {
    const Rat& top = rem[static_cast<std::size_t>(i)];
    if (top.is_zero()) continue;
    const Rat f = top / lead;
    quo[static_cast<std::size_t>(i - dd)] = f;
    for (int j = 0; j <= dd; ++j) {
      rem[static_cast<std::size_t>(i - dd + j)] -= f * divisor.c_[static_cast<std::size_t>(j)];
    }
  }
  return {Poly(std::move(quo)), Poly(std::move(rem))};
}

Poly derivative(const Poly& p) {
  std::vector<Rat> out;
  for (std::size_t i = 1; i < p.coeffs().size(); ++i) {
    out.push_back(Rat(static_cast<long>(i)) * p.coeffs()[i]);
  }
  return Poly(std::move(out));
}

Poly node_product(const std::vector<Rat>& nodes) {
  std::vector<Rat> sorted = nodes;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(Errc::duplicate_node, "node list contains a repeated value");
  }
  // Multiply by (x - r) in place: c'_i = c_{i-1} - r c_i.
  std::vector<Rat> c{Rat(1)};
  for (const auto& r : nodes) {
    c.push_back(Rat(0));
    for (std::size_t i = c.size() - 1; i > 0; --i) c[i] = c[i - 1] - r * c[i];
    c[0] = -r * c[0];
  }
  return Poly(std::move(c));
}

Rat sup_abs_bound_unit(const Poly& p) {
  Rat s;
  for (const auto& c : p.coeffs()) s += c.abs();
  return s;
}

Rat tail_bound(unsigned long n) {
  if (n == 0) throw Error(Errc::invalid_argument, "tail_bound needs n >= 1");
  return Rat(mpz_class(1), mpz_class(3) << (2 * (n - 1)));
}

std::pair<Rat, Rat> eval_enclosure(const Poly& fn, unsigned long n, const Rat& q) {
  if (!q.in_unit()) throw Error(Errc::invalid_argument, "enclosure point outside [0,1]");
  const Rat v = fn.eval(q);
  const Rat t = tail_bound(n);
  return {v - t, v + t};
}

IntPoly IntPoly::from(const Poly& p) {
  IntPoly r;
  for (const auto& c : p.coeffs()) mpz_lcm(r.L.get_mpz_t(), r.L.get_mpz_t(), c.den().get_mpz_t());
  r.a.reserve(p.coeffs().size());
  for (const auto& c : p.coeffs()) {
    mpz_class s;
    mpz_divexact(s.get_mpz_t(), r.L.get_mpz_t(), c.den().get_mpz_t());
    r.a.push_back(c.num() * s);
  }
  return r;
}

Frac IntPoly::eval(const Rat& q) const {
  if (a.empty()) return Frac();
  const mpz_class& p = q.num();
  const mpz_class& Q = q.den();
  // Homogeneous Horner: N = sum a_i p^i Q^(d-i).
  mpz_class N = a.back();
  mpz_class Qpow = 1;
  for (std::size_t i = a.size() - 1; i-- > 0;) {
    Qpow *= Q;
    N = N * p + a[i] * Qpow;
  }
  return Frac(N, L * Qpow);
}

mpz_class IntPoly::eval_dyadic_num(const mpz_class& X, unsigned long k) const {
  if (a.empty()) return 0;
  mpz_class N = a.back();
  unsigned long shift = 0;
  for (std::size_t i = a.size() - 1; i-- > 0;) {
    shift += k;
    N *= X;
    if (sgn(a[i]) != 0) N += a[i] << shift;
  }
  return N;
}

mpz_class IntPoly::eval_dyadic_deriv_num(const mpz_class& X, unsigned long k) const {
  if (a.size() < 2) return 0;
  mpz_class N = a.back() * static_cast<unsigned long>(a.size() - 1);
  unsigned long shift = 0;
  for (std::size_t i = a.size() - 1; i-- > 1;) {
    shift += k;
    N *= X;
    if (sgn(a[i]) != 0) N += (a[i] * static_cast<unsigned long>(i)) << shift;
  }
  return N;
}

void IntPoly::normalize() {
  mpz_class g = L;
  for (const auto& c : a) {
    if (g == 1) break;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  }
  if (g == 1 || sgn(g) == 0) return;
  for (auto& c : a) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  mpz_divexact(L.get_mpz_t(), L.get_mpz_t(), g.get_mpz_t());
}

namespace {

int sign_changes(const std::vector<Poly>& seq, const Rat& x) {
  int changes = 0, last = 0;
  for (const auto& p : seq) {
    const int s = p.eval(x).sign();
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace

int count_roots_closed(const Poly& p, const Rat& lo, const Rat& hi) {
  if (p.is_zero()) throw Error(Errc::invalid_argument, "zero polynomial has infinitely many roots");
  // Deflate roots sitting on the endpoints so Sturm only sees non-root endpoints.
  Poly q = p;
  int endpoint_roots = 0;
  for (const Rat& e : {lo, hi}) {
    bool hit = false;
    while (q.degree() > 0 && q.eval(e).is_zero()) {
      q = q.divmod(Poly::linear_root(e)).first;
      hit = true;
    }
    if (hit) ++endpoint_roots;
    if (lo == hi) break;
  }
  if (q.degree() <= 0) return endpoint_roots;
  std::vector<Poly> seq{q, derivative(q)};
  for (;;) {
    Poly r = seq[seq.size() - 2].divmod(seq.back()).second;
    if (r.is_zero()) break;
    seq.push_back(Rat(-1) * r);
    if (r.degree() == 0) break;
  }
  return endpoint_roots + sign_changes(seq, lo) - sign_changes(seq, hi);
}

RatFunc::RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw Error(Errc::invalid_argument, "rational function with zero denominator");
}

Rat RatFunc::eval(const Rat& q) const {
  const Rat d = den_.eval(q);
  if (d.is_zero()) throw Error(Errc::pole_in_unit, "denominator vanishes at " + q.str());
  return num_.eval(q) / d;
}

bool RatFunc::unit_safe() const { return count_roots_closed(den_, Rat(0), Rat(1)) == 0; }

}  // namespace qbiject
