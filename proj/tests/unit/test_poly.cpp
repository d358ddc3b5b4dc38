#include <doctest.h>

#include <random>

#include "qbiject/error.hpp"
#include "qbiject/invert.hpp"
#include "qbiject/partial_sum.hpp"
#include "qbiject/poly.hpp"

using namespace qbiject;

namespace {

Poly P(std::initializer_list<Rat> c) { return Poly(std::vector<Rat>(c)); }

Rat random_unit(std::mt19937_64& g) {
  std::uniform_int_distribution<long> den(1, 1000);
  const long d = den(g);
  std::uniform_int_distribution<long> num(0, d);
  return Rat(num(g), d);
}

Poly random_poly(std::mt19937_64& g) {
  std::uniform_int_distribution<long> c(-50, 50), d(1, 30), deg(0, 6);
  std::vector<Rat> cs;
  for (long i = 0, n = deg(g); i <= n; ++i) cs.emplace_back(c(g), d(g));
  return Poly(cs);
}

}  // namespace

TEST_CASE("evaluation") {
  CHECK(Poly::x().eval(Rat(1, 2)) == Rat(1, 2));
  const Poly p = Rat(1, 192) * node_product({Rat(0), Rat(1), Rat(1, 2)});
  CHECK(p.eval(Rat(1, 3)) == Rat(1, 5184));
  CHECK(Poly().eval(Rat(3, 7)) == Rat(0));
  CHECK(Poly().degree() == -1);
  CHECK(P({Rat(1), Rat(0), Rat(0)}).degree() == 0);
}

TEST_CASE("node products") {
  CHECK(node_product({Rat(0), Rat(1)}) == P({Rat(0), Rat(-1), Rat(1)}));
  CHECK(node_product({Rat(0), Rat(1), Rat(1, 2)}) == P({Rat(0), Rat(1, 2), Rat(-3, 2), Rat(1)}));
  CHECK(node_product({}) == Poly::constant(Rat(1)));
  CHECK_THROWS_AS(node_product({Rat(1, 3), Rat(1, 3)}), Error);
  const std::vector<Rat> nodes{Rat(0), Rat(1, 7), Rat(2, 9), Rat(1)};
  const Poly np = node_product(nodes);
  for (const auto& x : nodes) CHECK(np.eval(x).is_zero());
  CHECK(!np.eval(Rat(1, 2)).is_zero());
}

TEST_CASE("sup bound and derivative") {
  CHECK(sup_abs_bound_unit(P({Rat(0), Rat(-1), Rat(1)})) == Rat(2));
  CHECK(sup_abs_bound_unit(Poly::constant(Rat(3, 4))) == Rat(3, 4));
  CHECK(sup_abs_bound_unit(node_product({Rat(0), Rat(1), Rat(1, 2)})) == Rat(3));
  CHECK(derivative(Poly::x()) == Poly::constant(Rat(1)));
  CHECK(derivative(P({Rat(0), Rat(-1), Rat(1)})) == P({Rat(-1), Rat(2)}));
  CHECK(derivative(node_product({Rat(0), Rat(1), Rat(1, 2)})) == P({Rat(1, 2), Rat(-3), Rat(3)}));
}

TEST_CASE("ring homomorphism on random inputs") {
  std::mt19937_64 g(20240501);
  for (int i = 0; i < 200; ++i) {
    const Poly a = random_poly(g), b = random_poly(g);
    const Rat x = random_unit(g);
    REQUIRE((a + b).eval(x) == a.eval(x) + b.eval(x));
    REQUIRE((a - b).eval(x) == a.eval(x) - b.eval(x));
    REQUIRE((a * b).eval(x) == a.eval(x) * b.eval(x));
    if (!b.is_zero()) {
      const auto [q, r] = a.divmod(b);
      REQUIRE(q * b + r == a);
      REQUIRE(r.degree() < b.degree());
    }
  }
}

TEST_CASE("tail bounds and enclosures") {
  CHECK(tail_bound(1) == Rat(1, 3));
  CHECK(tail_bound(2) == Rat(1, 12));
  for (unsigned long n = 1; n < 30; ++n) CHECK(tail_bound(n + 1) == tail_bound(n) / Rat(4));
  // Geometric sum oracle: sum_{k=3}^{60} 4^(1-k) < 1/12 and within 4^-58 of it.
  Rat s(0);
  for (unsigned long k = 3; k <= 60; ++k) s += Rat(mpz_class(1), mpz_class(1) << (2 * (k - 1)));
  CHECK(s < tail_bound(2));
  CHECK(tail_bound(2) - s < Rat(mpz_class(1), mpz_class(1) << 116));
  const auto [lo, hi] = eval_enclosure(Poly::x(), 1, Rat(1, 2));
  CHECK(lo == Rat(1, 6));
  CHECK(hi == Rat(5, 6));
  const auto [lo2, hi2] = eval_enclosure(Poly::x(), 2, Rat(1, 3));
  CHECK(lo2 == Rat(1, 4));
  CHECK(hi2 == Rat(5, 12));
}

TEST_CASE("monotone inversion") {
  const auto id = IncreasingCertificate::from_lower_bound(Rat(1));
  auto [lo, hi] = monotone_invert(Poly::x(), Rat(1, 3), 1000, &id);
  CHECK(lo <= Rat(1, 3));
  CHECK(Rat(1, 3) <= hi);
  CHECK(hi - lo <= Rat(1, 1000));

  const Poly sq = P({Rat(0), Rat(0), Rat(1)});
  const auto cert = IncreasingCertificate::by_sturm(sq);
  REQUIRE(cert.has_value());
  auto [a, b] = monotone_invert(sq, Rat(1, 2), 1000000, &*cert);
  CHECK(sq.eval(a) <= Rat(1, 2));
  CHECK(Rat(1, 2) <= sq.eval(b));
  CHECK(b - a <= Rat(1, 1000000));

  CHECK_THROWS_AS(monotone_invert(Poly::x(), Rat(2), 10, &id), Error);
  CHECK_THROWS_AS(monotone_invert(Poly::x(), Rat(1, 2), 10, nullptr), Error);
  CHECK_THROWS_AS(IncreasingCertificate::from_lower_bound(Rat(0)), Error);
  CHECK(!IncreasingCertificate::by_sturm(P({Rat(0), Rat(1), Rat(-1)})).has_value());

  // Exact dyadic preimage gives a degenerate bracket.
  auto [c, d] = monotone_invert(Poly::x(), Rat(3, 8), 1024, &id);
  CHECK(c == Rat(3, 8));
  CHECK(d == Rat(3, 8));
}

TEST_CASE("nested brackets shrink and match plain bisection") {
  // f = x + x^3/4 - x^2/8 is increasing on [0,1].
  const Poly f = P({Rat(0), Rat(1), Rat(-1, 8), Rat(1, 4)});
  const Rat y(5, 11);
  MonotoneInverter inv(IntPoly::from(f), y);
  Rat plo(0), phi(1);
  Rat prev_lo(0), prev_hi(1);
  for (unsigned long K = 1; K <= 400; ++K) {
    const Rat mid = (plo + phi) / Rat(2);
    if (f.eval(mid) <= y) plo = mid; else phi = mid;
    const auto [lo, hi] = inv.bracket_at(K);
    REQUIRE(lo == plo);
    REQUIRE(hi == phi);
    REQUIRE(prev_lo <= lo);
    REQUIRE(hi <= prev_hi);
    prev_lo = lo;
    prev_hi = hi;
  }
  // A fresh inverter jumping straight to a deep level agrees.
  MonotoneInverter jump(IntPoly::from(f), y);
  const auto [jl, jh] = jump.bracket_at(400);
  CHECK(jl == plo);
  CHECK(jh == phi);
  const auto [deep_lo, deep_hi] = jump.bracket_at(5000);
  CHECK(f.eval(deep_lo) <= y);
  CHECK(y <= f.eval(deep_hi));
  CHECK(deep_hi - deep_lo == Rat(mpz_class(1), mpz_class(1) << 5000));
}

TEST_CASE("root counting and rational functions") {
  CHECK(count_roots_closed(P({Rat(-1, 2), Rat(1)}), Rat(0), Rat(1)) == 1);
  CHECK(count_roots_closed(P({Rat(0), Rat(1)}), Rat(0), Rat(1)) == 1);
  CHECK(count_roots_closed(P({Rat(-1), Rat(1)}), Rat(0), Rat(1)) == 1);
  CHECK(count_roots_closed(P({Rat(2), Rat(1)}), Rat(0), Rat(1)) == 0);
  CHECK(count_roots_closed(node_product({Rat(0), Rat(1, 3), Rat(1)}), Rat(0), Rat(1)) == 3);
  CHECK(count_roots_closed(P({Rat(1), Rat(0), Rat(1)}), Rat(0), Rat(1)) == 0);
  const RatFunc g(Poly::x(), P({Rat(1), Rat(1)}));
  CHECK(g.unit_safe());
  CHECK(g.eval(Rat(1)) == Rat(1, 2));
  const RatFunc bad(Poly::x(), P({Rat(-1), Rat(2)}));
  CHECK(!bad.unit_safe());
  CHECK_THROWS_AS(bad.eval(Rat(1, 2)), Error);
}

TEST_CASE("partial sums in nested form") {
  PartialSum f;
  f.push_node(Rat(0));
  f.push_coeff(Rat(1));
  f.push_node(Rat(1));
  f.push_coeff(Rat(0));
  f.push_node(Rat(1, 2));
  f.push_coeff(Rat(1, 192));
  f.push_node(Rat(1, 3));
  CHECK(f.eval_rat(Rat(1, 3)) == Rat(1729, 5184));
  CHECK(f.to_poly(3) == Poly::x() + Rat(1, 192) * node_product({Rat(0), Rat(1), Rat(1, 2)}));
  CHECK(f.term(3, Rat(1, 3)) == Rat(1, 5184));
  const IntPoly ip = f.to_int_poly();
  CHECK(ip.eval(Rat(1, 3)).reduce() == Rat(1729, 5184));
  CHECK(cmp(PartialSum::node_prod(f.nodes(), 3, Rat(1, 3)), Rat(1, 27)) == 0);
}
