#include <doctest.h>

#include <numeric>

#include "qbiject/error.hpp"
#include "qbiject/lex.hpp"
#include "qbiject/pila.hpp"

using namespace qbiject;

namespace {

Poly stage_one() { return Poly({Rat(0), Rat(1537, 1536), Rat(-3, 1536), Rat(2, 1536)}); }

// Naive C_f(T) over every q with H(q) <= T.
std::uint64_t brute_count(const Poly& f, std::uint64_t T) {
  std::uint64_t c = 0;
  LexCursor cur;
  const std::uint64_t n = farey_count(T);
  for (std::uint64_t i = 0; i < n; ++i) c += f.eval(cur.next()).height() <= T;
  return c;
}

}  // namespace

TEST_CASE("height coefficients") {
  CHECK(poly_height_coeff(Poly::x()) == std::make_pair(mpz_class(1), 1ul));
  const Poly half_sq({Rat(0), Rat(0), Rat(1, 2)});
  CHECK(poly_height_coeff(half_sq) == std::make_pair(mpz_class(2), 2ul));
  for (const Poly& f : {half_sq, stage_one(), Poly::x() + Rat(1, 192) * node_product({Rat(0), Rat(1), Rat(1, 2)})}) {
    const auto [b, d] = poly_height_coeff(f);
    LexCursor cur;
    for (std::uint64_t i = 0; i < farey_count(50); ++i) {
      const Rat q = cur.next();
      REQUIRE(f.eval(q).height() <= b * pow_ui(q.height(), d));
    }
  }
  CHECK(poly_height_coeff(stage_one()) == std::make_pair(mpz_class(1542), 3ul));
}

TEST_CASE("slow function upper bound") {
  SlowFunction s;
  CHECK(s_upper_ceil(s, 2) == 2);          // 2 ln 2 = 1.386
  CHECK(s_upper_ceil(s, 1124118) == 28);   // 27.89
  CHECK(s_upper_ceil(s, 1) == 0);
  SlowFunction zero{Rat(0), 1};
  CHECK(s_upper_ceil(zero, 1000) == 0);
}

TEST_CASE("choosing thresholds") {
  SlowFunction s;
  CHECK(choose_T(1, 1, 2, s) == 2);
  SlowFunction zero{Rat(0), 1};
  CHECK(choose_T(10, 3, 11, zero) == 11);
  const mpz_class T = choose_T(10, 3, 11, s);
  mpz_class root;
  mpz_class ratio = T / 10;
  mpz_root(root.get_mpz_t(), ratio.get_mpz_t(), 3);
  CHECK(mpz_class(static_cast<unsigned long>(farey_count(root.get_ui()))) >= s_upper_ceil(s, T));
  // Least: one below fails.
  mpz_class ratio2 = (T - 1) / 10, root2;
  mpz_root(root2.get_mpz_t(), ratio2.get_mpz_t(), 3);
  CHECK((T == 11 || mpz_class(static_cast<unsigned long>(farey_count(root2.get_ui()))) < s_upper_ceil(s, T - 1)));
  CHECK(choose_T(1542, 3, 1543, s) == 1124118);
}

TEST_CASE("exact counting") {
  CHECK(count_Cf(Poly::x(), 5) == 11);
  CHECK(count_Cf(Poly::x(), 1) == 2);
  CHECK(count_Cf(stage_one(), 1) == 2);
  for (std::uint64_t T : {1ull, 7ull, 100ull, 1536ull, 3000ull}) {
    CHECK(count_Cf(stage_one(), T) == brute_count(stage_one(), T));
  }
  const Poly g({Rat(0), Rat(5, 6), Rat(0), Rat(1, 6)});  // x/6 (5 + x^2), leading 1/6
  for (std::uint64_t T : {10ull, 200ull, 1000ull}) CHECK(count_Cf(g, T) == brute_count(g, T));
}

TEST_CASE("stage zero walkthrough") {
  Config c;
  c.mode = Mode::pila;
  c.stages = 1;
  const Trace t = run_pila(c);
  REQUIRE(t.stages.size() == 2);
  const auto& s0 = t.stages[0];
  CHECK(s0.T == 2);
  CHECK(s0.q_size == 3);
  CHECK(s0.case_tag == "i");
  CHECK(s0.z == Rat(0));
  CHECK(s0.eps == Rat(1, 768));
  CHECK(s0.aux.at("r") == "1/3");
  CHECK(s0.count == 3);
  const auto fs = pila_partial_sums(t);
  CHECK(fs[1] == stage_one());
  const auto& s1 = t.stages[1];
  CHECK(s1.b == 1542);
  CHECK(s1.d == 3);
  CHECK(s1.T == 1124118);
  CHECK(s1.count >= s1.s_ceil);
  CHECK(!s1.stepped);
  CHECK(!t.halted.has_value());
}

TEST_CASE("node budget halts the run") {
  Config c;
  c.mode = Mode::pila;
  c.stages = 2;
  const Trace t = run_pila(c);
  REQUIRE(t.halted.has_value());
  CHECK(t.halted->rfind("StageOverflow", 0) == 0);
  CHECK(t.stages.size() == 2);
}

TEST_CASE("case (ii) lands exactly on the target") {
  // Start the targets at 1/3, which f_0 = x misses on Q_0 = {0, 1/2, 1}.
  Config c;
  c.mode = Mode::pila;
  c.stages = 1;
  c.y_prefix = {Rat(1, 3)};
  const Trace t = run_pila(c);
  const auto& s0 = t.stages[0];
  CHECK(s0.case_tag == "ii");
  CHECK(s0.y == Rat(1, 3));
  const auto fs = pila_partial_sums(t);
  CHECK(fs[1].eval(s0.z) == Rat(1, 3));
  CHECK(s0.eps.abs() <= Rat(1, 768));
  CHECK(s0.z.den() > 2);
}

TEST_CASE("eps bound formula") {
  // |Q| = 11 gives 4^-12 / 11.
  const Rat b(mpz_class(1), (mpz_class(1) << 24) * 11);
  CHECK(b == Rat(mpz_class(1), mpz_class(184549376)));
}

TEST_CASE("node sets and freeze samples") {
  const auto Q = pila_nodes(3, {Rat(1, 7), Rat(1, 2)});
  CHECK(Q.size() == 6);
  CHECK(std::is_sorted(Q.begin(), Q.end()));
  CHECK(freeze_sample(2, 100).size() == 3);
  const auto s = freeze_sample(1000, 100);
  CHECK(s.size() == 100);
  CHECK(s.front() == Rat(0));
  for (const auto& q : s) CHECK(q.den() <= 1000);
}
