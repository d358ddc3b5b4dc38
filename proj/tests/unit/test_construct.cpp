#include <doctest.h>

#include <fstream>
#include <sstream>

#include "qbiject/construction.hpp"
#include "qbiject/error.hpp"
#include "qbiject/lex.hpp"

using namespace qbiject;

namespace {

Config basic(unsigned long depth) {
  Config c;
  c.depth = depth;
  return c;
}

}  // namespace

TEST_CASE("seed records") {
  const Trace t = run_construction(basic(3));
  REQUIRE(t.steps.size() == 4);
  CHECK(t.steps[0].node == Rat(0));
  CHECK(!t.steps[0].eps.has_value());
  CHECK(t.steps[1].node == Rat(1));
  CHECK(*t.steps[1].eps == Rat(1));
  CHECK(t.steps[2].node == Rat(1, 2));
  CHECK(t.steps[2].eps->is_zero());
  CHECK(t.steps[2].value == Rat(1, 2));
  CHECK(t.steps[2].aux.at("seed_repair") == true);
  CHECK(t.steps[3].kind == "odd");
}

TEST_CASE("first odd step with the default avoid family") {
  const Trace t = run_construction(basic(3));
  const auto& s = t.steps[3];
  CHECK(*s.j == 3);
  CHECK(s.node == Rat(1, 3));
  // s = 0 would give f(1/3) = 1/3, the identity's value.
  CHECK(s.aux.at("s") == 1);
  CHECK(*s.eps == Rat(1, 64));
  CHECK(s.value == Rat(1729, 5184));
  CHECK(s.eps->abs() <= Rat(1, 16));
  REQUIRE(s.witness.has_value());
  CHECK(s.witness->index == 0);
  CHECK(s.witness->g_value == Rat(1, 3));
}

TEST_CASE("first odd step with no avoid family") {
  Config c = basic(3);
  c.avoid = AvoidFamily{};
  const Trace t = run_construction(c);
  CHECK(t.steps[3].eps->is_zero());
  CHECK(t.steps[3].value == Rat(1, 3));
  CHECK(!t.steps[3].witness.has_value());
}

TEST_CASE("first even step hits 1/3 exactly") {
  const Trace t = run_construction(basic(4));
  const auto& s = t.steps[4];
  CHECK(s.kind == "even");
  CHECK(s.aux.at("b") == 3);
  CHECK(s.value == Rat(1, 3));
  CHECK(s.eps->abs() < Rat(1, 64));
  const PartialSum f = partial_sum_from_steps(t.steps);
  CHECK(f.eval_rat(s.node) == Rat(1, 3));
  CHECK(f.eval_rat(Rat(1, 3)) == Rat(1729, 5184));
}

TEST_CASE("step parity and exact pinned values") {
  const Trace t = run_construction(basic(21));
  int odd = 0, even = 0;
  for (const auto& s : t.steps) {
    odd += s.kind == "odd";
    even += s.kind == "even";
  }
  CHECK(odd == 10);
  CHECK(even == 9);
  CHECK(*f_exact_at(t, Rat(0)) == Rat(0));
  CHECK(*f_exact_at(t, Rat(1)) == Rat(1));
  CHECK(*f_exact_at(t, Rat(1, 3)) == Rat(1729, 5184));
  const Trace t5 = run_construction(basic(5));
  CHECK(!f_exact_at(t5, Rat(17, 19)).has_value());
}

TEST_CASE("target enumeration must start 0, 1") {
  Config c = basic(5);
  c.y_prefix = {Rat(1, 2)};
  CHECK_THROWS_AS(run_construction(c), Error);
  try {
    run_construction(c);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::bad_enumeration);
  }
  Config d = basic(9);
  d.y_prefix = {Rat(0), Rat(1), Rat(3, 7)};
  const Trace t = run_construction(d);
  CHECK(t.steps[2].node == Rat(3, 7));
  Config e = basic(9);
  e.y_kind = EnumKind::lex_desc;
  CHECK_NOTHROW(run_construction(e));
}

TEST_CASE("depth below three is refused") { CHECK_THROWS_AS(run_construction(basic(2)), Error); }

TEST_CASE("runs are deterministic") {
  const auto a = trace_to_json(run_construction(basic(15))).dump(1);
  const auto b = trace_to_json(run_construction(basic(15))).dump(1);
  CHECK(a == b);
}

TEST_CASE("golden depth-21 trace") {
  std::ifstream in(std::string(QBIJECT_SOURCE_DIR) + "/tests/golden/basic_depth21.json");
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  const auto now = trace_to_json(run_construction(basic(21))).dump(1) + "\n";
  CHECK(now == ss.str());
}

TEST_CASE("coverage and increasing targets at depth 40") {
  const Trace t = run_construction(basic(40));
  std::set<Rat> nodes;
  for (const auto& s : t.steps) nodes.insert(s.node);
  for (std::uint64_t i = 0; i <= 19; ++i) CHECK(nodes.count(lex_enumerate(i)) == 1);
  long prev = -1;
  for (const auto& s : t.steps) {
    if (!s.aux.contains("b")) continue;
    const long b = s.aux.at("b").get<long>();
    CHECK(b > prev);
    prev = b;
  }
}
