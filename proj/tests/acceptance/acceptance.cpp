// Acceptance suite. Run with --criterion N for one criterion, or with no
// arguments for all of them. Prints one line per criterion.
#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qbiject/construction.hpp"
#include "qbiject/error.hpp"
#include "qbiject/heights.hpp"
#include "qbiject/lex.hpp"
#include "qbiject/pila.hpp"
#include "qbiject/poly.hpp"
#include "qbiject/trace.hpp"
#include "qbiject/verify.hpp"

using namespace qbiject;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_s(double s) {
  std::ostringstream o;
  o.setf(std::ios::fixed);
  o.precision(1);
  o << s << " s";
  return o.str();
}

long peak_rss_mib() {
  rusage ru{};
  getrusage(RUSAGE_SELF, &ru);
  return ru.ru_maxrss / 1024;
}

std::string source_path(const std::string& rel) { return std::string(QBIJECT_SOURCE_DIR) + "/" + rel; }

Config load_config(const std::string& name) {
  std::ifstream in(source_path("configs/" + name));
  if (!in) throw Error(Errc::invalid_argument, "missing config " + name);
  return config_from_json(nlohmann::json::parse(in));
}

// Traces are expensive, so each config is run at most once per process.
const Trace& trace_for(const std::string& name) {
  static std::map<std::string, Trace> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    const Config c = load_config(name);
    it = cache.emplace(name, c.mode == Mode::pila ? run_pila(c) : run_construction(c)).first;
  }
  return it->second;
}

std::string first_failures(const VerifyReport& r, std::size_t limit = 3) {
  std::string s;
  std::size_t k = 0;
  for (const auto& e : r.entries) {
    if (e.verdict == Verdict::pass) continue;
    if (k++ == limit) break;
    s += " [" + e.id + " @ " + e.location + "]";
  }
  return s;
}

// 1 ---------------------------------------------------------------------------

Outcome criterion1() {
  const Config c = load_config("basic_depth61.json");
  const auto t0 = Clock::now();
  const Trace t = run_construction(c);
  const double secs = seconds_since(t0);
  const VerifyReport rep = verify_trace(t);

  std::set<Rat> nodes, values;
  for (const auto& s : t.steps) {
    nodes.insert(s.node);
    values.insert(s.value);
  }
  bool covered = true;
  for (std::uint64_t i = 0; i <= 30; ++i) {
    const Rat x = lex_enumerate(i);
    covered = covered && nodes.count(x) && values.count(x);
  }
  bool increasing = true;
  long prev = -1, evens = 0;
  for (const auto& s : t.steps) {
    if (s.kind != "even") continue;
    const long b = s.aux.at("b").get<long>();
    increasing = increasing && b > prev;
    prev = b;
    ++evens;
  }
  Outcome o;
  o.pass = secs < 120 && rep.clean() && covered && increasing && t.steps.size() == 62;
  o.detail = "depth 61 in " + fmt_s(secs) + " (limit 120 s), verify " + std::to_string(rep.count(Verdict::pass)) +
             "/" + std::to_string(rep.entries.size()) + " pass" + first_failures(rep) +
             ", x_0..x_30 covered both ways: " + (covered ? "yes" : "no") + ", " + std::to_string(evens) +
             " even-step b values strictly increasing: " + (increasing ? "yes" : "no");
  return o;
}

// 2 ---------------------------------------------------------------------------

bool eps_discipline(const Trace& t, std::string& why) {
  if (t.steps.size() < 3) {
    why = "fewer than three steps";
    return false;
  }
  if (!t.steps[1].eps || *t.steps[1].eps != Rat(1)) {
    why = "eps_1 != 1";
    return false;
  }
  if (!t.steps[2].eps || *t.steps[2].eps != Rat(0)) {
    why = "eps_2 != 0";
    return false;
  }
  for (std::size_t n = 3; n < t.steps.size(); ++n) {
    const unsigned long m = n - 1;
    const Rat bound(mpz_class(1), pow_ui(mpz_class(4), m));
    if (!t.steps[n].eps || t.steps[n].eps->abs() > bound) {
      why = "|eps_" + std::to_string(n) + "| > 4^-" + std::to_string(m);
      return false;
    }
  }
  return true;
}

Outcome criterion2() {
  std::vector<std::pair<std::string, Trace>> traces;
  traces.emplace_back("golden/basic_depth21", read_trace(source_path("tests/golden/basic_depth21.json")));
  for (const char* name : {"basic_depth21.json", "basic_depth61.json", "heights_scaled_c2_depth25.json",
                           "heights_strict_depth5.json"}) {
    traces.emplace_back(name, trace_for(name));
  }
  Outcome o{true, ""};
  std::size_t checked = 0;
  for (const auto& [name, t] : traces) {
    std::string why;
    if (!eps_discipline(t, why)) {
      o.pass = false;
      o.detail += " " + name + ": " + why + ";";
    }
    checked += t.steps.size();
  }
  if (o.pass) {
    o.detail = std::to_string(traces.size()) + " traces, " + std::to_string(checked) +
               " step records: eps_1 = 1, eps_2 = 0, |eps_{m+1}| <= 4^-m exactly";
  }
  return o;
}

// 3 ---------------------------------------------------------------------------

Outcome criterion3() {
  const Trace& t = trace_for("basic_depth21.json");
  const PartialSum f = partial_sum_from_steps(t.steps);
  const std::size_t N = t.steps.size() - 1;
  std::size_t vanish = 0, prefix = 0;
  bool ok = N == 21;
  for (std::size_t n = 1; n <= N && ok; ++n) {
    for (std::size_t m = 0; m < n && ok; ++m, ++vanish) ok = f.term(n, t.steps[m].node) == Rat(0);
    for (std::size_t k = 0; k <= n && ok; ++k, ++prefix) ok = f.eval_rat(t.steps[k].node, n) == t.steps[k].value;
  }
  return {ok, std::to_string(vanish) + " vanishing identities p_n(x_{j_m}) = 0 and " + std::to_string(prefix) +
                  " prefix identities f_n(x_{j_k}) = value_k, exact"};
}

// 4 ---------------------------------------------------------------------------

Outcome criterion4() {
  const Trace& t = trace_for("basic_depth61.json");
  const PartialSum f = partial_sum_from_steps(t.steps);
  const std::size_t N = t.steps.size() - 1;

  // |p_k'| <= |eps_k| on [0,1], so f_n' >= 1 - sum_{k=2..n} |eps_k|.
  Rat lb(1), worst(1);
  bool ends = true;
  for (std::size_t n = 1; n <= N; ++n) {
    if (n >= 2) lb -= t.steps[n].eps->abs();
    worst = std::min(worst, lb);
    ends = ends && f.eval_rat(Rat(0), n) == Rat(0) && f.eval_rat(Rat(1), n) == Rat(1);
  }
  const bool lb_ok = worst >= Rat(2, 3);

  // Independent check on depth 21: f_21' expanded has no root in [0,1] and is positive at 0.
  const Trace& t21 = trace_for("basic_depth21.json");
  const Poly d21 = derivative(partial_sum_from_steps(t21.steps).to_poly(t21.steps.size() - 1));
  const bool sturm = count_roots_closed(d21, Rat(0), Rat(1)) == 0 && d21.eval(Rat(0)) > Rat(0);

  Outcome o;
  o.pass = lb_ok && ends && sturm;
  o.detail = "min over n <= 61 of 1 - sum|eps_k| = " + std::string(lb_ok ? ">= 2/3" : "< 2/3") +
             ", f_n(0) = 0 and f_n(1) = 1 for all n: " + (ends ? "yes" : "no") +
             ", f_21' root-free on [0,1] by Sturm: " + (sturm ? "yes" : "no");
  return o;
}

// 5 ---------------------------------------------------------------------------

Outcome criterion5() {
  const HeightSchedule X = HeightSchedule::strict();
  const bool xs = X.X(0) == 1 && X.X(1) == 48 && X.X(2) == 2304 && X.X(3) == 221184;

  const Config c = load_config("heights_strict_depth5.json");
  const auto t0 = Clock::now();
  const Trace t = run_construction(c);
  const double secs = seconds_since(t0);
  const long rss = peak_rss_mib();

  const bool exponent = t.steps.size() == 6 && t.steps[4].aux.at("majorant").at("exponent") == "8626176";
  const HeightLedger L = check_height_ledger(t, X);
  std::set<unsigned long> c1, c2, fb;
  for (const auto& e : L.entries) {
    if (e.verdict != Verdict::pass) continue;
    if (e.check == "condition1") c1.insert(e.n);
    if (e.check == "condition2") c2.insert(e.n);
    if (e.check == "final_bound") fb.insert(e.n);
  }
  bool every_node = true;
  for (const auto& s : t.steps) {
    if (s.n >= 1) every_node = every_node && c1.count(s.n) && c2.count(s.n);
    every_node = every_node && fb.count(s.n);
  }
  Outcome o;
  o.pass = xs && exponent && L.all_pass() && every_node && secs < 600 && rss < 2048;
  o.detail = "X(0..3) = 1, 48, 2304, 221184: " + std::string(xs ? "yes" : "no") +
             ", step-4 exponent 8626176: " + (exponent ? "yes" : "no") + ", ledger " +
             std::to_string(L.count(Verdict::pass)) + "/" + std::to_string(L.entries.size()) +
             " pass, conditions 1-2 and final bound on every node: " + (every_node ? "yes" : "no") + ", " +
             fmt_s(secs) + " (limit 600 s), peak RSS " + std::to_string(rss) + " MiB (limit 2048)";
  return o;
}

// 6 ---------------------------------------------------------------------------

Outcome criterion6() {
  const Config c = load_config("heights_scaled_c2_depth25.json");
  const auto t0 = Clock::now();
  const Trace t = run_construction(c);
  const double secs = seconds_since(t0);
  const HeightLedger L = check_height_ledger(t, HeightSchedule::scaled(2));
  Outcome o;
  o.pass = secs < 60 && L.all_pass() && t.steps.size() == 26;
  o.detail = "depth 25 in " + fmt_s(secs) + " (limit 60 s), ledger against the c = 2 schedule " +
             std::to_string(L.count(Verdict::pass)) + "/" + std::to_string(L.entries.size()) + " pass";
  return o;
}

// 7 ---------------------------------------------------------------------------

// Brute-force C_f(T) for small T, straight from the definition.
mpz_class brute_count(const Poly& f, unsigned long T) {
  mpz_class n = 0;
  for (unsigned long q = 1; q <= T; ++q) {
    for (unsigned long p = 0; p <= q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const Rat v = f.eval(Rat(mpz_class(p), mpz_class(q)));
      if (v.height() <= T) ++n;
    }
  }
  return n;
}

Outcome criterion7() {
  const Config c = load_config("pila_stages3.json");
  const Trace t = run_pila(c);
  const auto fs = pila_partial_sums(t);
  Outcome o{true, ""};
  std::size_t counted = 0, frozen = 0;
  for (const auto& st : t.stages) {
    if (sgn(st.count) < 0) continue;
    bool ok = st.count >= st.s_ceil && count_Cf(fs[st.n], st.T) == st.count;
    if (st.T <= 2000) ok = ok && brute_count(fs[st.n], st.T.get_ui()) == st.count;
    if (!ok) {
      o.pass = false;
      o.detail += " stage " + std::to_string(st.n) + " count mismatch;";
    }
    ++counted;
    o.detail += " stage " + std::to_string(st.n) + ": T = " + st.T.get_str() + ", C_f = " + st.count.get_str() +
                " >= " + st.s_ceil.get_str() + ";";
    if (st.stepped) {
      for (const auto& q : freeze_sample(st.T, 100)) {
        if (fs[st.n + 1].eval(q) != fs[st.n].eval(q)) {
          o.pass = false;
          o.detail += " freeze broken at " + q.str() + ";";
        }
        ++frozen;
      }
    }
  }
  const bool complete = !t.halted && t.stages.size() == c.stages + 1;
  if (!complete) {
    o.pass = false;
    o.detail += " run stopped after " + std::to_string(t.stages.size()) + " of " + std::to_string(c.stages + 1) +
                " stage records: " + t.halted.value_or("incomplete");
  }
  o.detail = std::to_string(counted) + " stages counted, " + std::to_string(frozen) + " freeze points;" + o.detail;
  return o;
}

// 8 ---------------------------------------------------------------------------

Outcome criterion8() {
  const auto t0 = Clock::now();
  const VerifyReport r = asymptotic_suite(1000000);
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = r.clean() && secs < 60;
  std::string ratio;
  for (const auto* e : r.by_id("asymptotic_ratio")) ratio = e->witness.dump();
  o.detail = "scan to 10^6 in " + fmt_s(secs) + " (limit 60 s), " + std::to_string(r.count(Verdict::pass)) + "/" +
             std::to_string(r.entries.size()) + " pass" + first_failures(r) + ", ratio " + ratio;
  return o;
}

// 9 ---------------------------------------------------------------------------

Outcome criterion9() {
  Config c;
  c.depth = 40;
  const Trace t = run_construction(c);
  const PartialSum f = partial_sum_from_steps(t.steps);
  const unsigned long N = t.steps.size() - 1;

  std::mt19937_64 rng(20240611);
  std::size_t bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const unsigned long den = 1 + rng() % 1000000;
    const unsigned long num = rng() % (den + 1);
    const Rat q{mpz_class(num), mpz_class(den)};
    const unsigned long n = 1 + rng() % (N - 1);
    const unsigned long n2 = n + 1 + rng() % (N - n);
    const Rat diff = (f.eval_rat(q, n2) - f.eval_rat(q, n)).abs();
    if (diff > tail_bound(n)) ++bad;
  }

  // Geometric-sum oracle: sum_{k>2} 4^(1-k) = (1/16) / (1 - 1/4).
  const Rat oracle = Rat(1, 16) / (Rat(1) - Rat(1, 4));
  Rat partial(0);
  for (unsigned long k = 3; k <= 60; ++k) partial += Rat(mpz_class(1), pow_ui(mpz_class(4), k - 1));
  const Rat gap = oracle - partial;
  const bool geo = tail_bound(2) == Rat(1, 12) && oracle == Rat(1, 12) &&
                   gap == Rat(mpz_class(4), 3 * pow_ui(mpz_class(4), 60));

  Outcome o;
  o.pass = bad == 0 && geo;
  o.detail = "1000 random (q, n, n') on depth 40: " + std::to_string(bad) +
             " violations of (4/3) 4^-n, tail_bound(2) = 1/12 matches the geometric sum: " + (geo ? "yes" : "no");
  return o;
}

// 10 --------------------------------------------------------------------------

// Lex order rebuilt by sorting every rational of denominator <= K.
std::vector<Rat> lex_list(unsigned long K) {
  std::vector<Rat> v;
  for (unsigned long q = 1; q <= K; ++q) {
    for (unsigned long p = 0; p <= q; ++p) {
      if (std::gcd(p, q) == 1) v.emplace_back(mpz_class(p), mpz_class(q));
    }
  }
  std::stable_sort(v.begin(), v.end(), [](const Rat& a, const Rat& b) {
    if (a.den() != b.den()) return a.den() < b.den();
    return a < b;
  });
  return v;
}

// f_n expanded from scratch: sum_k (eps_k / k) prod_{i<k} (x - x_i).
Poly expand(const std::vector<StepRecord>& steps, std::size_t n) {
  Poly f;
  for (std::size_t k = 1; k <= n; ++k) {
    Poly term = Poly::constant(*steps[k].eps / Rat(static_cast<long>(k)));
    for (std::size_t i = 0; i < k; ++i) term = term * Poly::linear_root(steps[i].node);
    f += term;
  }
  return f;
}

Outcome criterion10() {
  const std::vector<Rat> lex = lex_list(64);
  Outcome o{true, ""};
  std::size_t values = 0;
  Rat at_third(-1);
  for (unsigned long depth = 3; depth <= 7 && o.pass; ++depth) {
    Config c;
    c.depth = depth;
    const Trace t = run_construction(c);
    std::set<Rat> nodes, vals;
    for (std::size_t n = 0; n < t.steps.size() && o.pass; ++n) {
      const StepRecord& s = t.steps[n];
      if (n >= 3) {
        // Odd steps take the lex-least free node, even steps the lex-least free target.
        const auto& used = s.kind == "odd" ? nodes : vals;
        const Rat want = *std::find_if(lex.begin(), lex.end(), [&](const Rat& q) { return !used.count(q); });
        if ((s.kind == "odd" ? s.node : s.value) != want) {
          o.pass = false;
          o.detail = "depth " + std::to_string(depth) + " step " + std::to_string(n) + " picked the wrong point";
        }
      }
      nodes.insert(s.node);
      vals.insert(s.value);
      const Poly fn = expand(t.steps, n);
      for (std::size_t k = 0; k <= n && o.pass; ++k, ++values) {
        if (fn.eval(t.steps[k].node) != t.steps[k].value) {
          o.pass = false;
          o.detail = "depth " + std::to_string(depth) + ": f_" + std::to_string(n) + " misses value " +
                     std::to_string(k);
        }
      }
    }
    if (depth == 7) {
      for (const auto& s : t.steps) {
        if (s.node == Rat(1, 3)) at_third = expand(t.steps, t.steps.size() - 1).eval(s.node);
      }
    }
  }
  const bool worked = at_third == Rat(1729, 5184);
  o.pass = o.pass && worked;
  if (o.detail.empty()) o.detail = std::to_string(values) + " assigned values reproduced by full expansion";
  o.detail += ", f(1/3) = " + at_third.str() + " (expected 1729/5184)";
  return o;
}

// 11 --------------------------------------------------------------------------

Outcome criterion11() {
  std::size_t checked = 0, consumed = 0;
  Outcome o{true, ""};
  auto check = [&](const std::string& where, const std::optional<AvoidWitness>& w, const AvoidFamily& fam,
                   const Rat& f_at) {
    if (!w) return;
    ++checked;
    const Rat g = fam.funcs.at(w->index).eval(w->point);
    if (!(g == w->g_value && f_at == w->f_value && f_at != g)) {
      o.pass = false;
      o.detail += " " + where + " witness fails;";
    }
  };
  for (const char* name : {"basic_depth61.json", "heights_scaled_c2_depth25.json", "heights_strict_depth5.json"}) {
    const Trace& t = trace_for(name);
    for (const auto& s : t.steps) {
      if (s.kind == "odd" && s.aux.at("avoid_index").get<std::size_t>() < t.config.avoid.size()) {
        ++consumed;
        if (!s.witness) {
          o.pass = false;
          o.detail += std::string(" ") + name + " step " + std::to_string(s.n) + " has no witness;";
        }
      }
      check(std::string(name) + " step " + std::to_string(s.n), s.witness, t.config.avoid,
            *f_exact_at(t, s.witness ? s.witness->point : s.node));
    }
  }
  {
    const Trace& t = trace_for("pila_stages1.json");
    const auto fs = pila_partial_sums(t);
    for (const auto& st : t.stages) {
      if (!st.stepped) continue;
      if (st.n < t.config.avoid.size()) ++consumed;
      if (st.witness) check("pila stage " + std::to_string(st.n), st.witness, t.config.avoid,
                            fs.back().eval(st.witness->point));
    }
  }
  o.pass = o.pass && checked == consumed && checked > 0;
  o.detail = std::to_string(consumed) + " avoided functions consumed, " + std::to_string(checked) +
             " witnesses with f(w) != g(w) exactly;" + o.detail;
  return o;
}

const std::vector<std::function<Outcome()>> kCriteria = {criterion1, criterion2, criterion3,  criterion4,
                                                         criterion5, criterion6, criterion7,  criterion8,
                                                         criterion9, criterion10, criterion11};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int which = 0;
  app.add_option("--criterion", which, "Run only this criterion (1-11)")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);

  bool all = true;
  for (int i = 1; i <= static_cast<int>(kCriteria.size()); ++i) {
    if (which != 0 && i != which) continue;
    Outcome r;
    try {
      r = kCriteria[i - 1]();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << i << ": " << (r.pass ? "PASS" : "FAIL") << "  " << r.detail << std::endl;
    all = all && r.pass;
  }
  return all ? 0 : 1;
}
