#include "qbiject/verify.hpp"

#include <mpfr.h>

#include <algorithm>
#include <set>

#include "qbiject/construction.hpp"
#include "qbiject/enumeration.hpp"
#include "qbiject/error.hpp"
#include "qbiject/heights.hpp"
#include "qbiject/lex.hpp"
#include "qbiject/pila.hpp"

namespace qbiject {

void VerifyReport::add(std::string id, std::string location, bool ok, nlohmann::json witness) {
  add(std::move(id), std::move(location), ok ? Verdict::pass : Verdict::fail, std::move(witness));
}

void VerifyReport::add(std::string id, std::string location, Verdict v, nlohmann::json witness) {
  entries.push_back({std::move(id), std::move(location), v, std::move(witness)});
}

std::size_t VerifyReport::count(Verdict v) const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [v](const CheckEntry& e) { return e.verdict == v; }));
}

std::vector<const CheckEntry*> VerifyReport::by_id(const std::string& id) const {
  std::vector<const CheckEntry*> out;
  for (const auto& e : entries) {
    if (e.id == id) out.push_back(&e);
  }
  return out;
}

nlohmann::json VerifyReport::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : entries) {
    arr.push_back({{"id", e.id}, {"location", e.location}, {"verdict", verdict_name(e.verdict)}, {"witness", e.witness}});
  }
  return {{"entries", arr},
          {"summary",
           {{"pass", count(Verdict::pass)},
            {"fail", count(Verdict::fail)},
            {"marginal", count(Verdict::marginal)},
            {"clean", clean()}}}};
}

namespace {

std::string at_step(unsigned long n) { return "step " + std::to_string(n); }
std::string at_stage(unsigned long n) { return "stage " + std::to_string(n); }

bool same_witness(const std::optional<AvoidWitness>& a, const std::optional<AvoidWitness>& b) {
  if (a.has_value() != b.has_value()) return false;
  if (!a) return true;
  return a->index == b->index && a->point == b->point && a->f_value == b->f_value && a->g_value == b->g_value;
}

bool same_step(const StepRecord& a, const StepRecord& b) {
  return a.n == b.n && a.kind == b.kind && a.j == b.j && a.node == b.node && a.eps == b.eps &&
         a.value == b.value && a.aux == b.aux && same_witness(a.witness, b.witness);
}

bool same_stage(const StageRecord& a, const StageRecord& b) {
  if (a.n != b.n || a.T != b.T || a.b != b.b || a.d != b.d || a.q_size != b.q_size || a.count != b.count ||
      a.s_ceil != b.s_ceil || a.stepped != b.stepped || a.aux != b.aux) {
    return false;
  }
  if (!a.stepped) return true;
  return a.y == b.y && a.z == b.z && a.eps == b.eps && a.case_tag == b.case_tag && same_witness(a.witness, b.witness);
}

// |e| <= 4^-k
bool within_pow4(const Rat& e, unsigned long k) {
  mpz_class lhs = abs(e.num());
  lhs <<= 2 * k;
  return lhs <= e.den();
}

void replay_steps(const Trace& t) {
  std::size_t idx = 0;
  run_construction(t.config, [&](const StepRecord& r) {
    if (idx >= t.steps.size()) {
      throw Error(Errc::replay_divergence, "replay continues past the recorded " + std::to_string(t.steps.size()) + " steps");
    }
    if (!same_step(r, t.steps[idx])) throw Error(Errc::replay_divergence, "first divergence at " + at_step(r.n));
    ++idx;
  });
  if (idx != t.steps.size()) {
    throw Error(Errc::replay_divergence, "trace has extra steps beyond " + at_step(idx == 0 ? 0 : idx - 1));
  }
}

void replay_stages(const Trace& t) {
  std::size_t idx = 0;
  const Trace r = run_pila(t.config, [&](const StageRecord& s) {
    if (idx >= t.stages.size() || !same_stage(s, t.stages[idx])) {
      throw Error(Errc::replay_divergence, "first divergence at " + at_stage(s.n));
    }
    ++idx;
  });
  if (idx != t.stages.size()) throw Error(Errc::replay_divergence, "trace has extra stages");
  if (r.halted != t.halted) throw Error(Errc::replay_divergence, "halt status differs");
}

void check_steps(const Trace& t, VerifyReport& rep) {
  const auto& steps = t.steps;
  const PartialSum f = partial_sum_from_steps(steps);
  const std::size_t depth = steps.size() - 1;
  const auto& nodes = f.nodes();

  // eps discipline
  for (const auto& s : steps) {
    if (s.n == 0) continue;
    bool ok = s.eps.has_value();
    if (ok && s.n == 1) ok = *s.eps == Rat(1);
    if (ok && s.n == 2) ok = s.eps->is_zero();
    if (ok && s.n >= 3) ok = within_pow4(*s.eps, s.n - 1);
    rep.add("eps_discipline", at_step(s.n), ok, {{"eps_den_bits", s.eps ? bit_length(s.eps->den()) : 0}});
  }

  // (b) p_n vanishes at every earlier node.
  for (std::size_t n = 1; n <= depth; ++n) {
    bool ok = true;
    for (std::size_t m = 0; m < n && ok; ++m) {
      const Frac v = Frac::of(f.coeffs()[n - 1]) * PartialSum::node_prod(nodes, n, nodes[m]);
      ok = v.is_zero();
    }
    rep.add("vanishing", at_step(n), ok);
  }

  // Prefix stability: f_n(x_k) = value_k for k <= n.
  for (std::size_t n = 1; n <= depth; ++n) {
    std::optional<std::size_t> bad;
    for (std::size_t k = 0; k <= n && !bad; ++k) {
      if (cmp(f.eval(nodes[k], n), steps[k].value) != 0) bad = k;
    }
    nlohmann::json w = nlohmann::json::object();
    if (bad) w["node_index"] = *bad;
    rep.add("prefix_stability", at_step(n), !bad, w);
  }

  // Endpoints.
  for (std::size_t n = 1; n <= depth; ++n) {
    const bool ok = cmp(f.eval(Rat(0), n), Rat(0)) == 0 && cmp(f.eval(Rat(1), n), Rat(1)) == 0;
    rep.add("endpoints", at_step(n), ok);
  }

  // Injectivity of the assignment.
  {
    std::set<Rat> ns, vs;
    bool ok = true;
    for (const auto& s : steps) {
      ok = ok && ns.insert(s.node).second && vs.insert(s.value).second && s.node.in_unit() && s.value.in_unit();
    }
    rep.add("injectivity", "trace", ok);
  }

  // Coverage: after odd step 2t+1, x_0..x_t are nodes.
  {
    std::set<Rat> seen;
    for (const auto& s : steps) {
      seen.insert(s.node);
      if (s.n >= 3 && s.n % 2 == 1) {
        const std::uint64_t tt = (s.n - 1) / 2;
        bool ok = true;
        for (std::uint64_t i = 0; i <= tt && ok; ++i) ok = seen.count(lex_enumerate(i)) != 0;
        rep.add("coverage", at_step(s.n), ok, {{"through_index", tt}});
      }
    }
  }

  // Even steps take the least unassigned target, so b strictly increases.
  {
    YEnumeration ys(t.config.y_kind, t.config.y_prefix);
    std::optional<std::uint64_t> prev;
    for (const auto& s : steps) {
      if (!s.aux.contains("b")) continue;
      const auto b = s.aux.at("b").get<std::uint64_t>();
      const bool ok = (!prev || b > *prev) && ys.at(b) == s.value;
      rep.add("b_increasing", at_step(s.n), ok, {{"b", b}});
      prev = b;
    }
  }

  // Monotonicity: f_n' >= 1 - sum_{k=2..n} sup|p_k'| >= 2/3. Each sup is at most
  // |eps_k| (k factors of size <= 1); the coefficient sum of the expanded
  // product is tighter and is used while the nodes are small enough to expand.
  {
    std::size_t node_bits = 0;
    for (const auto& x : nodes) node_bits += bit_length(x.den());
    const bool expand = node_bits <= 200000;
    Poly prod = Poly::constant(Rat(1));
    Rat lb(1);
    for (std::size_t k = 1; k <= depth; ++k) {
      // prod = prod_{i<k} (x - x_i)
      prod = prod * Poly::linear_root(nodes[k - 1]);
      if (k < 2) continue;
      Rat u = steps[k].eps->abs();
      std::string method = "eps";
      if (expand && !u.is_zero()) {
        const Rat alt = f.coeffs()[k - 1].abs() * sup_abs_bound_unit(derivative(prod));
        if (alt < u) {
          u = alt;
          method = "coefficient_sum";
        }
      }
      lb -= u;
      rep.add("monotonicity", at_step(k), lb >= Rat(2, 3), {{"lower_bound_ge_2_3", lb >= Rat(2, 3)}, {"method", method}});
    }
  }

  // Avoidance witnesses, one for every consumed g.
  for (const auto& s : steps) {
    if (s.kind != "odd") continue;
    const auto t_idx = s.aux.at("avoid_index").get<std::size_t>();
    if (t_idx >= t.config.avoid.size()) continue;
    bool ok = s.witness.has_value();
    if (ok) {
      const auto& w = *s.witness;
      const Rat g = t.config.avoid.funcs[w.index].eval(w.point);
      ok = w.index == t_idx && w.point == s.node && w.f_value == s.value && w.g_value == g && w.f_value != g;
    }
    rep.add("avoidance", at_step(s.n), ok, {{"index", t_idx}});
  }
}

void check_ledger(const Trace& t, VerifyReport& rep) {
  const HeightLedger L = check_height_ledger(t, schedule_of(t.config));
  for (const auto& e : L.entries) {
    rep.add("ledger_" + e.check, at_step(e.n), e.verdict, {{"tier", e.tier}, {"detail", e.detail}});
  }
  rep.add("ledger_recorded", "trace", ledger_to_json(L) == t.ledger);
}

void check_stages(const Trace& t, const VerifyOptions& opt, VerifyReport& rep) {
  const auto fs = pila_partial_sums(t);
  std::vector<Rat> zs;
  Rat lb(1);
  for (std::size_t i = 0; i < t.stages.size(); ++i) {
    const auto& st = t.stages[i];
    const std::string loc = at_stage(st.n);
    const Poly& fn = fs.at(i);

    rep.add("counting", loc, sgn(st.count) >= 0 && st.count >= st.s_ceil, {{"C_f", sgn(st.count) < 0 ? std::string("uncounted") : st.count.get_str()}, {"s_upper_ceil", st.s_ceil.get_str()}});
    bool t_ok = st.T > st.b;
    if (i > 0) t_ok = t_ok && st.T >= t.stages[i - 1].T + static_cast<unsigned long>(st.n);
    rep.add("threshold", loc, t_ok, {{"T", st.T.get_str()}});

    // H(f_n(q)) <= b H(q)^d on all small-height q.
    {
      const auto [b, d] = poly_height_coeff(fn);
      bool ok = b == st.b && d == st.d;
      const IntPoly F = IntPoly::from(fn);
      LexCursor cur;
      const std::uint64_t total = farey_count(opt.b_guarantee_height);
      for (std::uint64_t k = 0; k < total && ok; ++k) {
        const Rat q = cur.next();
        ok = F.eval(q).reduce().height() <= b * pow_ui(q.height(), d);
      }
      rep.add("b_guarantee", loc, ok, {{"max_height", opt.b_guarantee_height}});
    }

    // Freeze: every later partial sum agrees with f_n on heights <= T_n.
    {
      const auto sample = freeze_sample(st.T, opt.freeze_points);
      bool ok = true;
      std::size_t later = 0;
      for (std::size_t j = i + 1; j < fs.size(); ++j, ++later) {
        for (const auto& q : sample) ok = ok && fs[j].eval(q) == fn.eval(q);
      }
      rep.add("freeze", loc, ok, {{"points", sample.size()}, {"later_partial_sums", later}});
    }

    if (!st.stepped) continue;
    const std::vector<Rat> Q = pila_nodes(st.T, zs);
    const Rat bound(mpz_class(1), (mpz_class(1) << (2 * (Q.size() + 1))) * static_cast<unsigned long>(Q.size()));
    rep.add("eps_bound", loc, st.eps.abs() <= bound && Q.size() == st.q_size);
    lb -= st.eps.abs() * Rat(static_cast<long>(Q.size()));
    rep.add("monotonicity", loc, lb >= Rat(2, 3));

    // f_m(z_n) = y_n for every later m.
    {
      bool ok = std::find(zs.begin(), zs.end(), st.z) == zs.end();
      for (std::size_t j = i + 1; j < fs.size(); ++j) ok = ok && fs[j].eval(st.z) == st.y;
      YEnumeration ys(t.config.y_kind, t.config.y_prefix);
      ok = ok && ys.at(st.n) == st.y;
      rep.add("surjectivity", loc, ok, {{"z", st.z.str()}});
    }

    const RatFunc* g = st.n < t.config.avoid.size() ? &t.config.avoid.funcs[st.n] : nullptr;
    const Poly& next = fs.at(i + 1);
    if (st.case_tag == "i") {
      const Rat r = Rat::parse(st.aux.at("r").get<std::string>());
      bool ok = r.height() > st.T && std::find(zs.begin(), zs.end(), r) == zs.end() && next.eval(st.z) == st.y &&
                std::binary_search(Q.begin(), Q.end(), st.z);
      if (i + 1 < t.stages.size()) ok = ok && r.height() <= t.stages[i + 1].T;
      rep.add("case_i", loc, ok, {{"r", r.str()}});
      if (g) {
        const Rat fr = next.eval(r);
        const bool wok = st.witness && st.witness->index == st.n && st.witness->point == r &&
                         st.witness->f_value == fr && st.witness->g_value == g->eval(r) && fr != g->eval(r);
        rep.add("avoidance", loc, wok);
      }
    } else {
      const bool ok = !std::binary_search(Q.begin(), Q.end(), st.z) && st.z.in_unit() && next.eval(st.z) == st.y;
      rep.add("case_ii", loc, ok);
      if (g) {
        const Rat gz = g->eval(st.z);
        const bool wok = st.witness && st.witness->index == st.n && st.witness->point == st.z &&
                         st.witness->f_value == st.y && st.witness->g_value == gz && gz != st.y;
        rep.add("avoidance", loc, wok);
      }
    }
    zs.push_back(st.z);
  }
  for (std::size_t i = 0; i < fs.size(); ++i) {
    rep.add("endpoints", "f_" + std::to_string(i), fs[i].eval(Rat(0)) == Rat(0) && fs[i].eval(Rat(1)) == Rat(1));
  }
  if (t.halted) rep.add("completed", "trace", false, {{"halted", *t.halted}});
}

}  // namespace

VerifyReport verify_trace(const Trace& t, const VerifyOptions& opt) {
  VerifyReport rep;
  if (t.config.mode == Mode::pila) {
    if (opt.replay) replay_stages(t);
    rep.add("replay", "trace", opt.replay);
    check_stages(t, opt, rep);
    return rep;
  }
  if (t.steps.size() < 3) throw Error(Errc::parse_error, "trace has fewer than the three seed steps");
  if (opt.replay) replay_steps(t);
  rep.add("replay", "trace", opt.replay);
  check_steps(t, rep);
  if (t.config.mode == Mode::heights) check_ledger(t, rep);
  return rep;
}

VerifyReport asymptotic_suite(std::uint64_t n_max) {
  if (n_max < 10) throw Error(Errc::invalid_argument, "asymptotic suite needs n_max >= 10");
  VerifyReport rep;
  LexCursor cur;
  std::uint64_t H = 1;
  std::optional<std::uint64_t> bad;
  for (std::uint64_t n = 0; n <= n_max; ++n) {
    cur.next();
    H = cur.current_height();
    if (n >= 2 && !bad && static_cast<unsigned __int128>(H) * H < 2 * static_cast<unsigned __int128>(n)) bad = n;
  }
  nlohmann::json w = {{"n_max", n_max}};
  if (bad) w["first_failure"] = *bad;
  rep.add("height_scan", "n <= " + std::to_string(n_max), !bad, w);

  // R = H sqrt(3) / (pi sqrt(n)), enclosed as [lo, hi].
  mpfr_t s3, pi, sn, lo, hi, tmp;
  for (mpfr_ptr p : {s3, pi, sn, lo, hi, tmp}) mpfr_init2(p, 64);
  mpfr_set_ui(s3, 3, MPFR_RNDN);
  mpfr_sqrt(lo, s3, MPFR_RNDD);
  mpfr_sqrt(hi, s3, MPFR_RNDU);
  mpfr_mul_ui(lo, lo, H, MPFR_RNDD);
  mpfr_mul_ui(hi, hi, H, MPFR_RNDU);
  mpfr_const_pi(pi, MPFR_RNDU);
  mpfr_set_ui(sn, 0, MPFR_RNDN);
  mpfr_set_ui(tmp, 0, MPFR_RNDN);
  mpfr_sqrt_ui(sn, n_max, MPFR_RNDU);
  mpfr_mul(tmp, pi, sn, MPFR_RNDU);
  mpfr_div(lo, lo, tmp, MPFR_RNDD);
  mpfr_const_pi(pi, MPFR_RNDD);
  mpfr_sqrt_ui(sn, n_max, MPFR_RNDD);
  mpfr_mul(tmp, pi, sn, MPFR_RNDD);
  mpfr_div(hi, hi, tmp, MPFR_RNDU);
  // 49/50 < lo and hi < 51/50
  mpfr_mul_ui(lo, lo, 50, MPFR_RNDD);
  mpfr_mul_ui(hi, hi, 50, MPFR_RNDU);
  const bool ok = mpfr_cmp_ui(lo, 49) > 0 && mpfr_cmp_ui(hi, 51) < 0;
  mpfr_div_ui(lo, lo, 50, MPFR_RNDD);
  mpfr_div_ui(hi, hi, 50, MPFR_RNDU);
  rep.add("asymptotic_ratio", "n = " + std::to_string(n_max), ok,
          {{"H", H}, {"ratio_lo", mpfr_get_d(lo, MPFR_RNDD)}, {"ratio_hi", mpfr_get_d(hi, MPFR_RNDU)}});
  for (mpfr_ptr p : {s3, pi, sn, lo, hi, tmp}) mpfr_clear(p);
  return rep;
}

}  // namespace qbiject
