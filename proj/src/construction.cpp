#include "qbiject/construction.hpp"

#include <cmath>

#include "qbiject/approx.hpp"
#include "qbiject/error.hpp"
#include "qbiject/heights.hpp"
#include "qbiject/invert.hpp"
#include "qbiject/lex.hpp"

namespace qbiject {

namespace {

Rat menu_eps(unsigned long m, unsigned long s) {
  // s / ((m+2) 4^m)
  return Rat(mpz_class(s), mpz_class(m + 2) << (2 * m));
}

// |h| < 1/((m+1) 4^m), strict.
bool h_small_enough(const Frac& h, unsigned long m) {
  mpz_class lhs = abs(h.num) * (m + 1);
  lhs <<= 2 * m;
  return lhs < abs(h.den);
}

// h_m(z) = (y - f_m(z)) / prod_k (z - x_k) as an unreduced fraction.
Frac h_of(const ConstructionState& st, const Rat& y, const Rat& z) {
  const Frac fz = st.f().eval(z);
  const Frac num = Frac::of(y) - fz;
  const Frac prod = PartialSum::node_prod(st.nodes(), st.nodes().size(), z);
  return num / prod;
}

// Lowest terms of k / den where den = r 2^alpha 3^beta with r small and prime to 6.
// Only small gcds are taken, so this stays cheap for multi-million-bit den.
Rat reduce_smooth(mpz_class k, mpz_class den) {
  if (sgn(k) == 0) return Rat(0);
  for (unsigned long p : {2ul, 3ul}) {
    const mpz_class P(p);
    mpz_class tmp;
    const unsigned long vk = mpz_remove(tmp.get_mpz_t(), k.get_mpz_t(), P.get_mpz_t());
    const unsigned long vd = mpz_remove(tmp.get_mpz_t(), den.get_mpz_t(), P.get_mpz_t());
    const unsigned long e = std::min(vk, vd);
    if (e == 0) continue;
    mpz_class pe;
    mpz_ui_pow_ui(pe.get_mpz_t(), p, e);
    mpz_divexact(k.get_mpz_t(), k.get_mpz_t(), pe.get_mpz_t());
    mpz_divexact(den.get_mpz_t(), den.get_mpz_t(), pe.get_mpz_t());
  }
  mpz_class r = den;
  mpz_remove(r.get_mpz_t(), r.get_mpz_t(), mpz_class(2).get_mpz_t());
  mpz_remove(r.get_mpz_t(), r.get_mpz_t(), mpz_class(3).get_mpz_t());
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), k.get_mpz_t());
  if (g != 1) {
    mpz_divexact(k.get_mpz_t(), k.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(den.get_mpz_t(), den.get_mpz_t(), g.get_mpz_t());
  }
  return Rat::from_coprime(k, den);
}

Rat grid_point(const Rat& lo, const Rat& hi, const mpz_class& M, Side side) {
  // Same rule as bounded_rational_near, reduced without a full-size gcd.
  const mpz_class wn = hi.num() * lo.den() - lo.num() * hi.den();
  if (2 * M * wn >= hi.den() * lo.den()) {
    throw Error(Errc::bracket_too_wide, "grid bracket too wide");
  }
  mpz_class k;
  if (side == Side::below) {
    mpz_class t = lo.num() * M;
    mpz_fdiv_q(k.get_mpz_t(), t.get_mpz_t(), lo.den().get_mpz_t());
  } else {
    mpz_class t = hi.num() * M;
    mpz_cdiv_q(k.get_mpz_t(), t.get_mpz_t(), hi.den().get_mpz_t());
  }
  return reduce_smooth(k, M);
}

// Least E >= 0 with 3^E * r >= 1, r > 0.
unsigned long least_pow3_exponent(const Rat& r) {
  if (r >= Rat(1)) return 0;
  const double est = (static_cast<double>(bit_length(r.den())) - static_cast<double>(bit_length(r.num())) - 1.0) /
                     std::log2(3.0);
  unsigned long E = est > 0 ? static_cast<unsigned long>(est) : 0;
  auto ok = [&](unsigned long e) {
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 3, e);
    return p * r.num() >= r.den();
  };
  while (E > 0 && ok(E - 1)) --E;
  while (!ok(E)) ++E;
  return E;
}

}  // namespace

Rat ConstructionState::nearest_node_distance(const Rat& x) const {
  auto it = node_set_.lower_bound(x);
  std::optional<Rat> best;
  if (it != node_set_.end()) best = *it - x;
  if (it != node_set_.begin()) {
    const Rat d = x - *std::prev(it);
    if (!best || d < *best) best = d;
  }
  return best ? *best : Rat(1);
}

std::pair<Rat, Rat> ConstructionState::neighbours(const Rat& lo, const Rat& hi) const {
  auto above = node_set_.upper_bound(hi);
  auto below = node_set_.lower_bound(lo);
  if (above == node_set_.end() || below == node_set_.begin()) {
    throw Error(Errc::invariant_violation, "preimage not strictly inside the node hull");
  }
  return {*std::prev(below), *above};
}

std::size_t ConstructionState::least_unassigned_y() {
  for (std::size_t b = 0;; ++b) {
    if (!has_value(y_.at(b))) return b;
  }
}

void ConstructionState::assign(const Rat& eps, const Rat& node, const Rat& value, StepRecord rec) {
  if (has_node(node)) throw Error(Errc::duplicate_node, "node " + node.str() + " already assigned");
  if (has_value(value)) throw Error(Errc::invariant_violation, "value " + value.str() + " already used");
  const unsigned long n = m_ + 1;
  f_.push_coeff(eps / Rat(static_cast<long>(n)));
  f_.push_node(node);
  eps_.push_back(eps);
  values_.push_back(value);
  node_set_.insert(node);
  value_set_.insert(value);
  m_ = n;
  records_.push_back(std::move(rec));
}

ConstructionState init_basic(const Config& cfg) {
  ConstructionState st;
  st.y_ = YEnumeration(cfg.y_kind, cfg.y_prefix);
  if (st.y_.at(0) != Rat(0) || st.y_.at(1) != Rat(1)) {
    throw Error(Errc::bad_enumeration, "the target enumeration must begin 0, 1");
  }
  const Rat y2 = st.y_.at(2);
  // n = 0 and n = 1: x_0 = 0, x_1 = 1, p_1 = x.
  st.f_.push_node(Rat(0));
  st.values_.push_back(Rat(0));
  st.node_set_.insert(Rat(0));
  st.value_set_.insert(Rat(0));
  StepRecord r0;
  r0.n = 0;
  r0.kind = "seed";
  r0.j = 0;
  r0.node = Rat(0);
  r0.value = Rat(0);
  st.records_.push_back(r0);
  st.m_ = 0;

  StepRecord r1;
  r1.n = 1;
  r1.kind = "seed";
  r1.j = 1;
  r1.node = Rat(1);
  r1.eps = Rat(1);
  r1.value = Rat(1);
  st.assign(Rat(1), Rat(1), Rat(1), r1);

  // n = 2: eps_2 = 0 and the formal even step z = f_1^{-1}(y_2) = y_2.
  StepRecord r2;
  r2.n = 2;
  r2.kind = "seed";
  r2.j = lex_index(y2);
  r2.node = y2;
  r2.eps = Rat(0);
  r2.value = y2;
  r2.aux = {{"b", 2}, {"seed_repair", true}};
  st.assign(Rat(0), y2, y2, r2);
  return st;
}

void step_odd(ConstructionState& st, const AvoidFamily& avoid, bool record_height) {
  const unsigned long m = st.m();
  if ((m + 1) % 2 != 1 || m < 2) throw Error(Errc::invariant_violation, "odd step called at even index");
  // a = min(N \ J): the first enumeration entry not yet a node.
  LexCursor cur;
  std::uint64_t a = 0;
  Rat xa;
  for (;;) {
    a = cur.next_index();
    xa = cur.next();
    if (!st.has_node(xa)) break;
  }
  const Rat base = st.f().eval_rat(xa, st.f().terms());
  const Rat prod = PartialSum::node_prod(st.nodes(), st.nodes().size(), xa).reduce();
  const std::size_t t = st.next_odd_ordinal();
  std::optional<Rat> g_val;
  if (t < avoid.size()) g_val = avoid.funcs[t].eval(xa);

  for (unsigned long s = 0; s <= m + 2; ++s) {
    const Rat eps = menu_eps(m, s);
    const Rat z = s == 0 ? base : base + eps / Rat(static_cast<long>(m + 1)) * prod;
    if (st.has_value(z)) continue;
    if (g_val && z == *g_val) continue;
    StepRecord rec;
    rec.n = m + 1;
    rec.kind = "odd";
    rec.j = a;
    rec.node = xa;
    rec.eps = eps;
    rec.value = z;
    rec.aux = {{"a", a}, {"s", s}, {"avoid_index", t}};
    if (record_height) rec.aux["height_cap"] = m + 1;
    if (g_val) rec.witness = AvoidWitness{t, xa, z, *g_val};
    st.bump_odd_ordinal();
    st.assign(eps, xa, z, std::move(rec));
    return;
  }
  throw Error(Errc::avoidance_exhausted, "no admissible s at step " + std::to_string(m + 1));
}

void step_even(ConstructionState& st) {
  const unsigned long m = st.m();
  if ((m + 1) % 2 != 0 || m < 3) throw Error(Errc::invariant_violation, "even step called at odd index");
  const std::size_t b = st.least_unassigned_y();
  const Rat y = st.y(b);
  MonotoneInverter inv(st.f().to_int_poly(), y);
  unsigned long K = 2 * m + static_cast<unsigned long>(bit_length(mpz_class(m + 1))) + 2;
  for (;; ++K) {
    const auto [lo, hi] = inv.bracket_at(K);
    std::vector<Rat> cands;
    if (lo == hi) {
      cands.push_back(lo);
    } else {
      // Endpoint farther from the existing nodes first.
      if (st.nearest_node_distance(hi) > st.nearest_node_distance(lo)) {
        cands = {hi, lo};
      } else {
        cands = {lo, hi};
      }
    }
    for (const Rat& z : cands) {
      if (st.has_node(z)) continue;
      const Frac h = h_of(st, y, z);
      if (!h_small_enough(h, m)) continue;
      const Rat eps = (Frac(mpz_class(m + 1) * h.num, h.den)).reduce();
      StepRecord rec;
      rec.n = m + 1;
      rec.kind = "even";
      rec.j = lex_index(z);
      rec.node = z;
      rec.eps = eps;
      rec.value = y;
      rec.aux = {{"b", b}, {"level", K}, {"bracket", {lo.str(), hi.str()}}};
      st.assign(eps, z, y, std::move(rec));
      return;
    }
  }
}

void step_even_heights(ConstructionState& st, const HeightSchedule& sched, MajorantMode mode,
                       const mpz_class& exponent_budget) {
  const unsigned long m = st.m();
  if ((m + 1) % 2 != 0 || m < 3) throw Error(Errc::invariant_violation, "even step called at odd index");
  const std::size_t b = st.least_unassigned_y();
  const Rat y = st.y(b);
  MonotoneInverter inv(st.f().to_int_poly(), y);

  mpz_class factor = mpz_class(m + 1) << (2 * m);  // (m+1) 4^m, doubled below
  mpz_class E;
  nlohmann::json mj;
  if (mode == MajorantMode::apriori) {
    E = sched.apriori_exponent(m);
    factor *= 2;
  } else {
    // Isolate xbar well away from every node, then size M from the node distances.
    unsigned long K = 2 * m + 16;
    Rat lo, hi, dmin;
    for (;; K += 8) {
      std::tie(lo, hi) = inv.bracket_at(K);
      const Rat width = hi - lo;
      dmin = Rat(1);
      for (const auto& x : st.nodes()) {
        const Rat d = x < lo ? lo - x : (x > hi ? x - hi : Rat(0));
        if (d < dmin) dmin = d;
      }
      if (dmin >= Rat(4) * width && dmin.sign() > 0) break;
    }
    const Rat delta = dmin / Rat(2);
    Rat pi_low(1);
    for (const auto& x : st.nodes()) {
      const Rat d = x < lo ? lo - x : x - hi;
      pi_low *= d - delta;
    }
    E = least_pow3_exponent(pi_low);
    factor *= 4;
    mj["isolation_level"] = K;
  }
  if (E > exponent_budget) {
    throw Error(Errc::schedule_overflow, "even step " + std::to_string(m + 1) + " needs exponent " +
                                             E.get_str() + " above budget " + exponent_budget.get_str());
  }
  mpz_class M;
  mpz_ui_pow_ui(M.get_mpz_t(), 3, E.get_ui());
  M *= factor;
  const unsigned long K = static_cast<unsigned long>(bit_length(M)) + 2;  // 2^-K < 1/(2M)
  const auto [lo, hi] = inv.bracket_at(K);
  // Place z between xbar and the midpoint of its node gap.
  const auto [left, right] = st.neighbours(lo, hi);
  const Rat mid = (left + right) / Rat(2);
  const Side side = cmp(st.f().eval(mid), y) <= 0 ? Side::below : Side::above;
  const Rat z = grid_point(lo, hi, M, side);
  if (st.has_node(z)) throw Error(Errc::invariant_violation, "grid point collides with a node");
  const Frac h = h_of(st, y, z);
  // |eps| = (m+1)|h| <= 4^-m
  {
    mpz_class lhs = abs(h.num) * (m + 1);
    lhs <<= 2 * m;
    if (lhs > abs(h.den)) {
      throw Error(Errc::invariant_violation, "even step " + std::to_string(m + 1) + " missed the eps bound");
    }
  }
  const Rat eps = Frac(mpz_class(m + 1) * h.num, h.den).reduce();
  mj["mode"] = majorant_name(mode);
  mj["factor"] = factor.get_str();
  mj["exponent"] = E.get_str();
  StepRecord rec;
  rec.n = m + 1;
  rec.kind = "even";
  rec.j = lex_index(z);
  rec.node = z;
  rec.eps = eps;
  rec.value = y;
  rec.aux = {{"b", b}, {"level", K}, {"side", side == Side::below ? "below" : "above"}, {"majorant", mj}};
  st.assign(eps, z, y, std::move(rec));
}

HeightSchedule schedule_of(const Config& cfg) {
  return cfg.schedule_strict ? HeightSchedule::strict() : HeightSchedule::scaled(cfg.schedule_c);
}

void precheck_schedule(const Config& cfg) {
  if (cfg.mode != Mode::heights || cfg.effective_majorant() != MajorantMode::apriori) return;
  const HeightSchedule sched = schedule_of(cfg);
  for (unsigned long n = 4; n <= cfg.depth; n += 2) {
    const mpz_class E = sched.apriori_exponent(n - 1);
    if (E > cfg.exponent_budget) {
      throw Error(Errc::schedule_overflow,
                  "even step " + std::to_string(n) + " needs majorant exponent " + E.get_str() +
                      " above the budget " + cfg.exponent_budget.get_str() +
                      "; lower the depth, raise QBIJECT_EXPONENT_BUDGET, or use a scaled schedule");
    }
  }
}

Trace run_construction(const Config& cfg, const StepObserver& observe) {
  if (cfg.mode == Mode::pila) throw Error(Errc::invalid_argument, "pila mode has its own driver");
  if (cfg.depth < 3) throw Error(Errc::invalid_argument, "depth must be at least 3");
  if (cfg.mode == Mode::heights && (cfg.y_kind != EnumKind::lex || !cfg.y_prefix.empty())) {
    throw Error(Errc::bad_enumeration, "heights mode needs the lexicographic target enumeration");
  }
  precheck_schedule(cfg);
  const HeightSchedule sched = schedule_of(cfg);
  ConstructionState st = init_basic(cfg);
  if (observe) {
    for (const auto& r : st.records()) observe(r);
  }
  while (st.m() < cfg.depth) {
    if ((st.m() + 1) % 2 == 1) {
      step_odd(st, cfg.avoid, cfg.mode == Mode::heights);
    } else if (cfg.mode == Mode::heights) {
      step_even_heights(st, sched, cfg.effective_majorant(), cfg.exponent_budget);
    } else {
      step_even(st);
    }
    if (observe) observe(st.records().back());
  }
  Trace t;
  t.config = cfg;
  t.steps = st.records();
  if (cfg.mode == Mode::heights) t.ledger = ledger_to_json(check_height_ledger(t, sched));
  return t;
}

PartialSum partial_sum_from_steps(const std::vector<StepRecord>& steps) {
  PartialSum f;
  for (std::size_t n = 0; n < steps.size(); ++n) {
    if (steps[n].n != n) throw Error(Errc::parse_error, "step records out of order");
    if (n > 0) {
      if (!steps[n].eps) throw Error(Errc::parse_error, "step " + std::to_string(n) + " lacks eps");
      f.push_coeff(*steps[n].eps / Rat(static_cast<long>(n)));
    }
    f.push_node(steps[n].node);
  }
  return f;
}

std::optional<Rat> f_exact_at(const Trace& t, const Rat& q) {
  if (t.config.mode == Mode::pila) throw Error(Errc::invalid_argument, "use the pila evaluator");
  for (const auto& s : t.steps) {
    if (s.node == q) return s.value;
  }
  return std::nullopt;
}

}  // namespace qbiject
