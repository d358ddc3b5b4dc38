#include "qbiject/pila.hpp"

#include <mpfr.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "qbiject/enumeration.hpp"
#include "qbiject/error.hpp"
#include "qbiject/invert.hpp"
#include "qbiject/lex.hpp"
#include "qbiject/partial_sum.hpp"

namespace qbiject {

using u128 = unsigned __int128;
using i128 = __int128;

std::pair<mpz_class, unsigned long> poly_height_coeff(const Poly& f) {
  if (f.degree() < 1) throw Error(Errc::invalid_argument, "poly_height_coeff needs a nonconstant polynomial");
  const IntPoly ip = IntPoly::from(f);
  mpz_class sum = 0;
  for (const auto& a : ip.a) sum += abs(a);
  return {sum > ip.L ? sum : ip.L, static_cast<unsigned long>(f.degree())};
}

mpz_class s_upper_ceil(const SlowFunction& s, const mpz_class& T) {
  if (s.c.sign() < 0) throw Error(Errc::invalid_argument, "slow function needs c >= 0");
  if (sgn(T) <= 0) throw Error(Errc::invalid_argument, "s(T) needs T >= 1");
  if (s.c.is_zero()) return 0;
  mpfr_t x;
  mpfr_init2(x, 128);
  mpfr_set_z(x, T.get_mpz_t(), MPFR_RNDU);
  mpfr_log(x, x, MPFR_RNDU);
  mpfr_pow_ui(x, x, s.k, MPFR_RNDU);
  mpfr_mul_z(x, x, s.c.num().get_mpz_t(), MPFR_RNDU);
  mpfr_div_z(x, x, s.c.den().get_mpz_t(), MPFR_RNDU);
  mpz_class r;
  mpfr_get_z(r.get_mpz_t(), x, MPFR_RNDU);
  mpfr_clear(x);
  return r;
}

mpz_class choose_T(const mpz_class& b, unsigned long d, const mpz_class& start, const SlowFunction& s) {
  if (d == 0 || sgn(b) <= 0) throw Error(Errc::invalid_argument, "choose_T needs b >= 1 and d >= 1");
  for (unsigned long K = 1;; ++K) {
    mpz_class T = b * pow_ui(mpz_class(K), d);
    if (T < start) T = start;
    mpz_class ratio = T / b;
    mpz_class root;
    mpz_root(root.get_mpz_t(), ratio.get_mpz_t(), d);
    if (root > kLexDenominatorCap) throw Error(Errc::invalid_argument, "choose_T search left the countable range");
    const mpz_class have(static_cast<unsigned long>(farey_count(root.get_ui())));
    if (have >= s_upper_ceil(s, T)) return T;
    // Jump straight to the next K whose grid point exceeds T.
    if (root.get_ui() > K) K = root.get_ui();
  }
}

namespace {

u128 gcd128(u128 a, u128 b) {
  while (b != 0) {
    const u128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits(const mpz_class& v, unsigned bits) { return bit_length(v) <= bits; }

// Primes <= limit dividing v, with their multiplicities.
std::vector<std::pair<std::uint64_t, unsigned>> small_prime_factors(mpz_class v, std::uint64_t limit) {
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  v = abs(v);
  for (std::uint64_t p = 2; p <= limit && v > 1; ++p) {
    if (mpz_class(p) * p > v) {
      if (v <= limit && v.fits_ulong_p()) out.emplace_back(v.get_ui(), 1);
      break;
    }
    unsigned e = 0;
    while (mpz_divisible_ui_p(v.get_mpz_t(), p)) {
      mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), p);
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  return out;
}

}  // namespace

const mpz_class kCountLimit = mpz_class(1) << 40;

mpz_class count_Cf(const Poly& f, const mpz_class& T) {
  if (sgn(T) <= 0) throw Error(Errc::invalid_argument, "count_Cf needs T >= 1");
  if (!T.fits_ulong_p() || T > kCountLimit) {
    throw Error(Errc::invalid_argument, "count_Cf threshold too large to enumerate");
  }
  const IntPoly F = IntPoly::from(f);
  const int d = F.degree();
  if (d < 1) throw Error(Errc::invalid_argument, "count_Cf needs a nonconstant polynomial");
  const std::uint64_t Tu = T.get_ui();

  // For l^e || Q with l prime to a_d, l does not divide N = sum a_i p^i Q^(d-i).
  // If v_l(a_d) < e then v_l(N) = v_l(a_d); otherwise v_l(N) is only bounded by
  // the whole l-part of Q^d. So gcd(N, L Q^d) <= L S(Q) and the reduced
  // denominator is at least Q^d / S(Q).
  const auto primes = small_prime_factors(F.a.back(), Tu);
  mpz_class root;
  mpz_root(root.get_mpz_t(), T.get_mpz_t(), static_cast<unsigned long>(d));
  const std::uint64_t free_limit = root.get_ui();

  mpz_class sumabs = 0;
  for (const auto& a : F.a) sumabs += abs(a);
  const std::size_t head_bits = std::max(bit_length(sumabs), bit_length(F.L));
  std::vector<long long> small_a;
  const bool coeffs_small = std::all_of(F.a.begin(), F.a.end(), [](const mpz_class& a) { return fits(a, 62); }) &&
                            fits(F.L, 62);
  long long small_L = 0;
  if (coeffs_small) {
    for (const auto& a : F.a) small_a.push_back(a.get_si());
    small_L = F.L.get_si();
  }

  mpz_class total = 0;
  std::uint64_t count_small = 0;
  for (std::uint64_t Q = 1; Q <= Tu; ++Q) {
    if (Q > free_limit) {
      mpz_class S = 1;
      for (const auto& [l, v] : primes) {
        std::uint64_t q = Q;
        unsigned e = 0;
        while (q % l == 0) {
          q /= l;
          ++e;
        }
        if (e == 0) continue;
        S *= pow_ui(mpz_class(l), v < e ? v : static_cast<unsigned long>(d) * e);
      }
      if (S == 1) continue;
      if (pow_ui(mpz_class(Q), static_cast<unsigned long>(d)) > T * S) continue;
    }
    // Exact test for every p coprime to Q.
    const std::size_t qd_bits = static_cast<std::size_t>(d) * (64 - static_cast<std::size_t>(__builtin_clzll(Q)));
    const bool fast = coeffs_small && head_bits + qd_bits + 2 <= 126;
    const std::uint64_t p_lo = Q == 1 ? 0 : 1;
    for (std::uint64_t p = p_lo; p <= Q; ++p) {
      if (std::gcd(p, Q) != 1) continue;
      if (fast) {
        i128 N = small_a.back();
        i128 Qpow = 1;
        for (int i = d - 1; i >= 0; --i) {
          Qpow *= static_cast<i128>(Q);
          N = N * static_cast<i128>(p) + static_cast<i128>(small_a[static_cast<std::size_t>(i)]) * Qpow;
        }
        const u128 den = static_cast<u128>(small_L) * static_cast<u128>(Qpow);
        const u128 an = static_cast<u128>(N < 0 ? -N : N);
        const u128 g = an == 0 ? den : gcd128(an, den);
        if (den / g <= Tu && an / g <= Tu) ++count_small;
      } else {
        const Frac v = F.eval(Rat::from_coprime(mpz_class(p), mpz_class(Q)));
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), v.num.get_mpz_t(), v.den.get_mpz_t());
        if (v.den / g <= T && abs(v.num) / g <= T) total += 1;
      }
    }
  }
  return total + mpz_class(static_cast<unsigned long>(count_small));
}

std::vector<Rat> pila_nodes(const mpz_class& T, const std::vector<Rat>& zs) {
  if (!T.fits_ulong_p() || T > kLexDenominatorCap) throw Error(Errc::invalid_argument, "node threshold too large");
  const std::uint64_t n = farey_count(T.get_ui());
  std::vector<Rat> out;
  out.reserve(n + zs.size());
  LexCursor cur;
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(cur.next());
  for (const auto& z : zs) {
    if (z.den() > T) out.push_back(z);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Rat> freeze_sample(const mpz_class& T, std::size_t count) {
  const std::uint64_t n = farey_count(T.get_ui());
  std::vector<Rat> out;
  if (n <= count) {
    LexCursor cur;
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(cur.next());
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(lex_enumerate(static_cast<std::uint64_t>(i) * (n - 1) / (count - 1)));
  }
  return out;
}

namespace {

struct StepInput {
  const Poly& f;
  const IntPoly& F;
  const std::vector<Rat>& Q;
  const std::set<Rat>& Qset;
  const Rat& y;
  const RatFunc* g;
  const mpz_class& T;
  const std::vector<Rat>& zs;
};

// 4^(-|Q|-1) / |Q|
Rat eps_bound(std::size_t q) {
  return Rat(mpz_class(1), (mpz_class(1) << (2 * (q + 1))) * static_cast<unsigned long>(q));
}

Rat node_prod_at(const std::vector<Rat>& Q, const Rat& x) {
  return PartialSum::node_prod(Q, Q.size(), x).reduce();
}

}  // namespace

Trace run_pila(const Config& cfg, const StageObserver& observe) {
  if (cfg.mode != Mode::pila) throw Error(Errc::invalid_argument, "run_pila needs pila mode");
  Trace t;
  t.config = cfg;
  YEnumeration ys(cfg.y_kind, cfg.y_prefix);
  Poly f = Poly::x();
  std::vector<Rat> zs;
  mpz_class T_prev = 0;

  for (unsigned long n = 0; n <= cfg.stages; ++n) {
    StageRecord st;
    st.n = n;
    std::tie(st.b, st.d) = poly_height_coeff(f);
    mpz_class start = st.b + 1;
    if (n > 0 && T_prev + n > start) start = T_prev + n;
    st.T = choose_T(st.b, st.d, start, cfg.slow);
    st.s_ceil = s_upper_ceil(cfg.slow, st.T);
    T_prev = st.T;
    if (st.T > kCountLimit) {
      st.count = -1;
      t.halted = "StageOverflow: stage " + std::to_string(n) + " threshold " + st.T.get_str() +
                 " is too large to count";
      if (observe) observe(st);
      t.stages.push_back(std::move(st));
      break;
    }
    st.count = count_Cf(f, st.T);
    if (n == cfg.stages) {
      if (observe) observe(st);
      t.stages.push_back(std::move(st));
      break;
    }

    // Node set size before building it.
    std::uint64_t extra = 0;
    for (const auto& z : zs) extra += z.den() > st.T ? 1 : 0;
    if (st.T >= mpz_class(static_cast<unsigned long>(cfg.node_budget)) || st.T > kLexDenominatorCap) {
      st.aux["q_size_lower_bound"] = mpz_class(st.T + 1).get_str();
      t.halted = "StageOverflow: stage " + std::to_string(n) + " needs more than " + st.T.get_str() +
                 " nodes, above the budget " + std::to_string(cfg.node_budget);
      if (observe) observe(st);
      t.stages.push_back(std::move(st));
      break;
    }
    st.q_size = farey_count(st.T.get_ui()) + extra;
    if (st.q_size > cfg.node_budget) {
      t.halted = "StageOverflow: stage " + std::to_string(n) + " needs " + std::to_string(st.q_size) +
                 " nodes, above the budget " + std::to_string(cfg.node_budget);
      if (observe) observe(st);
      t.stages.push_back(std::move(st));
      break;
    }

    const std::vector<Rat> Q = pila_nodes(st.T, zs);
    const std::set<Rat> Qset(Q.begin(), Q.end());
    const IntPoly F = IntPoly::from(f);
    const Rat y = ys.at(n);
    const RatFunc* g = n < cfg.avoid.size() ? &cfg.avoid.funcs[n] : nullptr;
    const Rat bound = eps_bound(Q.size());
    st.y = y;

    // Case (i): y already attained on Q_n. f is increasing, so search by value.
    std::optional<Rat> hit;
    {
      std::size_t lo = 0, hi = Q.size();
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        const int c = cmp(F.eval(Q[mid]), y);
        if (c == 0) {
          hit = Q[mid];
          break;
        }
        if (c < 0) lo = mid + 1; else hi = mid;
      }
    }
    if (hit) {
      st.case_tag = "i";
      st.z = *hit;
      // r: the lex-least rational above height T_n that is not an earlier z.
      LexCursor cur(farey_count(st.T.get_ui()));
      Rat r = cur.next();
      while (std::find(zs.begin(), zs.end(), r) != zs.end()) r = cur.next();
      const Rat fr = f.eval(r);
      const Rat pr = node_prod_at(Q, r);
      Rat eps = bound;
      unsigned halvings = 0;
      std::optional<Rat> gr;
      if (g) gr = g->eval(r);
      while (gr && fr + eps * pr == *gr) {
        eps /= Rat(2);
        ++halvings;
      }
      st.eps = eps;
      st.aux = {{"r", r.str()}, {"halvings", halvings}};
      if (gr) st.witness = AvoidWitness{n, r, fr + eps * pr, *gr};
    } else {
      st.case_tag = "ii";
      MonotoneInverter inv(F, y);
      unsigned long K = 2 * Q.size() + bit_length(mpz_class(static_cast<unsigned long>(Q.size()))) + 4;
      bool done = false;
      for (; !done; ++K) {
        const auto [lo, hi] = inv.bracket_at(K);
        std::vector<Rat> cands;
        if (lo == hi) {
          const Rat step(mpz_class(1), mpz_class(1) << K);
          cands.push_back(lo);
          if (lo + step <= Rat(1)) cands.push_back(lo + step);
          if (lo - step >= Rat(0)) cands.push_back(lo - step);
        } else {
          auto dist = [&](const Rat& x) {
            auto it = Qset.lower_bound(x);
            std::optional<Rat> best;
            if (it != Qset.end()) best = *it - x;
            if (it != Qset.begin()) {
              const Rat dd = x - *std::prev(it);
              if (!best || dd < *best) best = dd;
            }
            return *best;
          };
          cands = dist(hi) > dist(lo) ? std::vector<Rat>{hi, lo} : std::vector<Rat>{lo, hi};
        }
        for (const Rat& z : cands) {
          if (Qset.count(z)) continue;
          const Rat eps = (y - f.eval(z)) / node_prod_at(Q, z);
          if (eps.abs() > bound) continue;
          std::optional<Rat> gz;
          if (g) {
            gz = g->eval(z);
            if (*gz == y) continue;
          }
          st.z = z;
          st.eps = eps;
          st.aux = {{"level", K}, {"bracket", {lo.str(), hi.str()}}};
          if (gz) st.witness = AvoidWitness{n, z, y, *gz};
          done = true;
          break;
        }
      }
    }
    st.stepped = true;
    f += st.eps * node_product(Q);
    zs.push_back(st.z);
    if (observe) observe(st);
      t.stages.push_back(std::move(st));
  }
  return t;
}

std::vector<Poly> pila_partial_sums(const Trace& t) {
  std::vector<Poly> out{Poly::x()};
  std::vector<Rat> zs;
  for (const auto& st : t.stages) {
    if (!st.stepped) break;
    const std::vector<Rat> Q = pila_nodes(st.T, zs);
    out.push_back(out.back() + st.eps * node_product(Q));
    zs.push_back(st.z);
  }
  return out;
}

}  // namespace qbiject
