#include "qbiject/heights.hpp"

#include <algorithm>

#include "qbiject/error.hpp"
#include "qbiject/partial_sum.hpp"

namespace qbiject {

std::size_t HeightLedger::count(Verdict v) const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [v](const LedgerEntry& e) { return e.verdict == v; }));
}

namespace {

LedgerEntry exact(std::string check, unsigned long n, bool ok, nlohmann::json detail = {}) {
  LedgerEntry e;
  e.check = std::move(check);
  e.n = n;
  e.verdict = ok ? Verdict::pass : Verdict::fail;
  e.tier = ok ? 1 : 0;
  if (!detail.is_null()) e.detail = std::move(detail);
  return e;
}

LedgerEntry certified(std::string check, unsigned long n, CertifyResult r, nlohmann::json detail) {
  LedgerEntry e;
  e.check = std::move(check);
  e.n = n;
  e.verdict = r.verdict;
  e.tier = r.tier;
  e.detail = std::move(detail);
  return e;
}

std::string digits(const mpz_class& v) { return std::to_string(mpz_sizeinbase(v.get_mpz_t(), 10)); }

}  // namespace

HeightLedger check_height_ledger(const Trace& t, const HeightSchedule& sched) {
  HeightLedger L;
  const auto& steps = t.steps;
  const unsigned long depth = steps.empty() ? 0 : steps.back().n;

  if (sched.is_strict()) {
    const long want[] = {1, 48, 2304, 221184};
    bool ok = true;
    for (unsigned long i = 0; i < 4; ++i) ok = ok && sched.X(i) == want[i];
    L.entries.push_back(exact("x_value", 0, ok, {{"X", {"1", "48", "2304", "221184"}}}));
  }

  // sum_{k<n} X(k) <= X(n)
  {
    mpz_class acc = 0;
    for (unsigned long n = 1; n <= depth; ++n) {
      acc += sched.X(n - 1);
      L.entries.push_back(exact("superadditive", n, acc <= sched.X(n)));
    }
  }

  // Condition 1: D(eps_n / n) <= e^{n X(n)}.
  for (const auto& s : steps) {
    if (s.n == 0 || !s.eps) continue;
    const Rat c = *s.eps / Rat(static_cast<long>(s.n));
    const mpz_class B = mpz_class(s.n) * sched.X(s.n);
    L.entries.push_back(certified("condition1", s.n, certify_le_exp(c.den(), B),
                                  {{"den_digits", digits(c.den())}}));
  }

  // Condition 2: H(x_{j_k}) <= e^{X(n)} for all k <= n; the running maximum suffices.
  {
    std::size_t argmax = 0;
    for (std::size_t n = 0; n < steps.size(); ++n) {
      if (steps[n].node.height() > steps[argmax].node.height()) argmax = n;
      const mpz_class h = steps[argmax].node.height();
      L.entries.push_back(certified("condition2", steps[n].n, certify_le_exp(h, sched.X(steps[n].n)),
                                    {{"max_height_digits", digits(h)}, {"at_step", argmax}}));
    }
  }

  for (const auto& s : steps) {
    if (s.kind == "odd") {
      // H(x_a) <= m + 1
      L.entries.push_back(exact("odd_height", s.n, s.node.height() <= s.n));
    } else if (s.kind == "even" && s.aux.contains("majorant")) {
      const auto& mj = s.aux.at("majorant");
      const unsigned long m = s.n - 1;
      const mpz_class E = parse_integer(mj.at("exponent").get<std::string>());
      if (mj.at("mode") == "apriori") {
        L.entries.push_back(exact("majorant", s.n, E >= sched.apriori_exponent(m),
                                  {{"mode", "apriori"}, {"exponent", E.get_str()}}));
      } else {
        // 3^E |prod_{k<=m} (z - x_k)| >= 1
        std::vector<Rat> nodes;
        for (unsigned long k = 0; k <= m; ++k) nodes.push_back(steps[k].node);
        const Frac p = PartialSum::node_prod(nodes, nodes.size(), s.node);
        mpz_class lhs;
        mpz_ui_pow_ui(lhs.get_mpz_t(), 3, E.get_ui());
        lhs *= abs(p.num);
        L.entries.push_back(exact("majorant", s.n, lhs >= p.den, {{"mode", "posterior"}, {"exponent", E.get_str()}}));
      }
    }
  }

  // Chain bound at the pinning step: D(f_n(x)) <= H(x)^n e^{3 n X(n)}, and the index bound n <= H(x)^2.
  for (const auto& s : steps) {
    if (s.n == 0) continue;
    const mpz_class H = s.node.height();
    const mpz_class factor = pow_ui(H, s.n);
    L.entries.push_back(certified("chain", s.n, certify_le_exp(s.value.den(), factor, 3 * s.n * sched.X(s.n)),
                                  {{"value_den_digits", digits(s.value.den())}}));
    L.entries.push_back(exact("index_bound", s.n, mpz_class(s.n) <= H * H));
  }

  // Final bound: D(f(x)) <= e^{B(H(x)^2)} for every assigned node.
  for (const auto& s : steps) {
    const mpz_class H = s.node.height();
    const mpz_class tt = H * H;
    CertifyResult r;
    nlohmann::json detail = {{"t_digits", digits(tt)}};
    if (tt <= kExactBLimit) {
      r = certify_le_exp(s.value.den(), sched.B(tt.get_ui()));
      detail["B_exact"] = true;
    } else {
      // X is increasing, so B(t) >= 4 t X(limit).
      r = certify_le_exp(s.value.den(), 4 * tt * sched.X(kExactBLimit));
      if (r.verdict == Verdict::fail) r = {Verdict::marginal, 0};
      detail["B_exact"] = false;
    }
    L.entries.push_back(certified("final_bound", s.n, r, std::move(detail)));
  }
  return L;
}

nlohmann::json ledger_to_json(const HeightLedger& l) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : l.entries) {
    entries.push_back({{"check", e.check}, {"n", e.n}, {"verdict", verdict_name(e.verdict)}, {"tier", e.tier},
                       {"detail", e.detail}});
  }
  return {{"entries", entries},
          {"summary",
           {{"pass", l.count(Verdict::pass)}, {"fail", l.count(Verdict::fail)}, {"marginal", l.count(Verdict::marginal)}}}};
}

}  // namespace qbiject
