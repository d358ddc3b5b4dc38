#include "qbiject/avoid.hpp"

#include <set>

#include "qbiject/error.hpp"
#include "qbiject/lex.hpp"

namespace qbiject {

std::string lft_family_name(LftFamily f) { return f == LftFamily::first ? "first" : "second"; }

namespace {

void require_admissible(const Rat& a) {
  if (a >= Rat(1)) {
    throw Error(Errc::pole_in_unit,
                "a x + 1 - a vanishes at x = " + ((a - Rat(1)) / a).str() + " for a = " + a.str());
  }
}

}  // namespace

Rat lft_eval(const Rat& a, const Rat& q, LftFamily family) {
  require_admissible(a);
  const Rat den = a * q + Rat(1) - a;
  if (den.is_zero()) throw Error(Errc::pole_in_unit, "denominator vanishes at " + q.str());
  if (family == LftFamily::first) return q / den;
  return (a - Rat(1)) * (q - Rat(1)) / den;
}

RatFunc lft_ratfunc(const Rat& a, LftFamily family) {
  require_admissible(a);
  Poly den({Rat(1) - a, a});
  if (family == LftFamily::first) return RatFunc(Poly::x(), den);
  return RatFunc(Poly({Rat(1) - a, a - Rat(1)}), den);
}

std::pair<Rat, LftFamily> lft_inverse(const Rat& a, LftFamily family) {
  require_admissible(a);
  if (family == LftFamily::first) return {-a / (Rat(1) - a), LftFamily::first};
  return {a, LftFamily::second};
}

bool lft_bijection_check(const Rat& a, LftFamily family, unsigned long sample_h) {
  require_admissible(a);
  const auto [ai, fi] = lft_inverse(a, family);
  std::set<Rat> images;
  LexCursor cur;
  const std::uint64_t n = farey_count(sample_h);
  for (std::uint64_t i = 0; i < n; ++i) {
    const Rat q = cur.next();
    const Rat v = lft_eval(a, q, family);
    if (!v.in_unit()) return false;
    if (!images.insert(v).second) return false;
    if (lft_eval(ai, v, fi) != q) return false;
  }
  return true;
}

AvoidFamily default_avoid_family() {
  AvoidFamily fam;
  fam.funcs.push_back(lft_ratfunc(Rat(0), LftFamily::first));
  fam.funcs.push_back(lft_ratfunc(Rat(0), LftFamily::second));
  // Admissible parameters a < 1, a != 0, by height then positives first.
  std::vector<Rat> params;
  for (long h = 1; params.size() < 31; ++h) {
    for (long p = 1; p <= h && params.size() < 31; ++p) {
      const Rat pos(p, h);
      if (pos.height() == h && pos < Rat(1)) params.push_back(pos);
    }
    for (long p = 1; p <= h && params.size() < 31; ++p) {
      const Rat small(-p, h);
      if (small.height() == h) params.push_back(small);
      const Rat big(-h, p);
      if (p != h && big.height() == h && params.size() < 31) params.push_back(big);
    }
  }
  for (const auto& a : params) {
    fam.funcs.push_back(lft_ratfunc(a, LftFamily::first));
    fam.funcs.push_back(lft_ratfunc(a, LftFamily::second));
  }
  return fam;
}

nlohmann::json poly_to_json(const Poly& p) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : p.coeffs()) out.push_back(c.str());
  return out;
}

Poly poly_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(Errc::parse_error, "polynomial must be a JSON array");
  std::vector<Rat> c;
  for (const auto& e : j) {
    if (!e.is_string()) throw Error(Errc::parse_error, "coefficient must be a \"num/den\" string");
    c.push_back(Rat::parse(e.get<std::string>()));
  }
  return Poly(std::move(c));
}

nlohmann::json avoid_to_json(const AvoidFamily& fam) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& g : fam.funcs) {
    out.push_back({{"num", poly_to_json(g.num())}, {"den", poly_to_json(g.den())}});
  }
  return out;
}

AvoidFamily avoid_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(Errc::parse_error, "avoid family must be a JSON array");
  AvoidFamily fam;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    if (!e.is_object() || !e.contains("num") || !e.contains("den")) {
      throw Error(Errc::parse_error, "avoid entry " + std::to_string(i) + " needs num and den");
    }
    RatFunc g(poly_from_json(e["num"]), poly_from_json(e["den"]));
    if (!g.unit_safe()) {
      throw Error(Errc::not_unit_safe, "avoid entry " + std::to_string(i) + " has a pole in [0,1]");
    }
    fam.funcs.push_back(std::move(g));
  }
  return fam;
}

}  // namespace qbiject
