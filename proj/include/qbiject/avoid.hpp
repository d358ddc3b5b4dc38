#pragma once

#include <nlohmann/json.hpp>

#include <string>
#include <utility>
#include <vector>

#include "qbiject/poly.hpp"
#include "qbiject/rat.hpp"

namespace qbiject {

enum class LftFamily { first, second };

std::string lft_family_name(LftFamily f);

/// first:  x / (a x + 1 - a)
/// second: (a - 1)(x - 1) / (a x + 1 - a)
/// Throws PoleInUnit when a x + 1 - a vanishes somewhere on [0,1], i.e. a >= 1.
Rat lft_eval(const Rat& a, const Rat& q, LftFamily family);
RatFunc lft_ratfunc(const Rat& a, LftFamily family);
/// Parameters of the inverse map, which lies in the same families.
std::pair<Rat, LftFamily> lft_inverse(const Rat& a, LftFamily family);

/// Brute-force check on every q with H(q) <= sample_h: image rational in [0,1],
/// injective, and the closed-form inverse round-trips.
bool lft_bijection_check(const Rat& a, LftFamily family, unsigned long sample_h);

/// The functions g_0, g_1, ... a construction must differ from.
struct AvoidFamily {
  std::vector<RatFunc> funcs;

  std::size_t size() const { return funcs.size(); }
  bool empty() const { return funcs.empty(); }
};

/// Identity, then 1 - x, then both LFT families over a sequence of admissible a.
AvoidFamily default_avoid_family();

nlohmann::json poly_to_json(const Poly& p);
Poly poly_from_json(const nlohmann::json& j);
nlohmann::json avoid_to_json(const AvoidFamily& fam);
/// Validates that every denominator is root-free on [0,1] (NotUnitSafe otherwise).
AvoidFamily avoid_from_json(const nlohmann::json& j);

}  // namespace qbiject
