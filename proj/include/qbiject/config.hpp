#pragma once

#include <gmpxx.h>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qbiject/avoid.hpp"
#include "qbiject/enumeration.hpp"
#include "qbiject/rat.hpp"

namespace qbiject {

enum class Mode { basic, heights, pila };
enum class MajorantMode { apriori, posterior };

std::string mode_name(Mode m);
Mode mode_from_name(const std::string& s);
std::string majorant_name(MajorantMode m);

/// s(T) = c (ln T)^k.
struct SlowFunction {
  Rat c{2};
  unsigned long k = 1;
};

inline constexpr unsigned long kDefaultBudgetLog2 = 30;
inline constexpr std::uint64_t kDefaultNodeBudget = 4096;

/// Everything a run depends on; serialized into every trace header.
struct Config {
  Mode mode = Mode::basic;
  unsigned long depth = 21;
  EnumKind y_kind = EnumKind::lex;
  std::vector<Rat> y_prefix;
  AvoidFamily avoid = default_avoid_family();

  bool schedule_strict = true;
  unsigned long schedule_c = 48;
  std::optional<MajorantMode> majorant;  // defaults: strict -> apriori, scaled -> posterior
  mpz_class exponent_budget = mpz_class(1) << kDefaultBudgetLog2;

  unsigned long stages = 1;
  SlowFunction slow;
  std::uint64_t node_budget = kDefaultNodeBudget;

  MajorantMode effective_majorant() const {
    if (majorant) return *majorant;
    return schedule_strict ? MajorantMode::apriori : MajorantMode::posterior;
  }
};

/// Default budget, overridden by QBIJECT_EXPONENT_BUDGET when set.
mpz_class default_exponent_budget();

nlohmann::json config_to_json(const Config& c);
Config config_from_json(const nlohmann::json& j);

}  // namespace qbiject
