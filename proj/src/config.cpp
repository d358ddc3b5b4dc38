#include "qbiject/config.hpp"

#include <cstdlib>

#include "qbiject/error.hpp"

namespace qbiject {

std::string mode_name(Mode m) {
  switch (m) {
    case Mode::basic: return "basic";
    case Mode::heights: return "heights";
    case Mode::pila: return "pila";
  }
  return "?";
}

Mode mode_from_name(const std::string& s) {
  if (s == "basic") return Mode::basic;
  if (s == "heights") return Mode::heights;
  if (s == "pila") return Mode::pila;
  throw Error(Errc::parse_error, "unknown mode '" + s + "'");
}

std::string majorant_name(MajorantMode m) {
  return m == MajorantMode::apriori ? "apriori" : "posterior";
}

mpz_class default_exponent_budget() {
  if (const char* env = std::getenv("QBIJECT_EXPONENT_BUDGET"); env != nullptr && *env != '\0') {
    const mpz_class v = parse_integer(env);
    if (sgn(v) <= 0) throw Error(Errc::parse_error, "QBIJECT_EXPONENT_BUDGET must be positive");
    return v;
  }
  return mpz_class(1) << kDefaultBudgetLog2;
}

nlohmann::json config_to_json(const Config& c) {
  nlohmann::json j;
  j["mode"] = mode_name(c.mode);
  nlohmann::json prefix = nlohmann::json::array();
  for (const auto& r : c.y_prefix) prefix.push_back(r.str());
  j["y_enumeration"] = {{"kind", enum_kind_name(c.y_kind)}, {"prefix", prefix}};
  j["x_enumeration"] = "lex";
  j["avoid"] = avoid_to_json(c.avoid);
  if (c.mode == Mode::pila) {
    j["stages"] = c.stages;
    j["slow"] = {{"c", c.slow.c.str()}, {"k", c.slow.k}};
    j["node_budget"] = c.node_budget;
  } else {
    j["depth"] = c.depth;
  }
  if (c.mode == Mode::heights) {
    j["schedule"] = {{"kind", c.schedule_strict ? "strict" : "scaled"},
                     {"c", c.schedule_c},
                     {"exponent_budget", c.exponent_budget.get_str()},
                     {"majorant", majorant_name(c.effective_majorant())},
                     {"majorant_base", 3}};
  }
  return j;
}

namespace {

const nlohmann::json& need(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw Error(Errc::parse_error, std::string("config lacks '") + key + "'");
  return j.at(key);
}

}  // namespace

Config config_from_json(const nlohmann::json& j) {
  try {
    Config c;
    c.mode = mode_from_name(need(j, "mode").get<std::string>());
    if (j.contains("y_enumeration")) {
      const auto& y = j["y_enumeration"];
      if (y.contains("kind")) c.y_kind = enum_kind_from_name(y["kind"].get<std::string>());
      if (y.contains("prefix")) {
        for (const auto& e : y["prefix"]) c.y_prefix.push_back(Rat::parse(e.get<std::string>()));
      }
    }
    if (j.contains("avoid")) c.avoid = avoid_from_json(j["avoid"]);
    if (c.mode == Mode::pila) {
      if (j.contains("stages")) c.stages = j["stages"].get<unsigned long>();
      if (j.contains("slow")) {
        c.slow.c = Rat::parse(need(j["slow"], "c").get<std::string>());
        c.slow.k = need(j["slow"], "k").get<unsigned long>();
      }
      if (j.contains("node_budget")) c.node_budget = j["node_budget"].get<std::uint64_t>();
    } else if (j.contains("depth")) {
      c.depth = j["depth"].get<unsigned long>();
    }
    if (c.mode == Mode::heights) {
      c.exponent_budget = default_exponent_budget();
      if (j.contains("schedule")) {
        const auto& s = j["schedule"];
        if (s.contains("kind")) {
          const auto kind = s["kind"].get<std::string>();
          if (kind != "strict" && kind != "scaled") {
            throw Error(Errc::parse_error, "schedule kind must be strict or scaled");
          }
          c.schedule_strict = kind == "strict";
        }
        if (s.contains("c")) c.schedule_c = s["c"].get<unsigned long>();
        if (c.schedule_strict) c.schedule_c = 48;
        if (s.contains("exponent_budget")) {
          c.exponent_budget = parse_integer(s["exponent_budget"].get<std::string>());
        }
        if (s.contains("majorant")) {
          const auto mj = s["majorant"].get<std::string>();
          if (mj == "apriori") c.majorant = MajorantMode::apriori;
          else if (mj == "posterior") c.majorant = MajorantMode::posterior;
          else throw Error(Errc::parse_error, "majorant must be apriori or posterior");
        }
      }
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, std::string("malformed config: ") + e.what());
  }
}

}  // namespace qbiject
