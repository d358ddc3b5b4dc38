#include "qbiject/trace.hpp"

#include <fstream>
#include <sstream>

#include "qbiject/error.hpp"

namespace qbiject {

namespace {

Rat rat_at(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw Error(Errc::parse_error, std::string("missing rational field '") + key + "'");
  }
  return Rat::parse(j.at(key).get<std::string>());
}

mpz_class int_at(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_string()) {
    throw Error(Errc::parse_error, std::string("missing integer field '") + key + "'");
  }
  return parse_integer(j.at(key).get<std::string>());
}

AvoidWitness witness_from_json(const nlohmann::json& j) {
  AvoidWitness w;
  w.index = j.at("index").get<std::size_t>();
  w.point = rat_at(j, "point");
  w.f_value = rat_at(j, "f_value");
  w.g_value = rat_at(j, "g_value");
  return w;
}

}  // namespace

nlohmann::json witness_to_json(const AvoidWitness& w) {
  return {{"index", w.index}, {"point", w.point.str()}, {"f_value", w.f_value.str()},
          {"g_value", w.g_value.str()}};
}

nlohmann::json step_to_json(const StepRecord& s) {
  nlohmann::json j;
  j["n"] = s.n;
  j["kind"] = s.kind;
  j["j"] = s.j ? nlohmann::json(*s.j) : nlohmann::json(nullptr);
  j["node"] = s.node.str();
  j["eps"] = s.eps ? nlohmann::json(s.eps->str()) : nlohmann::json(nullptr);
  j["value"] = s.value.str();
  j["aux"] = s.aux;
  j["avoid_witness"] = s.witness ? witness_to_json(*s.witness) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json stage_to_json(const StageRecord& s) {
  nlohmann::json j;
  j["n"] = s.n;
  j["T"] = s.T.get_str();
  j["b"] = s.b.get_str();
  j["d"] = s.d;
  j["Q_size"] = s.q_size;
  if (sgn(s.count) < 0) j["C_f"] = nullptr;
  else j["C_f"] = s.count.get_str();
  j["s_upper_ceil"] = s.s_ceil.get_str();
  j["stepped"] = s.stepped;
  if (s.stepped) {
    j["y"] = s.y.str();
    j["z"] = s.z.str();
    j["eps"] = s.eps.str();
    j["case"] = s.case_tag;
    j["aux"] = s.aux;
    j["avoid_witness"] = s.witness ? witness_to_json(*s.witness) : nlohmann::json(nullptr);
  }
  return j;
}

nlohmann::json trace_to_json(const Trace& t) {
  nlohmann::json j;
  j["version"] = t.version;
  j["mode"] = mode_name(t.config.mode);
  j["config"] = config_to_json(t.config);
  if (t.config.mode == Mode::pila) {
    nlohmann::json st = nlohmann::json::array();
    for (const auto& s : t.stages) st.push_back(stage_to_json(s));
    j["stages"] = st;
  } else {
    nlohmann::json st = nlohmann::json::array();
    for (const auto& s : t.steps) st.push_back(step_to_json(s));
    j["steps"] = st;
    if (t.steps.size() > 2) {
      j["seed_repair"] = {{"j2", t.steps[2].j ? nlohmann::json(*t.steps[2].j) : nlohmann::json(nullptr)},
                          {"y2", t.steps[2].value.str()}};
    }
    j["even_step_rule"] = t.config.mode == Mode::heights ? "grid point floor/ceil(M*x)/M"
                                                         : "dyadic bracket endpoint";
  }
  j["halted"] = t.halted ? nlohmann::json(*t.halted) : nlohmann::json(nullptr);
  if (!t.ledger.is_null()) j["ledger"] = t.ledger;
  return j;
}

Trace trace_from_json(const nlohmann::json& j) {
  try {
    Trace t;
    t.version = j.at("version").get<int>();
    if (t.version != 1) throw Error(Errc::parse_error, "unsupported trace version");
    t.config = config_from_json(j.at("config"));
    if (mode_name(t.config.mode) != j.at("mode").get<std::string>()) {
      throw Error(Errc::parse_error, "mode does not match config");
    }
    if (t.config.mode == Mode::pila) {
      for (const auto& s : j.at("stages")) {
        StageRecord r;
        r.n = s.at("n").get<unsigned long>();
        r.T = int_at(s, "T");
        r.b = int_at(s, "b");
        r.d = s.at("d").get<unsigned long>();
        r.q_size = s.at("Q_size").get<std::uint64_t>();
        r.count = s.at("C_f").is_null() ? mpz_class(-1) : int_at(s, "C_f");
        r.s_ceil = int_at(s, "s_upper_ceil");
        r.stepped = s.at("stepped").get<bool>();
        if (r.stepped) {
          r.y = rat_at(s, "y");
          r.z = rat_at(s, "z");
          r.eps = rat_at(s, "eps");
          r.case_tag = s.at("case").get<std::string>();
          r.aux = s.at("aux");
          if (!s.at("avoid_witness").is_null()) r.witness = witness_from_json(s.at("avoid_witness"));
        }
        t.stages.push_back(std::move(r));
      }
    } else {
      for (const auto& s : j.at("steps")) {
        StepRecord r;
        r.n = s.at("n").get<unsigned long>();
        r.kind = s.at("kind").get<std::string>();
        if (!s.at("j").is_null()) r.j = s.at("j").get<std::uint64_t>();
        r.node = rat_at(s, "node");
        if (!s.at("eps").is_null()) r.eps = rat_at(s, "eps");
        r.value = rat_at(s, "value");
        r.aux = s.at("aux");
        if (!s.at("avoid_witness").is_null()) r.witness = witness_from_json(s.at("avoid_witness"));
        t.steps.push_back(std::move(r));
      }
    }
    if (j.contains("halted") && !j.at("halted").is_null()) t.halted = j.at("halted").get<std::string>();
    if (j.contains("ledger")) t.ledger = j.at("ledger");
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, std::string("malformed trace: ") + e.what());
  }
}

void write_trace(const Trace& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::invalid_argument, "cannot write " + path);
  out << trace_to_json(t).dump(1) << '\n';
}

Trace read_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::parse_error, "cannot read " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, std::string("invalid JSON: ") + e.what());
  }
  return trace_from_json(j);
}

}  // namespace qbiject
