#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qbiject/config.hpp"
#include "qbiject/rat.hpp"

namespace qbiject {

/// f(point) != g_index(point), both values recorded.
struct AvoidWitness {
  std::size_t index = 0;
  Rat point;
  Rat f_value;
  Rat g_value;
};

/// One step n of the back-and-forth recursion: node x_{j_n}, eps_n, f(x_{j_n}).
struct StepRecord {
  unsigned long n = 0;
  std::string kind;                 // seed | odd | even
  std::optional<std::uint64_t> j;   // enumeration index, absent for huge nodes
  Rat node;
  std::optional<Rat> eps;           // absent for n = 0
  Rat value;
  nlohmann::json aux = nlohmann::json::object();
  std::optional<AvoidWitness> witness;
};

/// One stage of the counting construction.
struct StageRecord {
  unsigned long n = 0;
  mpz_class T;
  mpz_class b;
  unsigned long d = 0;
  std::uint64_t q_size = 0;
  mpz_class count;      // C_f(T_n), negative when too large to count
  mpz_class s_ceil;     // ceil of the certified upper bound for s(T_n)
  bool stepped = false; // false when the run halted before the step
  Rat y;
  Rat z;
  Rat eps;
  std::string case_tag;  // "i" or "ii"
  nlohmann::json aux = nlohmann::json::object();
  std::optional<AvoidWitness> witness;
};

struct Trace {
  int version = 1;
  Config config;
  std::vector<StepRecord> steps;
  std::vector<StageRecord> stages;
  std::optional<std::string> halted;
  nlohmann::json ledger;  // heights mode
};

nlohmann::json witness_to_json(const AvoidWitness& w);
nlohmann::json step_to_json(const StepRecord& s);
nlohmann::json stage_to_json(const StageRecord& s);
nlohmann::json trace_to_json(const Trace& t);
Trace trace_from_json(const nlohmann::json& j);

void write_trace(const Trace& t, const std::string& path);
Trace read_trace(const std::string& path);

}  // namespace qbiject
