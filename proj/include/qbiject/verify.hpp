#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qbiject/height.hpp"
#include "qbiject/trace.hpp"

namespace qbiject {

struct CheckEntry {
  std::string id;
  std::string location;
  Verdict verdict = Verdict::fail;
  nlohmann::json witness = nlohmann::json::object();
};

struct VerifyReport {
  std::vector<CheckEntry> entries;

  void add(std::string id, std::string location, bool ok, nlohmann::json witness = nlohmann::json::object());
  void add(std::string id, std::string location, Verdict v, nlohmann::json witness = nlohmann::json::object());
  std::size_t count(Verdict v) const;
  /// No fail and no marginal entries.
  bool clean() const { return count(Verdict::pass) == entries.size(); }
  /// Entries with the given id.
  std::vector<const CheckEntry*> by_id(const std::string& id) const;
  nlohmann::json to_json() const;
};

struct VerifyOptions {
  bool replay = true;
  std::size_t freeze_points = 100;
  unsigned long b_guarantee_height = 30;
};

/// Replays the trace's config and requires a bit-exact match, then re-checks
/// every invariant directly from the recorded data.
/// Throws ReplayDivergence naming the first step or stage that differs.
VerifyReport verify_trace(const Trace& t, const VerifyOptions& opt = {});

/// H(x_n)^2 >= 2n for 2 <= n <= n_max, and |H(x_nmax) sqrt 3 / (pi sqrt n_max) - 1| < 1/50
/// decided with outward-rounded 64-bit intervals.
VerifyReport asymptotic_suite(std::uint64_t n_max);

}  // namespace qbiject
