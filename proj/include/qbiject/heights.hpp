#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qbiject/height.hpp"
#include "qbiject/schedule.hpp"
#include "qbiject/trace.hpp"

namespace qbiject {

/// One certified inequality of the height ledger.
struct LedgerEntry {
  std::string check;  // condition1 | condition2 | odd_height | majorant | final_bound | chain | index_bound | superadditive | x_value
  unsigned long n = 0;
  Verdict verdict = Verdict::fail;
  int tier = 0;
  nlohmann::json detail = nlohmann::json::object();
};

struct HeightLedger {
  std::vector<LedgerEntry> entries;
  std::size_t count(Verdict v) const;
  bool all_pass() const { return count(Verdict::pass) == entries.size(); }
};

/// Largest t for which B(t) is evaluated exactly; beyond it the ledger uses the
/// lower bound 4 t X(kExactBLimit), which only ever turns a pass into a marginal.
inline constexpr unsigned long kExactBLimit = 4096;

/// Re-derives every height inequality from the trace data alone.
HeightLedger check_height_ledger(const Trace& t, const HeightSchedule& sched);

nlohmann::json ledger_to_json(const HeightLedger& l);

}  // namespace qbiject
