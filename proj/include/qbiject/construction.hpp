#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "qbiject/config.hpp"
#include "qbiject/enumeration.hpp"
#include "qbiject/partial_sum.hpp"
#include "qbiject/schedule.hpp"
#include "qbiject/trace.hpp"

namespace qbiject {

/// Recursion state after step m: nodes x_{j_0..j_m}, f_m, and the assignment.
class ConstructionState {
 public:
  unsigned long m() const { return m_; }
  const PartialSum& f() const { return f_; }
  const std::vector<Rat>& nodes() const { return f_.nodes(); }
  const std::vector<Rat>& values() const { return values_; }
  const std::vector<StepRecord>& records() const { return records_; }
  std::vector<StepRecord>& records() { return records_; }
  /// eps_1, eps_2, ...
  const std::vector<Rat>& eps() const { return eps_; }
  bool has_node(const Rat& x) const { return node_set_.count(x) != 0; }
  bool has_value(const Rat& y) const { return value_set_.count(y) != 0; }
  /// Distance from x to the closest current node.
  Rat nearest_node_distance(const Rat& x) const;
  /// Closest nodes strictly below and above x.
  std::pair<Rat, Rat> neighbours(const Rat& lo, const Rat& hi) const;

  /// Least b with y_b not yet assigned.
  std::size_t least_unassigned_y();
  const Rat& y(std::size_t b) { return y_.at(b); }
  std::size_t next_odd_ordinal() const { return odd_ordinal_; }

  // Mutation, used by the step functions only.
  void assign(const Rat& eps, const Rat& node, const Rat& value, StepRecord rec);
  void bump_odd_ordinal() { ++odd_ordinal_; }

 private:
  friend ConstructionState init_basic(const Config& cfg);

  unsigned long m_ = 0;
  PartialSum f_;
  std::vector<Rat> values_;
  std::vector<Rat> eps_;
  std::set<Rat> node_set_;
  std::set<Rat> value_set_;
  YEnumeration y_;
  std::size_t odd_ordinal_ = 0;
  std::vector<StepRecord> records_;
};

/// Seeds j_0 = 0, j_1 = 1, eps_1 = 1, eps_2 = 0 and pins f(y_2) = y_2.
ConstructionState init_basic(const Config& cfg);

/// Odd step: new domain point x_a, image chosen from the s-menu.
void step_odd(ConstructionState& st, const AvoidFamily& avoid, bool record_height = false);
/// Even step: new target y_b, preimage z from a dyadic bracket endpoint.
void step_even(ConstructionState& st);
/// Even step with the height-bounded grid choice.
void step_even_heights(ConstructionState& st, const HeightSchedule& sched, MajorantMode mode,
                       const mpz_class& exponent_budget);

/// Refuses the run up front when some even step would exceed the exponent budget.
void precheck_schedule(const Config& cfg);

HeightSchedule schedule_of(const Config& cfg);

/// Called with each step record as soon as it is final.
using StepObserver = std::function<void(const StepRecord&)>;

/// Runs basic or heights mode to cfg.depth.
Trace run_construction(const Config& cfg, const StepObserver& observe = {});

/// Rebuilds the partial sums from a trace's step records (no choices re-made).
PartialSum partial_sum_from_steps(const std::vector<StepRecord>& steps);

/// Exact pinned value of f at an assigned node, if any.
std::optional<Rat> f_exact_at(const Trace& t, const Rat& q);

}  // namespace qbiject
