#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qbiject {

enum class Errc {
  bracket_too_wide,
  duplicate_node,
  not_bracketed,
  not_monotone,
  bad_enumeration,
  avoidance_exhausted,
  schedule_overflow,
  stage_overflow,
  stage_too_shallow,
  empty_tilde_q,
  pole_in_unit,
  not_unit_safe,
  parse_error,
  replay_divergence,
  invalid_argument,
  invariant_violation,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace qbiject
