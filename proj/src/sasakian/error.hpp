#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sasakian {

enum class ErrorCode {
  invalid_argument,
  dimension_mismatch,
  non_finite,
  dual_division_by_zero,
  outside_domain,
  not_differentiable,
  singular_metric,
  unsupported_valence,
  rank_deficient,
  ill_conditioned,
  not_tangent,
  not_sasakian,
  parse_error,
  config_error,
  all_excluded,
  internal,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the engine carries one of the codes above so the C
// boundary can map it without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sasakian
