#pragma once

// Config-driven verification suites and their reports.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace sasakian {

enum class NormalOrientation { positive, negative, lambda_nonnegative };

struct SuiteConfig {
  std::string name;
  int n = 1;
  std::vector<std::string> coordinates;  // defaults to s1..s2n
  std::vector<std::string> map;          // 2n+1 expressions
  std::optional<std::string> scaling;    // empty: unit normal
  NormalOrientation orientation = NormalOrientation::positive;
  std::optional<std::vector<double>> base_point;  // for lambda_nonnegative; box centre by default

  std::size_t sample_count = 50;
  double box_lo = -1.0;
  double box_hi = 1.0;
  std::uint64_t seed = 7;
  std::size_t pairs = 4;

  struct Tolerances {
    double axiom = 1e-8;
    double gauss_weingarten = 1e-6;
    double algebraic = 1e-5;
    double differential = 1e-5;
    double hypothesis = 1e-6;
    double conclusion = 1e-5;
    double model = 1e-12;
  } tolerances;

  std::size_t model_count = 100;  // per dimension 2n in {2, 4, 6}

  std::optional<std::vector<std::string>> checks;  // empty optional: everything
  bool strict_paper_mode = false;
};

// Throws Error(config_error) or Error(parse_error) naming the offending key.
SuiteConfig parse_config(std::string_view yaml, std::string name = "inline");
SuiteConfig load_config(const std::string& path);

// Group names in execution order.
const std::vector<std::string>& check_groups();
// Every check name the engine can emit, with its group.
const std::vector<std::pair<std::string, std::string>>& check_catalogue();

// Throws Error(config_error) for a name that is neither a group, a check nor "all".
void require_known_checks(const std::vector<std::string>& names);

struct CheckRow {
  std::string name;
  std::string group;
  std::string equation_ref;
  std::optional<double> max_residual;
  double tolerance = 0.0;
  std::size_t samples_used = 0;
  std::size_t samples_excluded = 0;
  std::string verdict;
  std::optional<std::string> convention;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
};

struct VerificationReport {
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  std::vector<CheckRow> checks;

  // 2 if any check failed or was refuted, else 0.
  [[nodiscard]] int exit_code() const;
};

VerificationReport run_suite(const SuiteConfig& config);

std::string to_json(const VerificationReport& report, bool include_timestamp = true);
std::string to_text(const VerificationReport& report);

}  // namespace sasakian
