#include "sasakian/sasakian.h"

#include <new>
#include <string>

#include "sasakian/error.hpp"
#include "sasakian/suite.hpp"

struct sasakian_config {
  sasakian::SuiteConfig config;
};

struct sasakian_report {
  sasakian::VerificationReport report;
  std::string json;
  std::string text;
};

namespace {

thread_local std::string last_error;

sasakian_status status_of(sasakian::ErrorCode code) {
  // The enums share their order, offset by SASAKIAN_OK.
  return static_cast<sasakian_status>(static_cast<int>(code) + 1);
}

template <class F>
sasakian_status guarded(F f) {
  try {
    f();
    last_error.clear();
    return SASAKIAN_OK;
  } catch (const sasakian::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SASAKIAN_E_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SASAKIAN_E_INTERNAL;
  }
}

sasakian_status null_argument(const char* what) {
  last_error = std::string(what) + " must not be null";
  return SASAKIAN_E_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* sasakian_version(void) { return SASAKIAN_VERSION; }

const char* sasakian_status_name(sasakian_status status) {
  if (status == SASAKIAN_OK) return "ok";
  if (status < SASAKIAN_OK || status > SASAKIAN_E_INTERNAL) return "unknown";
  static thread_local std::string name;
  name = std::string(sasakian::to_string(static_cast<sasakian::ErrorCode>(static_cast<int>(status) - 1)));
  return name.c_str();
}

const char* sasakian_last_error(void) { return last_error.c_str(); }

sasakian_status sasakian_config_load(const char* path, sasakian_config** out) {
  if (path == nullptr) return null_argument("path");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new sasakian_config{sasakian::load_config(path)}; });
}

sasakian_status sasakian_config_parse(const char* yaml, sasakian_config** out) {
  if (yaml == nullptr) return null_argument("yaml");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new sasakian_config{sasakian::parse_config(yaml)}; });
}

sasakian_status sasakian_config_set_seed(sasakian_config* config, uint64_t seed) {
  if (config == nullptr) return null_argument("config");
  config->config.seed = seed;
  return SASAKIAN_OK;
}

sasakian_status sasakian_config_set_strict(sasakian_config* config, int strict) {
  if (config == nullptr) return null_argument("config");
  config->config.strict_paper_mode = strict != 0;
  return SASAKIAN_OK;
}

sasakian_status sasakian_config_set_checks(sasakian_config* config, const char* const* names, size_t count) {
  if (config == nullptr) return null_argument("config");
  if (count > 0 && names == nullptr) return null_argument("names");
  return guarded([&] {
    std::vector<std::string> checks;
    for (size_t i = 0; i < count; ++i) {
      if (names[i] == nullptr) throw sasakian::Error(sasakian::ErrorCode::invalid_argument, "check name must not be null");
      checks.emplace_back(names[i]);
    }
    sasakian::require_known_checks(checks);
    config->config.checks = std::move(checks);
  });
}

void sasakian_config_free(sasakian_config* config) { delete config; }

sasakian_status sasakian_run(const sasakian_config* config, sasakian_report** out) {
  if (config == nullptr) return null_argument("config");
  if (out == nullptr) return null_argument("out");
  *out = nullptr;
  return guarded([&] { *out = new sasakian_report{sasakian::run_suite(config->config), {}, {}}; });
}

const char* sasakian_report_json(sasakian_report* report, int include_timestamp) {
  if (report == nullptr) return nullptr;
  report->json = sasakian::to_json(report->report, include_timestamp != 0);
  return report->json.c_str();
}

const char* sasakian_report_text(sasakian_report* report) {
  if (report == nullptr) return nullptr;
  report->text = sasakian::to_text(report->report);
  return report->text.c_str();
}

int sasakian_report_exit_code(const sasakian_report* report) {
  return report == nullptr ? 1 : report->report.exit_code();
}

size_t sasakian_report_check_count(const sasakian_report* report) {
  return report == nullptr ? 0 : report->report.checks.size();
}

void sasakian_report_free(sasakian_report* report) { delete report; }

}  // extern "C"
