#include "sasakian/sasakian.h"

#include <string>

#include <gtest/gtest.h>

#include <json.hpp>

namespace {

constexpr const char* kPlane = R"(
ambient: {name: standard_sasakian, n: 1}
embedding: {coordinates: [x, y], map: ["x", "y", "0.1"]}
sample: {count: 10}
models: {count: 5}
)";

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STREQ(sasakian_version(), "1.0.0");
  EXPECT_STREQ(sasakian_status_name(SASAKIAN_OK), "ok");
  EXPECT_STREQ(sasakian_status_name(SASAKIAN_E_CONFIG), "config_error");
  EXPECT_STREQ(sasakian_status_name(static_cast<sasakian_status>(999)), "unknown");
}

TEST(CApi, NullArguments) {
  sasakian_config* cfg = nullptr;
  EXPECT_EQ(sasakian_config_parse(nullptr, &cfg), SASAKIAN_E_INVALID_ARGUMENT);
  EXPECT_NE(std::string(sasakian_last_error()).find("yaml"), std::string::npos);
  EXPECT_EQ(sasakian_config_parse(kPlane, nullptr), SASAKIAN_E_INVALID_ARGUMENT);
  EXPECT_EQ(sasakian_run(nullptr, nullptr), SASAKIAN_E_INVALID_ARGUMENT);
  EXPECT_EQ(sasakian_report_json(nullptr, 0), nullptr);
  EXPECT_EQ(sasakian_report_exit_code(nullptr), 1);
  sasakian_config_free(nullptr);
  sasakian_report_free(nullptr);
}

TEST(CApi, ConfigErrorsCarryMessages) {
  sasakian_config* cfg = nullptr;
  EXPECT_EQ(sasakian_config_parse("ambient: {n: 1}\nembedding: {map: [\"s1\"]}\n", &cfg), SASAKIAN_E_CONFIG);
  EXPECT_EQ(cfg, nullptr);
  EXPECT_NE(std::string(sasakian_last_error()).find("embedding.map"), std::string::npos);
  EXPECT_EQ(sasakian_config_parse("ambient: {n: 1}\nembedding: {map: [\"s1\", \"s2\", \"(s1\"]}\n", &cfg),
            SASAKIAN_E_PARSE);
  EXPECT_EQ(sasakian_config_load("/nonexistent.yaml", &cfg), SASAKIAN_E_CONFIG);
}

TEST(CApi, RunSelectedChecks) {
  sasakian_config* cfg = nullptr;
  ASSERT_EQ(sasakian_config_parse(kPlane, &cfg), SASAKIAN_OK) << sasakian_last_error();
  const char* bad[] = {"nope"};
  EXPECT_EQ(sasakian_config_set_checks(cfg, bad, 1), SASAKIAN_E_CONFIG);
  const char* names[] = {"axioms", "two_form"};
  ASSERT_EQ(sasakian_config_set_checks(cfg, names, 2), SASAKIAN_OK);
  EXPECT_EQ(sasakian_config_set_seed(cfg, 42), SASAKIAN_OK);

  sasakian_report* rep = nullptr;
  ASSERT_EQ(sasakian_run(cfg, &rep), SASAKIAN_OK) << sasakian_last_error();
  sasakian_config_free(cfg);
  EXPECT_EQ(sasakian_report_exit_code(rep), 0);
  EXPECT_GT(sasakian_report_check_count(rep), 0u);

  const auto doc = nlohmann::json::parse(sasakian_report_json(rep, 0));
  EXPECT_EQ(doc["meta"]["seed"], 42);
  EXPECT_FALSE(doc["meta"].contains("timestamp"));
  EXPECT_EQ(doc["checks"].size(), sasakian_report_check_count(rep));
  EXPECT_EQ(doc["summary"]["exit_code"], 0);
  EXPECT_NE(std::string(sasakian_report_text(rep)).find("exit 0"), std::string::npos);
  sasakian_report_free(rep);
}

TEST(CApi, FullRunReportsRefutations) {
  sasakian_config* cfg = nullptr;
  ASSERT_EQ(sasakian_config_parse(kPlane, &cfg), SASAKIAN_OK);
  sasakian_report* rep = nullptr;
  ASSERT_EQ(sasakian_run(cfg, &rep), SASAKIAN_OK) << sasakian_last_error();
  EXPECT_EQ(sasakian_report_exit_code(rep), 2);
  sasakian_report_free(rep);
  sasakian_config_free(cfg);
}

}  // namespace
