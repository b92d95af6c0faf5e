#include <doctest.h>

#include "vinolab/suites.hpp"

using namespace vinolab;

TEST_CASE("core suite passes on the default seed") {
  ExperimentConfig config;
  config.seed = 42;
  SuiteResult result = run_suite("core", config);
  CHECK(!result.failed());
  CHECK(result.exit_status() == 0);
  CHECK(result.checks.size() >= 8);
  CHECK_THROWS_AS(run_suite("nope", config), ConfigError);
}

TEST_CASE("suite exit status flips only on failing checks") {
  SuiteResult result;
  result.suite = "synthetic";
  result.checks.push_back({"a", "pass", ""});
  result.checks.push_back({"b", "recorded", "just a note"});
  CHECK(result.exit_status() == 0);
  result.checks.push_back({"c", "fail", "boom"});
  CHECK(result.exit_status() == 1);
}

TEST_CASE("reports are byte-stable") {
  ExperimentConfig config;
  config.seed = 7;
  Json a = suite_to_json(run_suite("oracle", config));
  Json b = suite_to_json(run_suite("oracle", config));
  CHECK(dump_canonical(a) == dump_canonical(b));

  Json mixed{{"b", 2}, {"a", Json{{"y", 0.1}, {"x", "s"}}}, {"c", Json::array({1.5, "t"})}};
  CHECK(dump_canonical(mixed) == dump_canonical(mixed));
  // keys come out sorted regardless of insertion order
  Json redone{{"c", Json::array({1.5, "t"})}, {"a", Json{{"x", "s"}, {"y", 0.1}}}, {"b", 2}};
  CHECK(dump_canonical(mixed) == dump_canonical(redone));
}

TEST_CASE("float formatting keeps 12 significant digits") {
  CHECK(format_float(0.1 + 0.2) == "0.3");
  CHECK(format_float(3.14159265358979) == "3.14159265359");
  Json j = 3.14159265358979;
  CHECK(dump_canonical(j) == "3.14159265359\n");
}

TEST_CASE("sweep CSV uses the fixed schema") {
  auto rows = interval_sweep({8}, 3, 2);
  std::string csv = sweep_csv(rows);
  CHECK(csv.substr(0, csv.find('\n')) == "N,s,k,J,alpha_num,alpha_den,rep_sup");
  REQUIRE(rows.size() == 1);
  // oracle check: J_{3,2}({1..8}) by literal enumeration
  GroundSet eight = generate(FamilySpec{Family::Arithmetic, 1, 1, 2, 0, 0, 8, 0, {}});
  CHECK(rows[0].j == vinogradov_count_naive(eight, 3, 2));
  CHECK(csv.find(to_decimal(rows[0].j)) != std::string::npos);
}

TEST_CASE("emit_report writes byte-identical files") {
  Json j{{"value", 1.25}, {"name", "x"}};
  std::string path1 = "harness_report_a.json";
  std::string path2 = "harness_report_b.json";
  emit_report(j, path1);
  emit_report(j, path2);
  CHECK(read_text_file(path1) == read_text_file(path2));
  std::remove(path1.c_str());
  std::remove(path2.c_str());
}
