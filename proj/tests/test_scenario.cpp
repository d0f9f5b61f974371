#include <cstdlib>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "qst/errors.hpp"
#include "qst/scenario.hpp"

using qst::ScenarioConfig;

namespace {

constexpr double kPi = std::numbers::pi;

std::string expect_validation_message(const std::string& text) {
  try {
    qst::parse_config(text);
  } catch (const qst::ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("minimal config gets the documented defaults") {
  const auto config = qst::parse_config(
      R"({"mode": "closed", "M": 2, "t_max": 3.2, "num_points": 321})");
  CHECK(config.mode == ScenarioConfig::Mode::closed);
  CHECK(config.chain.sites == 2);
  CHECK(config.chain.p == 0.5);
  CHECK(config.chain.omega0 == 1.0);
  CHECK(config.reservoir.gamma0 == 1.0);
  CHECK(config.reservoir.spectral_width == 50.0);
  CHECK(config.num_chains == 1);
  CHECK(config.dt == 1e-4);
  CHECK(config.kernel_variant == qst::KernelVariant::eq33_consistent);
  CHECK(config.output.empty());
}

TEST_CASE("validation failures name the offending field") {
  CHECK(expect_validation_message(
            R"({"mode": "closed", "M": 1, "t_max": 1.0, "num_points": 4})") ==
        "M must be >= 2");
  CHECK(expect_validation_message(
            R"({"mode": "open", "M": 2, "N": 0, "t_max": 1.0, "num_points": 4})") ==
        "N must be >= 1");
  CHECK(expect_validation_message(
            R"({"mode": "open", "M": 2, "t_max": 1.0, "num_points": 1})") ==
        "num_points must be >= 2");
  CHECK(expect_validation_message(
            R"({"mode": "open", "M": 2, "t_max": 1.0, "num_points": 4, "typo": 1})")
            .find("unknown config key") != std::string::npos);
  CHECK(expect_validation_message(
            R"({"mode": "open", "M": 2, "N": [1, 2], "t_max": 1.0, "num_points": 4})")
            .find("sweep") != std::string::npos);
}

TEST_CASE("parse errors carry the line number") {
  try {
    qst::parse_config("{\n  \"mode\": \"closed\",\n  M: 2\n}");
    CHECK(false);
  } catch (const qst::ValidationError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("protected-transfer config is accepted") {
  const auto config = qst::parse_config(
      R"({"mode": "open", "M": 2, "N": 50, "lambda": 50,
          "t_max": 4.0, "num_points": 801})");
  CHECK(config.num_chains == 50);
  CHECK(config.reservoir.spectral_width == 50.0);
}

TEST_CASE("serialize/parse round trip") {
  for (const char* text :
       {R"({"mode": "closed", "M": 2, "t_max": 3.2, "num_points": 321})",
        R"({"mode": "compare", "M": 3, "N": 45, "t_max": 10.0,
            "num_points": 101, "dt": 1e-4, "kernel_variant": "residue",
            "output": "run.csv"})",
        R"({"mode": "sweep", "M": 2, "N": [1, 5, 10, 25, 50],
            "t_max": 3.2, "num_points": 65})"}) {
    const auto config = qst::parse_config(text);
    const std::string canonical = qst::serialize_config(config);
    CHECK(qst::serialize_config(qst::parse_config(canonical)) == canonical);
  }
}

TEST_CASE("overrides rewrite the document before validation") {
  const std::string base =
      R"({"mode": "open", "M": 2, "t_max": 1.0, "num_points": 11})";
  const std::string text = qst::apply_overrides(
      base, {"M=4", "lambda=25.5", "kernel_variant=residue", "N=7"});
  const auto config = qst::parse_config(text);
  CHECK(config.chain.sites == 4);
  CHECK(config.reservoir.spectral_width == 25.5);
  CHECK(config.kernel_variant == qst::KernelVariant::residue);
  CHECK(config.num_chains == 7);
  CHECK_THROWS_AS(qst::apply_overrides(base, {"justakey"}),
                  qst::ValidationError);
}

TEST_CASE("closed scenario hits the transfer peak exactly") {
  // t_max = pi, so the 5-point grid holds pi/2 to the last bit
  auto config = qst::parse_config(
      R"({"mode": "closed", "M": 4, "num_points": 5,
          "t_max": 3.141592653589793})");
  CHECK(config.t_max == kPi);
  const auto result = qst::run_scenario(config);
  REQUIRE(result.table.headers ==
          std::vector<std::string>{"t", "fidelity", "sin_law"});
  CHECK(result.table.columns[1](2) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(result.table.columns[2](2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("compare scenario reports a small deviation") {
  const auto config = qst::parse_config(
      R"({"mode": "compare", "M": 2, "N": 1, "t_max": 5.0,
          "num_points": 51, "dt": 1e-4})");
  const auto result = qst::run_scenario(config);
  REQUIRE(result.table.headers ==
          std::vector<std::string>{"t", "fidelity_analytic", "fidelity_numeric",
                                   "abs_deviation"});
  const auto summary = nlohmann::json::parse(result.summary_json);
  CHECK(summary["max_abs_deviation"].get<double>() <= 1e-6);
  CHECK(result.table.columns[3].maxCoeff() <= 1e-6);
}

TEST_CASE("oracle scenario lands on the requested grid") {
  const auto config = qst::parse_config(
      R"({"mode": "oracle", "M": 2, "N": 1, "t_max": 1.0,
          "num_points": 11, "dt": 1e-4})");
  const auto result = qst::run_scenario(config);
  REQUIRE(result.table.rows() == 11);
  CHECK(result.table.columns[0](10) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sweep peaks grow with N") {
  auto config = qst::parse_config(
      R"({"mode": "sweep", "M": 2, "N": [1, 5, 10, 25, 50],
          "t_max": 3.2, "num_points": 1601})");
  const auto result = qst::run_scenario(config);
  REQUIRE(result.table.headers.size() == 6);
  CHECK(result.table.headers[1] == "fidelity_N1");
  CHECK(result.table.headers[5] == "fidelity_N50");
  const auto summary = nlohmann::json::parse(result.summary_json);
  double previous = 0.0;
  for (const auto& peak : summary["peaks"]) {
    const double value = peak["peak_fidelity"].get<double>();
    CHECK(value >= previous);
    previous = value;
  }
}

TEST_CASE("sweep output does not depend on the thread cap") {
  auto config = qst::parse_config(
      R"({"mode": "sweep", "M": 2, "N": [1, 5, 10],
          "t_max": 3.2, "num_points": 257})");
  setenv("QST_THREADS", "1", 1);
  const auto serial = qst::run_scenario(config);
  setenv("QST_THREADS", "3", 1);
  const auto threaded = qst::run_scenario(config);
  unsetenv("QST_THREADS");
  std::ostringstream a, b;
  qst::emit_csv(serial.table, a);
  qst::emit_csv(threaded.table, b);
  CHECK(a.str() == b.str());
}

TEST_CASE("csv emission is deterministic and 12-digit") {
  const auto config = qst::parse_config(
      R"({"mode": "closed", "M": 3, "t_max": 2.0, "num_points": 7})");
  const auto result = qst::run_scenario(config);
  std::ostringstream first, second;
  qst::emit_csv(result.table, first);
  qst::emit_csv(result.table, second);
  CHECK(first.str() == second.str());
  CHECK(first.str().back() == '\n');
  CHECK(first.str().find("0.333333333333") != std::string::npos);  // t = 1/3

  qst::ResultTable empty;
  std::ostringstream sink;
  CHECK_THROWS_AS(qst::emit_csv(empty, sink), qst::ValidationError);
  CHECK_THROWS_AS(qst::emit_csv(result.table, "/nonexistent-dir/out.csv"),
                  qst::IoError);
}

TEST_CASE("summary sidecar path") {
  CHECK(qst::summary_path_for("runs/fig2.csv") == "runs/fig2.summary.json");
  CHECK(qst::summary_path_for("plain") == "plain.summary.json");
}
