#include <doctest.h>

#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "quenchwork/csv.hpp"
#include "quenchwork/experiment.hpp"

using namespace qwork;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("qwork_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

json minimal_config(const fs::path& out) {
  return json{{"name", "minimal"},
              {"version", 1},
              {"coefficients", {{"a", {1.0}}}},
              {"sampling",
               {{"matrix_dim", 4},
                {"max_power", 1},
                {"n_samples", 10},
                {"seed", 5},
                {"mode", "surrogate"}}},
              {"out_dir", out.string()}};
}

}  // namespace

TEST_CASE("format_double round-trips exactly") {
  for (double x : {1.0, -0.1, 5.46, 1.0 / 3.0, 1e-300, 123456.789012345678}) {
    const std::string s = format_double(x);
    CHECK(std::stod(s) == x);
  }
}

TEST_CASE("csv round trip") {
  const fs::path dir = temp_dir("csv");
  write_csv(dir / "t.csv", {"a", "b"}, {{1.0, 2.5}, {-3.0, 1.0 / 7.0}});
  const CsvTable table = read_csv(dir / "t.csv");
  CHECK(table.header == std::vector<std::string>{"a", "b"});
  CHECK(table.rows[1][1] == 1.0 / 7.0);
  CHECK(table.col("b")[0] == 2.5);
  CHECK_THROWS_AS(table.col("missing"), config_error);
}

TEST_CASE("coefficients json: plain and alpha forms") {
  const ModeCoefficients plain =
      coefficients_from_json(json{{"eps0", 0.5}, {"a", {1.0, 2.0}}});
  CHECK(plain.eps0 == 0.5);
  CHECK(plain.b == std::vector<double>{0.0, 0.0});

  const ModeCoefficients alpha =
      coefficients_from_json(json{{"alpha_re", {1.0, 0.7, 0.5}}});
  CHECK(alpha.from_complex_alpha);
  CHECK(alpha.a == std::vector<double>{2.0, 1.4, 1.0});
  CHECK(theoretical_variance(alpha) == doctest::Approx(5.46));
}

TEST_CASE("experiment config validation reports field paths") {
  json bad = minimal_config(temp_dir("cfg"));
  bad["xx_chain"] = {{"hoppings", {1.0}}};
  CHECK_THROWS_WITH_AS(
      ExperimentConfig::from_json(bad),
      "config: exactly one of coefficients/xx_chain/quench_xy required, got 2",
      config_error);

  json bad_version = minimal_config(temp_dir("cfg2"));
  bad_version["version"] = 99;
  CHECK_THROWS_AS(ExperimentConfig::from_json(bad_version), config_error);

  json bad_field = minimal_config(temp_dir("cfg3"));
  bad_field["sampling"]["n_samples"] = "many";
  CHECK_THROWS_WITH_AS(ExperimentConfig::from_json(bad_field),
                       "config.sampling.n_samples: wrong type", config_error);
}

TEST_CASE("minimal experiment produces work.csv, report.json and manifest") {
  const fs::path dir = temp_dir("minimal");
  const ExperimentConfig config =
      ExperimentConfig::from_json(minimal_config(dir));
  const Manifest manifest = run_experiment(config);
  CHECK(manifest.file_hashes.count("work.csv") == 1);
  CHECK(manifest.file_hashes.count("report.json") == 1);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "work.csv.meta.json"));
  const json report = json::parse(std::ifstream(dir / "report.json"));
  CHECK(report.at("theory").at("variance").get<double>() ==
        doctest::Approx(0.5));
}

TEST_CASE("experiment reruns are byte-identical") {
  const fs::path dir_a = temp_dir("det_a");
  const fs::path dir_b = temp_dir("det_b");
  json cfg = minimal_config(dir_a);
  cfg["sampling"]["n_samples"] = 200;
  cfg["sampling"]["mode"] = "haar";
  const Manifest a = run_experiment(ExperimentConfig::from_json(cfg));
  cfg["out_dir"] = dir_b.string();
  const Manifest b = run_experiment(ExperimentConfig::from_json(cfg));
  REQUIRE(a.file_hashes.size() == b.file_hashes.size());
  for (const auto& [file, hash] : a.file_hashes) {
    CAPTURE(file);
    CHECK(b.file_hashes.at(file) == hash);
  }
}

TEST_CASE("experiment output independent of worker count") {
  const fs::path dir_a = temp_dir("thr_a");
  const fs::path dir_b = temp_dir("thr_b");
  json cfg = minimal_config(dir_a);
  cfg["sampling"]["n_samples"] = 150;
  cfg["sampling"]["mode"] = "haar";
  const Manifest a = run_experiment(ExperimentConfig::from_json(cfg), 1);
  cfg["out_dir"] = dir_b.string();
  const Manifest b = run_experiment(ExperimentConfig::from_json(cfg), 4);
  for (const auto& [file, hash] : a.file_hashes) {
    CAPTURE(file);
    CHECK(b.file_hashes.at(file) == hash);
  }
}

TEST_CASE("full experiment emits charfn and density tables that agree") {
  const fs::path dir = temp_dir("full");
  json cfg = minimal_config(dir);
  cfg["name"] = "three_mode";
  cfg["coefficients"] = {{"alpha_re", {1.0, 0.7, 0.5}}};
  cfg["sampling"] = {{"matrix_dim", 24},
                     {"max_power", 3},
                     {"n_samples", 400},
                     {"seed", 11},
                     {"mode", "haar"}};
  const Manifest manifest = run_experiment(ExperimentConfig::from_json(cfg));
  for (const char* file :
       {"traces.csv", "work.csv", "report.json", "charfn.csv", "density.csv",
        "gaussian.csv", "mc_density.csv"})
    CHECK(manifest.file_hashes.count(file) == 1);

  // the inverted density and the gaussian reference are close at N=24
  const CsvTable density = read_csv(dir / "density.csv");
  const CsvTable gauss = read_csv(dir / "gaussian.csv");
  const auto p_inv = density.col("p");
  const auto p_ref = gauss.col("p");
  REQUIRE(p_inv.size() == p_ref.size());
  double sup = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < p_inv.size(); ++i) {
    sup = std::max(sup, std::abs(p_inv[i] - p_ref[i]));
    peak = std::max(peak, p_ref[i]);
  }
  CHECK(sup <= 0.02 * peak);
}

TEST_CASE("xx chain source resolves to doubled hoppings") {
  json cfg = minimal_config(temp_dir("xx"));
  cfg.erase("coefficients");
  cfg["xx_chain"] = {{"hoppings", {0.5, 0.35, 0.25}}, {"mu", 0.0}};
  const ExperimentConfig config = ExperimentConfig::from_json(cfg);
  const ModeCoefficients c = config.resolve_coefficients();
  CHECK(c.a == std::vector<double>{1.0, 0.7, 0.5});
}

TEST_CASE("fig1 recipe writes six panel CSVs") {
  const fs::path dir = temp_dir("fig1");
  reproduce_figure(FigureRecipe::standard(FigureId::fig1), dir);
  for (const char* file :
       {"3mode_hist.csv", "3mode_qq.csv", "3mode_qq_detrended.csv",
        "5mode_even_hist.csv", "5mode_even_qq.csv",
        "5mode_even_qq_detrended.csv", "summary.json", "manifest.json"})
    CHECK(fs::exists(dir / file));

  const json summary = json::parse(std::ifstream(dir / "summary.json"));
  const double var = summary.at("3mode").at("variance").get<double>();
  const double se = summary.at("3mode").at("se_variance").get<double>();
  CHECK(std::abs(var - 5.46) <= 3.0 * se);
}

TEST_CASE("fig5 recipe writes scatter panels with ellipse sidecars") {
  const fs::path dir = temp_dir("fig5");
  reproduce_figure(FigureRecipe::standard(FigureId::fig5), dir);
  for (const char* file :
       {"scatter_1_2.csv", "scatter_1_2_std.csv", "scatter_1_3.csv",
        "scatter_1_3_std.csv", "ellipse_1_2.json", "ellipse_1_3.json"})
    CHECK(fs::exists(dir / file));
  const json ellipse = json::parse(std::ifstream(dir / "ellipse_1_2.json"));
  CHECK(ellipse.at("chi2_quantile").get<double>() ==
        doctest::Approx(5.991464547107982));
  const double coverage = ellipse.at("coverage_measured").get<double>();
  CHECK(std::abs(coverage - 0.95) <= 3.0 * std::sqrt(0.95 * 0.05 / 500.0));
}

TEST_CASE("figure ids parse and reject unknown names") {
  CHECK(parse_figure_id("fig3") == FigureId::fig3);
  CHECK_THROWS_AS(parse_figure_id("fig9"), config_error);
}
