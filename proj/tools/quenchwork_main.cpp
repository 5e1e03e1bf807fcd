#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "quenchwork/chain.hpp"
#include "quenchwork/csv.hpp"
#include "quenchwork/distribution.hpp"
#include "quenchwork/experiment.hpp"
#include "quenchwork/toeplitz.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qwork;

namespace {

json load_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw config_error(path.string() + ": " + e.what());
  }
  return j;
}

std::vector<TraceVector> load_traces(const fs::path& path) {
  const CsvTable table = read_csv(path);
  const auto idx = table.col("sample_index");
  const auto power = table.col("r");
  const auto re = table.col("re_T");
  const auto im = table.col("im_T");
  std::vector<TraceVector> traces;
  for (std::size_t row = 0; row < idx.size(); ++row) {
    const auto i = static_cast<std::size_t>(idx[row]);
    const auto r = static_cast<std::size_t>(power[row]);
    if (r < 1) throw config_error(path.string() + ": r column must be >= 1");
    if (i >= traces.size()) traces.resize(i + 1);
    if (traces[i].values.size() < r) traces[i].values.resize(r);
    traces[i].values[r - 1] = cplx(re[row], im[row]);
  }
  return traces;
}

CharfnTable load_charfn(const fs::path& path) {
  const CsvTable table = read_csv(path);
  CharfnTable chi;
  chi.u = table.col("u");
  const auto re = table.col("re_chi");
  const auto im = table.col("im_chi");
  const auto re_log = table.col("re_log_chi");
  const auto im_log = table.col("im_log_chi");
  for (std::size_t i = 0; i < chi.u.size(); ++i) {
    chi.chi.emplace_back(re[i], im[i]);
    chi.log_chi.emplace_back(re_log[i], im_log[i]);
  }
  chi.singular.assign(chi.u.size(), false);

  fs::path meta = path;
  meta += ".meta.json";
  if (fs::exists(meta)) {
    const json j = load_json(meta);
    if (j.contains("e0_shift")) chi.e0_shift = j.at("e0_shift").get<double>();
  }
  return chi;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Work statistics of sudden quenches as trace statistics of "
               "Haar unitaries: sampling, Toeplitz determinants, Fourier "
               "inversion, and statistical diagnostics"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 1;
  std::string out_dir = ".";

  // Global options shared by the subcommands.
  app.add_option("--threads", threads, "worker pool size")
      ->capture_default_str();
  app.add_option("--out-dir", out_dir, "output directory for run/figure")
      ->capture_default_str();
  auto* seed_opt =
      app.add_option("--seed", seed, "override the experiment seed");

  // --- sample ---
  auto* sample = app.add_subcommand("sample", "draw trace vectors");
  SampleConfig sample_cfg;
  std::string sample_mode = "haar";
  std::string sample_out = "traces.csv";
  sample->add_option("--dim", sample_cfg.matrix_dim, "matrix dimension N")
      ->required();
  sample->add_option("--max-power", sample_cfg.max_power, "max trace power m")
      ->required();
  sample->add_option("--n-samples", sample_cfg.n_samples, "number of samples")
      ->required();
  sample->add_option("--mode", sample_mode, "haar | surrogate")
      ->capture_default_str();
  sample->add_option("--out", sample_out, "output CSV")->capture_default_str();

  // --- work ---
  auto* work = app.add_subcommand("work", "work samples from traces");
  std::string work_coeffs, work_traces, work_out = "work.csv";
  work->add_option("--coeffs", work_coeffs, "coefficients JSON")->required();
  work->add_option("--traces", work_traces, "traces CSV")->required();
  work->add_option("--out", work_out, "output CSV")->capture_default_str();

  // --- charfn ---
  auto* charfn = app.add_subcommand(
      "charfn", "Toeplitz characteristic function on a u grid");
  std::string charfn_coeffs, charfn_out = "charfn.csv";
  int charfn_dim = 80, charfn_points = 1025;
  double charfn_e0 = 0.0, charfn_umin = -8.0, charfn_umax = 8.0;
  charfn->add_option("--coeffs", charfn_coeffs, "coefficients JSON")->required();
  charfn->add_option("--dim", charfn_dim, "Toeplitz dimension N")
      ->capture_default_str();
  charfn->add_option("--e0", charfn_e0, "initial energy E0")
      ->capture_default_str();
  charfn->add_option("--u-min", charfn_umin, "")->capture_default_str();
  charfn->add_option("--u-max", charfn_umax, "")->capture_default_str();
  charfn->add_option("--u-points", charfn_points, "")->capture_default_str();
  charfn->add_option("--out", charfn_out, "output CSV")->capture_default_str();

  // --- invert ---
  auto* invert = app.add_subcommand("invert", "Fourier inversion to P(w)");
  std::string invert_in, invert_out = "density.csv";
  int invert_points = 513;
  double invert_span = 10.0;
  invert->add_option("--charfn", invert_in, "charfn CSV")->required();
  invert->add_option("--w-points", invert_points, "")->capture_default_str();
  invert->add_option("--w-span", invert_span, "half-width of the w grid")
      ->capture_default_str();
  invert->add_option("--out", invert_out, "output CSV")->capture_default_str();

  // --- xy ---
  auto* xy = app.add_subcommand("xy", "XY quench Loschmidt amplitude");
  QuenchXY quench;
  int xy_points = 201;
  double xy_tmin = 0.0, xy_tmax = 10.0, xy_umin = -8.0, xy_umax = 8.0;
  bool xy_use_u = false;
  std::string xy_out = "xy.csv", xy_factors;
  xy->add_option("--gi", quench.gamma_i, "initial anisotropy")->required();
  xy->add_option("--hi", quench.h_i, "initial field")->required();
  xy->add_option("--gf", quench.gamma_f, "final anisotropy")->required();
  xy->add_option("--hf", quench.h_f, "final field")->required();
  xy->add_option("--sites", quench.sites, "even site count L")->required();
  xy->add_option("--t-min", xy_tmin, "")->capture_default_str();
  xy->add_option("--t-max", xy_tmax, "")->capture_default_str();
  xy->add_flag("--u-grid", xy_use_u, "emit chi_W(u) instead of G(t)");
  xy->add_option("--u-min", xy_umin, "")->capture_default_str();
  xy->add_option("--u-max", xy_umax, "")->capture_default_str();
  xy->add_option("--points", xy_points, "grid points")->capture_default_str();
  xy->add_option("--out", xy_out, "output CSV")->capture_default_str();
  xy->add_option("--dump-factors", xy_factors,
                 "debug CSV of per-momentum factors");

  // --- diagnose ---
  auto* diagnose = app.add_subcommand("diagnose", "statistical panels");
  std::string diag_in, diag_report = "report.json", diag_panels = "panels";
  std::string diag_traces;
  diagnose->add_option("--input", diag_in, "work CSV")->required();
  diagnose->add_option("--report", diag_report, "summary JSON")
      ->capture_default_str();
  diagnose->add_option("--panels", diag_panels, "panel output directory")
      ->capture_default_str();
  diagnose->add_option("--traces", diag_traces,
                       "traces CSV enabling scatter panels");

  // --- figure ---
  auto* figure = app.add_subcommand("figure", "reproduce a figure data set");
  std::string figure_id;
  figure->add_option("--id", figure_id, "fig1..fig5")->required();

  // --- run ---
  auto* run = app.add_subcommand("run", "run an experiment config");
  std::string run_config;
  run->add_option("--config", run_config, "experiment JSON")->required();

  app.parse(argc, argv);
  seed_given = seed_opt->count() > 0;

  if (*sample) {
    sample_cfg.mode = parse_sample_mode(sample_mode);
    if (seed_given) sample_cfg.seed = seed;
    const auto traces = sample_trace_batch(sample_cfg, threads);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < traces.size(); ++i)
      for (std::size_t r = 0; r < traces[i].values.size(); ++r)
        rows.push_back({static_cast<double>(i), static_cast<double>(r + 1),
                        traces[i].values[r].real(),
                        traces[i].values[r].imag()});
    write_with_sidecar(sample_out, {"sample_index", "r", "re_T", "im_T"}, rows,
                       {sample_cfg.seed, "mode=" + to_string(sample_cfg.mode)});
    std::cout << "wrote " << sample_out << " (" << traces.size()
              << " samples)\n";
  } else if (*work) {
    const ModeCoefficients coeffs = coefficients_from_json(load_json(work_coeffs));
    const auto traces = load_traces(work_traces);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < traces.size(); ++i)
      rows.push_back({static_cast<double>(i), work_value(traces[i], coeffs)});
    write_with_sidecar(work_out, {"sample_index", "w"}, rows,
                       {seed, "theoretical_variance=" +
                                  format_double(theoretical_variance(coeffs))});
    std::cout << "wrote " << work_out << " (" << rows.size() << " samples)\n";
  } else if (*charfn) {
    const ModeCoefficients coeffs =
        coefficients_from_json(load_json(charfn_coeffs));
    const CharfnTable table = charfn_toeplitz(
        coeffs, charfn_e0,
        GridSpec{charfn_umin, charfn_umax, charfn_points}.make(), charfn_dim,
        threads);
    write_charfn_csv(charfn_out, table, {seed, ""});
    std::cout << "wrote " << charfn_out << '\n';
  } else if (*invert) {
    const CharfnTable table = load_charfn(invert_in);
    const DensityTable density =
        invert_charfn(table, invert_points, invert_span, threads);
    write_density_csv(invert_out, density, {seed, ""});
    if (density.decay_warning)
      std::cerr << "warning: chi has not decayed below 1e-8 at the grid ends\n";
    std::cout << "wrote " << invert_out
              << " (norm_defect=" << format_double(density.norm_defect)
              << ")\n";
  } else if (*xy) {
    quench.validate();
    const double e0 = xy_initial_energy(quench);
    SidecarInfo info{seed, "gamma_i=" + format_double(quench.gamma_i) +
                               " h_i=" + format_double(quench.h_i) +
                               " gamma_f=" + format_double(quench.gamma_f) +
                               " h_f=" + format_double(quench.h_f) +
                               " L=" + std::to_string(quench.sites)};
    info.extras["initial_energy"] = e0;
    if (xy_use_u) {
      const CharfnTable table = charfn_xy_product(
          quench, GridSpec{xy_umin, xy_umax, xy_points}.make());
      write_charfn_csv(xy_out, table, info);
    } else {
      const auto ts = GridSpec{xy_tmin, xy_tmax, xy_points}.make();
      std::vector<std::vector<double>> rows;
      for (double t : ts) {
        const cplx g = loschmidt_xy_product(quench, t);
        rows.push_back({t, g.real(), g.imag(), std::abs(g)});
      }
      write_with_sidecar(xy_out, {"t", "re_G", "im_G", "abs_G"}, rows, info);
    }
    if (!xy_factors.empty()) {
      const auto ts = GridSpec{xy_tmin, xy_tmax, xy_points}.make();
      std::vector<std::vector<double>> rows;
      for (double t : ts)
        for (double k : quench.sector_momenta()) {
          const cplx f = loschmidt_xy_factor(quench, t, k);
          rows.push_back({t, k, f.real(), f.imag()});
        }
      write_with_sidecar(xy_factors, {"t", "k", "re_factor", "im_factor"},
                         rows, info);
    }
    std::cout << "wrote " << xy_out << " (E0=" << format_double(e0) << ")\n";
  } else if (*diagnose) {
    const CsvTable table = read_csv(diag_in);
    const std::vector<double> w = table.col("w");
    fs::create_directories(diag_panels);
    const fs::path panels(diag_panels);
    SidecarInfo info{seed, "input=" + diag_in};

    const MomentReport mom = moment_report(w);
    write_histogram_panel(panels / "hist.csv", fd_histogram(w), info);
    write_qq_panels(panels / "qq.csv", panels / "qq_detrended.csv",
                    qq_normal(w, mom.mean, std::sqrt(mom.variance)), info);
    write_moments_panel(panels / "moments.csv", mom, info);

    json report;
    report["version"] = kVersionTag;
    report["n"] = mom.n;
    report["moments"] = {{"mean", mom.mean},
                         {"variance", mom.variance},
                         {"skewness", mom.skewness},
                         {"excess_kurtosis", mom.excess_kurtosis},
                         {"se_variance", mom.se_variance},
                         {"se_kurtosis", mom.se_kurtosis},
                         {"kurtosis_bias_note", mom.kurtosis_bias_note}};

    if (!diag_traces.empty()) {
      const auto traces = load_traces(diag_traces);
      const std::size_t m = traces.empty() ? 0 : traces.front().values.size();
      for (int s = 2; s <= static_cast<int>(m) && s <= 3; ++s) {
        std::vector<double> xs, ys;
        for (const auto& t : traces) {
          xs.push_back(t.values[0].real());
          ys.push_back(t.values[static_cast<std::size_t>(s - 1)].real());
        }
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < xs.size(); ++i)
          rows.push_back({xs[i], ys[i]});
        const std::string name = "scatter_1_" + std::to_string(s) + ".csv";
        write_with_sidecar(panels / name,
                           {"re_T1", "re_T" + std::to_string(s)}, rows, info);
        const CorrelationEstimate corr = scatter_correlation(xs, ys);
        report["scatter_1_" + std::to_string(s)] = {
            {"correlation", corr.value}, {"se", corr.se}};
      }
    }
    std::ofstream rep(diag_report);
    rep << report.dump(2) << '\n';
    std::cout << "wrote " << diag_report << " and panels under " << diag_panels
              << '\n';
  } else if (*figure) {
    FigureRecipe recipe = FigureRecipe::standard(parse_figure_id(figure_id));
    if (seed_given) recipe.seed = seed;
    const fs::path dir = fs::path(out_dir) / figure_id;
    reproduce_figure(recipe, dir, threads);
    std::cout << "wrote figure data under " << dir << '\n';
  } else if (*run) {
    ExperimentConfig config = ExperimentConfig::from_json(load_json(run_config));
    if (seed_given) config.sampling.seed = seed;
    if (out_dir != ".") config.out_dir = out_dir;
    const Manifest manifest = run_experiment(config, threads);
    std::cout << "wrote " << manifest.file_hashes.size() + 1 << " files under "
              << config.out_dir << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const CLI::ParseError& e) {
    return CLI::App{}.exit(e);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
