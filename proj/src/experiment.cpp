#include "quenchwork/experiment.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "quenchwork/csv.hpp"
#include "quenchwork/distribution.hpp"
#include "quenchwork/toeplitz.hpp"

namespace qwork {

using nlohmann::json;

std::vector<double> GridSpec::make() const {
  if (points < 2) throw config_error("grid: points must be >= 2");
  if (!(max > min)) throw config_error("grid: max must exceed min");
  std::vector<double> g;
  g.reserve(static_cast<std::size_t>(points));
  const double step = (max - min) / (points - 1);
  for (int i = 0; i < points; ++i) g.push_back(min + i * step);
  return g;
}

namespace {

template <class T>
T field_or(const json& j, const std::string& key, const T& fallback,
           const std::string& path) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw config_error(path + "." + key + ": wrong type");
  }
}

template <class T>
T required(const json& j, const std::string& key, const std::string& path) {
  if (!j.contains(key)) throw config_error(path + "." + key + ": missing");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw config_error(path + "." + key + ": wrong type");
  }
}

SampleConfig sampling_from_json(const json& j, const std::string& path) {
  SampleConfig cfg;
  cfg.matrix_dim = field_or<int>(j, "matrix_dim", 1, path);
  cfg.max_power = field_or<int>(j, "max_power", 0, path);
  cfg.n_samples = field_or<int>(j, "n_samples", 1, path);
  cfg.seed = field_or<std::uint64_t>(j, "seed", 0, path);
  cfg.mode = parse_sample_mode(field_or<std::string>(j, "mode", "haar", path));
  return cfg;
}

}  // namespace

ModeCoefficients coefficients_from_json(const json& j) {
  ModeCoefficients c;
  if (j.contains("alpha_re")) {
    const auto re = required<std::vector<double>>(j, "alpha_re", "coefficients");
    std::vector<double> im =
        field_or<std::vector<double>>(j, "alpha_im", {}, "coefficients");
    im.resize(re.size(), 0.0);
    std::vector<cplx> alpha;
    alpha.reserve(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) alpha.emplace_back(re[i], im[i]);
    c = ModeCoefficients::from_alpha(alpha,
                                     field_or<double>(j, "eps0", 0.0, "coefficients"));
  } else {
    c.eps0 = field_or<double>(j, "eps0", 0.0, "coefficients");
    c.a = field_or<std::vector<double>>(j, "a", {}, "coefficients");
    c.b = field_or<std::vector<double>>(j, "b", {}, "coefficients");
    if (c.b.empty()) c.b.assign(c.a.size(), 0.0);
  }
  c.validate();
  return c;
}

json coefficients_to_json(const ModeCoefficients& coeffs) {
  return json{{"eps0", coeffs.eps0},
              {"a", coeffs.a},
              {"b", coeffs.b},
              {"from_complex_alpha", coeffs.from_complex_alpha}};
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig cfg;
  cfg.name = field_or<std::string>(j, "name", "experiment", "config");
  cfg.version = field_or<int>(j, "version", kConfigVersion, "config");
  if (j.contains("coefficients"))
    cfg.coefficients = coefficients_from_json(j.at("coefficients"));
  if (j.contains("xx_chain")) {
    XXChain chain;
    chain.hoppings = field_or<std::vector<double>>(j.at("xx_chain"), "hoppings",
                                                   {}, "config.xx_chain");
    chain.mu = field_or<double>(j.at("xx_chain"), "mu", 0.0, "config.xx_chain");
    cfg.xx_chain = chain;
  }
  if (j.contains("quench_xy")) {
    const json& q = j.at("quench_xy");
    QuenchXY quench;
    quench.gamma_i = required<double>(q, "gamma_i", "config.quench_xy");
    quench.h_i = required<double>(q, "h_i", "config.quench_xy");
    quench.gamma_f = required<double>(q, "gamma_f", "config.quench_xy");
    quench.h_f = required<double>(q, "h_f", "config.quench_xy");
    quench.sites = required<int>(q, "sites", "config.quench_xy");
    quench.validate();
    cfg.quench_xy = quench;
  }
  if (j.contains("sampling"))
    cfg.sampling = sampling_from_json(j.at("sampling"), "config.sampling");
  cfg.e0 = field_or<double>(j, "e0", 0.0, "config");
  if (j.contains("u_grid")) {
    GridSpec g;
    g.min = required<double>(j.at("u_grid"), "min", "config.u_grid");
    g.max = required<double>(j.at("u_grid"), "max", "config.u_grid");
    g.points = required<int>(j.at("u_grid"), "points", "config.u_grid");
    cfg.u_grid = g;
  }
  if (j.contains("w_grid")) {
    cfg.w_points = field_or<int>(j.at("w_grid"), "points", 513, "config.w_grid");
    cfg.w_span = field_or<double>(j.at("w_grid"), "span", 0.0, "config.w_grid");
  }
  if (j.contains("out_dir"))
    cfg.out_dir = field_or<std::string>(j, "out_dir", ".", "config");
  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  if (version != kConfigVersion)
    throw config_error("config.version: unrecognized version " +
                       std::to_string(version));
  const int sources = (coefficients ? 1 : 0) + (xx_chain ? 1 : 0) +
                      (quench_xy ? 1 : 0);
  if (sources != 1)
    throw config_error(
        "config: exactly one of coefficients/xx_chain/quench_xy required, got " +
        std::to_string(sources));
  if (sampling.matrix_dim < 1)
    throw config_error("config.sampling.matrix_dim: must be >= 1");
  if (sampling.n_samples < 1)
    throw config_error("config.sampling.n_samples: must be >= 1");
  if (w_points < 2) throw config_error("config.w_grid.points: must be >= 2");
}

ModeCoefficients ExperimentConfig::resolve_coefficients() const {
  if (coefficients) return *coefficients;
  if (xx_chain) return xx_mode_coefficients(*xx_chain);
  return effective_dispersion(*quench_xy, 4096).to_mode_coefficients();
}

namespace {

json sidecar_json(const SidecarInfo& info) {
  json meta;
  meta["version"] = kVersionTag;
  meta["seed"] = info.seed;
  meta["conventions"] = {
      {"coefficients", "eps(theta) = eps0 + sum_r (a_r cos r theta + b_r sin r theta)"},
      {"alpha_conversion", "a_r = 2 Re alpha_r, b_r = -2 Im alpha_r"},
      {"momentum_sector", "k_j = (2j-1) pi / L, j = 1..L/2"},
      {"xy_branch", "eps(k) = +2|d(k)| (BdG positive branch)"},
      {"float_format", "17 significant digits, round-trip exact"}};
  if (!info.notes.empty()) meta["notes"] = info.notes;
  for (const auto& [key, value] : info.extras) meta[key] = value;
  return meta;
}

void register_file(Manifest* manifest, const std::filesystem::path& path) {
  if (!manifest) return;
  manifest->file_hashes[path.filename().string()] = to_hex(fnv1a64_file(path));
}

void write_json_file(const std::filesystem::path& path, const json& j,
                     Manifest* manifest = nullptr) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
  out.close();
  register_file(manifest, path);
}

}  // namespace

void write_with_sidecar(const std::filesystem::path& path,
                        const std::vector<std::string>& header,
                        const std::vector<std::vector<double>>& rows,
                        const SidecarInfo& info, Manifest* manifest,
                        const std::vector<std::string>& text_column) {
  write_csv(path, header, rows, text_column);
  register_file(manifest, path);
  std::filesystem::path meta = path;
  meta += ".meta.json";
  write_json_file(meta, sidecar_json(info), manifest);
}

void write_histogram_panel(const std::filesystem::path& path,
                           const HistogramSpec& hist, const SidecarInfo& info,
                           Manifest* manifest) {
  std::vector<std::vector<double>> rows;
  rows.reserve(hist.counts.size());
  for (std::size_t i = 0; i < hist.counts.size(); ++i)
    rows.push_back({hist.edges[i] + 0.5 * hist.bin_width,
                    static_cast<double>(hist.counts[i]), hist.density[i]});
  write_with_sidecar(path, {"bin_center", "count", "density"}, rows, info,
                     manifest);
}

void write_qq_panels(const std::filesystem::path& qq_path,
                     const std::filesystem::path& detrended_path,
                     const QQData& qq, const SidecarInfo& info,
                     Manifest* manifest) {
  std::vector<std::vector<double>> rows, det_rows;
  rows.reserve(qq.theoretical_q.size());
  det_rows.reserve(qq.theoretical_q.size());
  for (std::size_t i = 0; i < qq.theoretical_q.size(); ++i) {
    rows.push_back({qq.theoretical_q[i], qq.empirical_q[i]});
    det_rows.push_back({qq.theoretical_q[i], qq.residuals[i]});
  }
  write_with_sidecar(qq_path, {"theoretical_q", "empirical_q"}, rows, info,
                     manifest);
  write_with_sidecar(detrended_path, {"theoretical_q", "residual"}, det_rows,
                     info, manifest);
}

void write_moments_panel(const std::filesystem::path& path,
                         const MomentReport& report, const SidecarInfo& info,
                         Manifest* manifest) {
  write_with_sidecar(
      path,
      {"n", "mean", "variance", "skewness", "excess_kurtosis", "se_variance",
       "se_kurtosis", "kurtosis_bias_note"},
      {{static_cast<double>(report.n), report.mean, report.variance,
        report.skewness, report.excess_kurtosis, report.se_variance,
        report.se_kurtosis, report.kurtosis_bias_note}},
      info, manifest);
}

void write_charfn_csv(const std::filesystem::path& path,
                      const CharfnTable& table, const SidecarInfo& info,
                      Manifest* manifest) {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> method_col;
  rows.reserve(table.u.size());
  const std::string tag = to_string(table.method);
  for (std::size_t i = 0; i < table.u.size(); ++i) {
    rows.push_back({table.u[i], table.chi[i].real(), table.chi[i].imag(),
                    table.log_chi[i].real(), table.log_chi[i].imag()});
    method_col.push_back(tag);
  }
  SidecarInfo extended = info;
  extended.extras["e0_shift"] = table.e0_shift;
  write_with_sidecar(path,
                     {"u", "re_chi", "im_chi", "re_log_chi", "im_log_chi",
                      "method"},
                     rows, extended, manifest, method_col);
}

void write_density_csv(const std::filesystem::path& path,
                       const DensityTable& table, const SidecarInfo& info,
                       Manifest* manifest) {
  std::vector<std::vector<double>> rows;
  std::vector<std::string> method_col;
  rows.reserve(table.w.size());
  const std::string tag = to_string(table.method);
  for (std::size_t i = 0; i < table.w.size(); ++i) {
    rows.push_back({table.w[i], table.p[i]});
    method_col.push_back(tag);
  }
  SidecarInfo extended = info;
  extended.notes += (extended.notes.empty() ? "" : "; ");
  extended.notes += "norm_defect=" + format_double(table.norm_defect) +
                    " clipped_mass=" + format_double(table.clipped_mass) +
                    (table.decay_warning ? " decay_warning=1" : "");
  write_with_sidecar(path, {"w", "p", "method"}, rows, extended, manifest,
                     method_col);
}

void write_manifest(const std::filesystem::path& out_dir, const Manifest& m) {
  json j;
  j["version"] = kVersionTag;
  j["name"] = m.name;
  j["seed"] = m.seed;
  json files = json::object();
  for (const auto& [file, hash] : m.file_hashes) files[file] = hash;
  j["files"] = files;
  write_json_file(out_dir / "manifest.json", j);
}

namespace {

void write_traces_csv(const std::filesystem::path& path,
                      const std::vector<TraceVector>& traces,
                      const SidecarInfo& info, Manifest* manifest) {
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < traces.size(); ++i)
    for (std::size_t r = 0; r < traces[i].values.size(); ++r)
      rows.push_back({static_cast<double>(i), static_cast<double>(r + 1),
                      traces[i].values[r].real(), traces[i].values[r].imag()});
  write_with_sidecar(path, {"sample_index", "r", "re_T", "im_T"}, rows, info,
                     manifest);
}

}  // namespace

Manifest run_experiment(const ExperimentConfig& config, int n_threads) {
  config.validate();
  std::filesystem::create_directories(config.out_dir);

  ModeCoefficients coeffs = config.resolve_coefficients();
  SampleConfig sampling = config.sampling;
  if (sampling.max_power == 0)
    sampling.max_power = std::max(1, coeffs.max_mode());
  if (sampling.max_power < coeffs.max_mode())
    throw config_error("config.sampling.max_power: smaller than the mode count " +
                       std::to_string(coeffs.max_mode()));

  Manifest manifest;
  manifest.name = config.name;
  manifest.seed = sampling.seed;
  SidecarInfo info{sampling.seed, "mode=" + to_string(sampling.mode)};

  const auto traces = sample_trace_batch(sampling, n_threads);
  write_traces_csv(config.out_dir / "traces.csv", traces, info, &manifest);

  const WorkSampleBatch batch = work_batch(traces, coeffs, sampling);
  {
    std::vector<std::vector<double>> rows;
    rows.reserve(batch.values.size());
    for (std::size_t i = 0; i < batch.values.size(); ++i)
      rows.push_back({static_cast<double>(i), batch.values[i]});
    write_with_sidecar(config.out_dir / "work.csv", {"sample_index", "w"}, rows,
                       info, &manifest);
  }

  const double variance = theoretical_variance(coeffs);
  json report;
  report["name"] = config.name;
  report["version"] = kVersionTag;
  report["seed"] = sampling.seed;
  report["mode"] = to_string(sampling.mode);
  report["matrix_dim"] = sampling.matrix_dim;
  report["n_samples"] = sampling.n_samples;
  report["coefficients"] = coefficients_to_json(coeffs);
  report["theory"] = {{"variance", variance},
                      {"mean", sampling.matrix_dim * coeffs.eps0 - config.e0}};
  if (variance > 0.0) {
    const SkewnessProxy proxy = skewness_proxy(coeffs);
    report["theory"]["skewness_proxy"] = {
        {"s", proxy.s}, {"t", proxy.t}, {"ratio", proxy.ratio}};
  }
  if (batch.values.size() >= 4) {
    try {
      const MomentReport mom = moment_report(batch.values);
      report["sample"] = {{"mean", mom.mean},
                          {"variance", mom.variance},
                          {"skewness", mom.skewness},
                          {"excess_kurtosis", mom.excess_kurtosis},
                          {"se_variance", mom.se_variance},
                          {"se_kurtosis", mom.se_kurtosis},
                          {"kurtosis_bias_note", mom.kurtosis_bias_note}};
    } catch (const numerical_error&) {
      report["sample"] = {{"degenerate", true}};
    }
  }
  write_json_file(config.out_dir / "report.json", report, &manifest);

  if (variance > 0.0) {
    const double sigma = std::sqrt(variance);
    const GridSpec grid = config.u_grid.value_or(
        GridSpec{-8.0 / sigma, 8.0 / sigma, 1025});
    const CharfnTable chi =
        charfn_toeplitz(coeffs, config.e0, grid.make(), sampling.matrix_dim,
                        n_threads);
    write_charfn_csv(config.out_dir / "charfn.csv", chi, info, &manifest);

    const double span = config.w_span > 0.0 ? config.w_span : 8.0 * sigma;
    write_density_csv(config.out_dir / "density.csv",
                      invert_charfn(chi, config.w_points, span, n_threads),
                      info, &manifest);
    write_density_csv(
        config.out_dir / "gaussian.csv",
        gaussian_reference(coeffs, config.e0, sampling.matrix_dim,
                           config.w_points),
        info, &manifest);
    if (batch.values.size() >= 100) {
      try {
        write_density_csv(config.out_dir / "mc_density.csv",
                          mc_density(batch, chi.e0_shift), info, &manifest);
      } catch (const numerical_error&) {
        // degenerate sample (zero IQR): skip the histogram panel
      }
    }
  }

  write_manifest(config.out_dir, manifest);
  return manifest;
}

FigureId parse_figure_id(const std::string& name) {
  if (name == "fig1") return FigureId::fig1;
  if (name == "fig2") return FigureId::fig2;
  if (name == "fig3") return FigureId::fig3;
  if (name == "fig4") return FigureId::fig4;
  if (name == "fig5") return FigureId::fig5;
  throw config_error("figure: expected fig1..fig5, got '" + name + "'");
}

std::string to_string(FigureId id) {
  switch (id) {
    case FigureId::fig1: return "fig1";
    case FigureId::fig2: return "fig2";
    case FigureId::fig3: return "fig3";
    case FigureId::fig4: return "fig4";
    case FigureId::fig5: return "fig5";
  }
  return "fig?";
}

FigureRecipe FigureRecipe::standard(FigureId id) {
  FigureRecipe recipe;
  recipe.id = id;
  switch (id) {
    case FigureId::fig1: recipe.seed = 20101; break;
    case FigureId::fig2: recipe.seed = 20202; break;
    case FigureId::fig3: recipe.seed = 20303; break;
    case FigureId::fig4: recipe.seed = 20404; break;
    case FigureId::fig5: recipe.seed = 20505; break;
  }
  return recipe;
}

namespace {

ModeCoefficients alpha_family(const std::vector<std::pair<int, double>>& modes) {
  int max_mode = 0;
  for (const auto& [m, alpha] : modes) max_mode = std::max(max_mode, m);
  std::vector<cplx> alpha(static_cast<std::size_t>(max_mode), cplx(0.0, 0.0));
  for (const auto& [m, a] : modes) alpha[static_cast<std::size_t>(m - 1)] = a;
  return ModeCoefficients::from_alpha(alpha);
}

struct Family {
  std::string name;
  ModeCoefficients coeffs;
};

// W = 2 Re sum alpha_r Tr U^r, i.e. a_r = 2 alpha_r, b_r = 0.
std::vector<Family> figure_families(FigureId id) {
  const Family three{"3mode", alpha_family({{1, 1.0}, {2, 0.7}, {3, 0.5}})};
  Family five{"5mode_even", {}};
  {
    std::vector<std::pair<int, double>> modes;
    for (int m = 2; m <= 10; m += 2) modes.emplace_back(m, std::exp(-0.4 * m));
    five.coeffs = alpha_family(modes);
  }
  switch (id) {
    case FigureId::fig1:
    case FigureId::fig3:
      return {three, five};
    case FigureId::fig2: {
      std::vector<std::pair<int, double>> pl, ee;
      for (int m = 1; m <= 10; ++m) pl.emplace_back(m, std::pow(m, -2.0));
      for (int m = 2; m <= 10; m += 2) ee.emplace_back(m, std::exp(-0.5 * m));
      return {{"powerlaw", alpha_family(pl)}, {"exp_even", alpha_family(ee)}};
    }
    case FigureId::fig4:
    case FigureId::fig5:
      return {three};
  }
  return {};
}

std::vector<double> figure_work_samples(const ModeCoefficients& coeffs,
                                        SampleMode mode, int dim, int n,
                                        std::uint64_t seed, int n_threads) {
  SampleConfig cfg;
  cfg.matrix_dim = dim;
  cfg.max_power = coeffs.max_mode();
  cfg.n_samples = n;
  cfg.seed = seed;
  cfg.mode = mode;
  const auto traces = sample_trace_batch(cfg, n_threads);
  std::vector<double> w;
  w.reserve(traces.size());
  for (const auto& t : traces) w.push_back(work_value(t, coeffs));
  return w;
}

HistogramSpec histogram_on_edges(const std::vector<double>& samples,
                                 const std::vector<double>& edges,
                                 double bin_width) {
  HistogramSpec spec;
  spec.bin_width = bin_width;
  spec.edges = edges;
  spec.counts.assign(edges.size() - 1, 0);
  for (double x : samples) {
    int bin = static_cast<int>((x - edges.front()) / bin_width);
    bin = std::clamp(bin, 0, static_cast<int>(spec.counts.size()) - 1);
    ++spec.counts[static_cast<std::size_t>(bin)];
  }
  spec.density.resize(spec.counts.size());
  const double norm =
      1.0 / (static_cast<double>(samples.size()) * bin_width);
  for (std::size_t i = 0; i < spec.counts.size(); ++i)
    spec.density[i] = static_cast<double>(spec.counts[i]) * norm;
  return spec;
}

json moment_summary(const std::vector<double>& samples, double theory_var) {
  const MomentReport mom = moment_report(samples);
  return json{{"n", mom.n},
              {"mean", mom.mean},
              {"variance", mom.variance},
              {"se_variance", mom.se_variance},
              {"excess_kurtosis", mom.excess_kurtosis},
              {"se_kurtosis", mom.se_kurtosis},
              {"theory_variance", theory_var}};
}

Manifest figure_hist_qq(const FigureRecipe& recipe,
                        const std::filesystem::path& dir, SampleMode mode,
                        int n, int n_threads) {
  Manifest manifest;
  manifest.name = to_string(recipe.id);
  manifest.seed = recipe.seed;
  json summary;
  std::uint64_t stream = recipe.seed;
  for (const Family& family : figure_families(recipe.id)) {
    const double theory_var = theoretical_variance(family.coeffs);
    const double sigma = std::sqrt(theory_var);
    const auto w =
        figure_work_samples(family.coeffs, mode, 80, n, stream++, n_threads);
    SidecarInfo info{recipe.seed,
                     "family=" + family.name + "; mode=" + to_string(mode) +
                         "; N=80; n=" + std::to_string(n)};
    write_histogram_panel(dir / (family.name + "_hist.csv"), fd_histogram(w),
                          info, &manifest);
    write_qq_panels(dir / (family.name + "_qq.csv"),
                    dir / (family.name + "_qq_detrended.csv"),
                    qq_normal(w, 0.0, sigma), info, &manifest);
    summary[family.name] = moment_summary(w, theory_var);
    summary[family.name]["skewness_proxy_ratio"] =
        skewness_proxy(family.coeffs).ratio;
  }
  write_json_file(dir / "summary.json", summary, &manifest);
  return manifest;
}

Manifest figure_haar_vs_surrogate(const FigureRecipe& recipe,
                                  const std::filesystem::path& dir,
                                  int n_threads) {
  Manifest manifest;
  manifest.name = to_string(recipe.id);
  manifest.seed = recipe.seed;
  json summary;
  std::uint64_t stream = recipe.seed;
  const int n = 300;
  for (const Family& family : figure_families(recipe.id)) {
    const double theory_var = theoretical_variance(family.coeffs);
    const double sigma = std::sqrt(theory_var);
    const auto w_haar = figure_work_samples(family.coeffs, SampleMode::haar, 80,
                                            n, stream++, n_threads);
    const auto w_sur = figure_work_samples(family.coeffs, SampleMode::surrogate,
                                           80, n, stream++, n_threads);

    // Shared Freedman-Diaconis bins from the pooled sample, plus the pooled
    // Gaussian fit both histograms are overlaid with.
    std::vector<double> pooled = w_haar;
    pooled.insert(pooled.end(), w_sur.begin(), w_sur.end());
    const HistogramSpec pooled_hist = fd_histogram(pooled);
    const MomentReport pooled_mom = moment_report(pooled);

    SidecarInfo info{recipe.seed, "family=" + family.name + "; N=80; n=" +
                                      std::to_string(n) + " per mode"};
    write_histogram_panel(
        dir / (family.name + "_hist_haar.csv"),
        histogram_on_edges(w_haar, pooled_hist.edges, pooled_hist.bin_width),
        info, &manifest);
    write_histogram_panel(
        dir / (family.name + "_hist_surrogate.csv"),
        histogram_on_edges(w_sur, pooled_hist.edges, pooled_hist.bin_width),
        info, &manifest);
    write_qq_panels(dir / (family.name + "_qq_haar.csv"),
                    dir / (family.name + "_qq_haar_detrended.csv"),
                    qq_normal(w_haar, 0.0, sigma), info, &manifest);
    write_qq_panels(dir / (family.name + "_qq_surrogate.csv"),
                    dir / (family.name + "_qq_surrogate_detrended.csv"),
                    qq_normal(w_sur, 0.0, sigma), info, &manifest);

    summary[family.name] = {
        {"haar", moment_summary(w_haar, theory_var)},
        {"surrogate", moment_summary(w_sur, theory_var)},
        {"pooled_fit",
         {{"mean", pooled_mom.mean}, {"variance", pooled_mom.variance}}}};
  }
  write_json_file(dir / "summary.json", summary, &manifest);
  return manifest;
}

Manifest figure_trends(const FigureRecipe& recipe,
                       const std::filesystem::path& dir, int n_threads) {
  Manifest manifest;
  manifest.name = to_string(recipe.id);
  manifest.seed = recipe.seed;
  const Family family = figure_families(recipe.id).front();
  const double theory_var = theoretical_variance(family.coeffs);
  const std::vector<int> dims{20, 40, 80, 160};

  std::vector<std::vector<double>> var_rows, kurt_rows;
  json summary;
  std::uint64_t stream = recipe.seed;
  for (int dim : dims) {
    const auto w_var = figure_work_samples(family.coeffs, SampleMode::haar, dim,
                                           300, stream++, n_threads);
    const MomentReport mv = moment_report(w_var);
    var_rows.push_back({static_cast<double>(dim), mv.variance, mv.se_variance,
                        theory_var});

    const auto w_kurt = figure_work_samples(family.coeffs, SampleMode::haar,
                                            dim, 1000, stream++, n_threads);
    const MomentReport mk = moment_report(w_kurt);
    kurt_rows.push_back({static_cast<double>(dim), mk.excess_kurtosis,
                         mk.se_kurtosis, mk.kurtosis_bias_note});
  }
  SidecarInfo info{recipe.seed,
                   "family=" + family.name + "; variance n=300, kurtosis n=1000"};
  write_with_sidecar(dir / "variance_vs_N.csv",
                     {"N", "variance", "se_variance", "theory_variance"},
                     var_rows, info, &manifest);
  write_with_sidecar(dir / "kurtosis_vs_N.csv",
                     {"N", "excess_kurtosis", "se_kurtosis", "bias_note"},
                     kurt_rows, info, &manifest);
  summary["theory_variance"] = theory_var;
  summary["variance_rows"] = var_rows.size();
  write_json_file(dir / "summary.json", summary, &manifest);
  return manifest;
}

Manifest figure_scatter(const FigureRecipe& recipe,
                        const std::filesystem::path& dir, int n_threads) {
  Manifest manifest;
  manifest.name = to_string(recipe.id);
  manifest.seed = recipe.seed;
  const int n = 500, dim = 80;
  SampleConfig cfg;
  cfg.matrix_dim = dim;
  cfg.max_power = 3;
  cfg.n_samples = n;
  cfg.seed = recipe.seed;
  cfg.mode = SampleMode::haar;
  const auto traces = sample_trace_batch(cfg, n_threads);

  json summary;
  for (int s : {2, 3}) {
    std::vector<double> x, y;
    x.reserve(traces.size());
    y.reserve(traces.size());
    for (const auto& t : traces) {
      x.push_back(t.values[0].real());
      y.push_back(t.values[static_cast<std::size_t>(s - 1)].real());
    }
    const EllipseSpec ellipse = theory_ellipse(1, s);
    long inside = 0;
    std::vector<std::vector<double>> raw, std_rows;
    for (std::size_t i = 0; i < x.size(); ++i) {
      raw.push_back({x[i], y[i]});
      const double xs = x[i] / std::sqrt(0.5);
      const double ys = y[i] / std::sqrt(0.5 * s);
      std_rows.push_back({xs, ys});
      if (xs * xs + ys * ys <= ellipse.chi2_quantile) ++inside;
    }
    const CorrelationEstimate corr = scatter_correlation(x, y);
    const std::string pair = "1_" + std::to_string(s);
    SidecarInfo info{recipe.seed, "pair=(ReT1,ReT" + std::to_string(s) +
                                      "); N=80; n=" + std::to_string(n)};
    write_with_sidecar(dir / ("scatter_" + pair + ".csv"),
                       {"re_T1", "re_T" + std::to_string(s)}, raw, info,
                       &manifest);
    write_with_sidecar(dir / ("scatter_" + pair + "_std.csv"),
                       {"re_T1_std", "re_T" + std::to_string(s) + "_std"},
                       std_rows, info, &manifest);
    write_json_file(dir / ("ellipse_" + pair + ".json"),
                    json{{"center", {0.0, 0.0}},
                         {"semi_axis_x", ellipse.semi_axis_x},
                         {"semi_axis_y", ellipse.semi_axis_y},
                         {"chi2_quantile", ellipse.chi2_quantile},
                         {"level", 0.95},
                         {"coverage_measured",
                          static_cast<double>(inside) / n},
                         {"correlation", corr.value},
                         {"correlation_se", corr.se}},
                    &manifest);
    summary["pair_" + pair] = {{"correlation", corr.value},
                               {"correlation_se", corr.se},
                               {"coverage", static_cast<double>(inside) / n}};
  }
  write_json_file(dir / "summary.json", summary, &manifest);
  return manifest;
}

}  // namespace

Manifest reproduce_figure(const FigureRecipe& recipe,
                          const std::filesystem::path& out_dir,
                          int n_threads) {
  std::filesystem::create_directories(out_dir);
  Manifest manifest;
  switch (recipe.id) {
    case FigureId::fig1:
    case FigureId::fig2:
      // Gaussian-core panels are rendered from the surrogate sampler.
      manifest = figure_hist_qq(recipe, out_dir, SampleMode::surrogate, 1000,
                                n_threads);
      break;
    case FigureId::fig3:
      manifest = figure_haar_vs_surrogate(recipe, out_dir, n_threads);
      break;
    case FigureId::fig4:
      manifest = figure_trends(recipe, out_dir, n_threads);
      break;
    case FigureId::fig5:
      manifest = figure_scatter(recipe, out_dir, n_threads);
      break;
  }
  write_manifest(out_dir, manifest);
  return manifest;
}

}  // namespace qwork
