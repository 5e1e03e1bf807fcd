#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "quenchwork/chain.hpp"
#include "quenchwork/diagnostics.hpp"
#include "quenchwork/sampling.hpp"
#include "quenchwork/tables.hpp"
#include "quenchwork/work.hpp"

namespace qwork {

inline constexpr const char* kVersionTag = "quenchwork 0.1.0";
inline constexpr int kConfigVersion = 1;

struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  int points = 0;
  std::vector<double> make() const;
};

// One experiment: exactly one coefficient source, a sampling block, and
// grid parameters for the characteristic function and the density.
struct ExperimentConfig {
  std::string name = "experiment";
  int version = kConfigVersion;
  std::optional<ModeCoefficients> coefficients;
  std::optional<XXChain> xx_chain;
  std::optional<QuenchXY> quench_xy;
  SampleConfig sampling;        // max_power 0 means "match the mode count"
  double e0 = 0.0;
  std::optional<GridSpec> u_grid;  // default [-8/sigma, 8/sigma], 4096+1 points
  int w_points = 513;
  double w_span = 0.0;             // 0 means 8 sigma
  std::filesystem::path out_dir = ".";

  static ExperimentConfig from_json(const nlohmann::json& j);
  void validate() const;
  ModeCoefficients resolve_coefficients() const;
};

ModeCoefficients coefficients_from_json(const nlohmann::json& j);
nlohmann::json coefficients_to_json(const ModeCoefficients& coeffs);

// Output files with content hashes; written as manifest.json.
struct Manifest {
  std::map<std::string, std::string> file_hashes;
  std::uint64_t seed = 0;
  std::string name;
};

Manifest run_experiment(const ExperimentConfig& config, int n_threads = 1);

enum class FigureId { fig1, fig2, fig3, fig4, fig5 };
FigureId parse_figure_id(const std::string& name);
std::string to_string(FigureId id);

// Parameter presets behind each figure; immutable, seeds fixed per figure
// so reruns are byte identical.
struct FigureRecipe {
  FigureId id;
  std::uint64_t seed;
  static FigureRecipe standard(FigureId id);
};

Manifest reproduce_figure(const FigureRecipe& recipe,
                          const std::filesystem::path& out_dir,
                          int n_threads = 1);

// Panel writers shared by the diagnose subcommand and the figure recipes.
// Each CSV gets a .meta.json sidecar recording seed, conventions, version.
struct SidecarInfo {
  std::uint64_t seed = 0;
  std::string notes;
  std::map<std::string, double> extras;  // e.g. e0_shift for charfn tables
};

void write_with_sidecar(const std::filesystem::path& path,
                        const std::vector<std::string>& header,
                        const std::vector<std::vector<double>>& rows,
                        const SidecarInfo& info,
                        Manifest* manifest = nullptr,
                        const std::vector<std::string>& text_column = {});

void write_histogram_panel(const std::filesystem::path& path,
                           const HistogramSpec& hist, const SidecarInfo& info,
                           Manifest* manifest = nullptr);
void write_qq_panels(const std::filesystem::path& qq_path,
                     const std::filesystem::path& detrended_path,
                     const QQData& qq, const SidecarInfo& info,
                     Manifest* manifest = nullptr);
void write_moments_panel(const std::filesystem::path& path,
                         const MomentReport& report, const SidecarInfo& info,
                         Manifest* manifest = nullptr);
void write_charfn_csv(const std::filesystem::path& path,
                      const CharfnTable& table, const SidecarInfo& info,
                      Manifest* manifest = nullptr);
void write_density_csv(const std::filesystem::path& path,
                       const DensityTable& table, const SidecarInfo& info,
                       Manifest* manifest = nullptr);
void write_manifest(const std::filesystem::path& out_dir, const Manifest& m);

}  // namespace qwork
