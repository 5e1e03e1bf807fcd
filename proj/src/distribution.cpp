#include "quenchwork/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "quenchwork/diagnostics.hpp"
#include "quenchwork/parallel.hpp"

namespace qwork {

namespace {
constexpr double kDecayTol = 1e-8;
}  // namespace

std::string to_string(CharfnMethod method) {
  switch (method) {
    case CharfnMethod::toeplitz: return "toeplitz";
    case CharfnMethod::product: return "product";
    case CharfnMethod::mc: return "mc";
    case CharfnMethod::gaussian: return "gaussian";
  }
  return "unknown";
}

CharfnMethod parse_charfn_method(const std::string& name) {
  if (name == "toeplitz") return CharfnMethod::toeplitz;
  if (name == "product") return CharfnMethod::product;
  if (name == "mc") return CharfnMethod::mc;
  if (name == "gaussian") return CharfnMethod::gaussian;
  throw config_error("unknown charfn method '" + name + "'");
}

double CharfnTable::chi0_defect() const {
  double defect = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (std::abs(u[i]) < 1e-12) defect = std::max(defect, std::abs(chi[i] - 1.0));
  return defect;
}

double CharfnTable::symmetry_defect() const {
  double defect = 0.0;
  const std::size_t n = u.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    if (std::abs(u[i] + u[j]) < 1e-12)
      defect = std::max(defect, std::abs(chi[i] - std::conj(chi[j])));
  }
  return defect;
}

double DensityTable::spacing() const {
  return w.size() > 1 ? w[1] - w[0] : 0.0;
}

double DensityTable::mass() const {
  double s = 0.0;
  for (double x : p) s += x;
  return s * spacing();
}

double DensityTable::mean() const {
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * p[i];
  return s * spacing();
}

double DensityTable::variance() const {
  const double mu = mean();
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    s += (w[i] - mu) * (w[i] - mu) * p[i];
  return s * spacing();
}

DensityTable invert_charfn(const CharfnTable& table, int w_points,
                           double w_span, int n_threads) {
  const std::size_t m = table.u.size();
  if (m < 3) throw config_error("invert_charfn: u grid too short");
  if (w_points < 2) throw config_error("invert_charfn: w_points must be >= 2");
  if (!(w_span > 0.0)) throw config_error("invert_charfn: w_span must be > 0");

  const double du = table.u[1] - table.u[0];
  if (!(du > 0.0)) throw config_error("invert_charfn: u grid must increase");
  for (std::size_t i = 1; i < m; ++i)
    if (std::abs(table.u[i] - table.u[i - 1] - du) > 1e-9 * std::max(1.0, du))
      throw config_error("invert_charfn: u grid must be uniform");
  if (std::abs(table.u.front() + table.u.back()) > 1e-9 * table.u.back())
    throw config_error("invert_charfn: u grid must be symmetric about 0");
  if (du * w_span > kPi)
    throw config_error(
        "invert_charfn: du * w_span exceeds the Nyquist bound pi; refine the "
        "u grid or shrink w_span");

  DensityTable out;
  out.method = table.method;
  out.decay_warning = std::abs(table.chi.front()) > kDecayTol ||
                      std::abs(table.chi.back()) > kDecayTol;

  const double center = table.e0_shift;
  const double dw = 2.0 * w_span / (w_points - 1);
  out.w.resize(static_cast<std::size_t>(w_points));
  out.p.resize(static_cast<std::size_t>(w_points));
  for (int l = 0; l < w_points; ++l)
    out.w[static_cast<std::size_t>(l)] = center - w_span + l * dw;

  std::vector<cplx> weighted(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double trap = (j == 0 || j + 1 == m) ? 0.5 : 1.0;
    weighted[j] = table.chi[j] * trap;
  }

  parallel_for(out.w.size(), n_threads, [&](std::size_t l) {
    const double w = out.w[l];
    // e^{-i u_j w} by phase recurrence along the uniform u grid
    const cplx step = std::exp(cplx(0.0, -du * w));
    cplx phase = std::exp(cplx(0.0, -table.u[0] * w));
    cplx acc(0.0, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      acc += weighted[j] * phase;
      phase *= step;
    }
    out.p[l] = acc.real() * du / kTwoPi;
  });

  double clipped = 0.0;
  for (double& p : out.p) {
    if (p < 0.0) {
      clipped += -p * dw;
      p = 0.0;
    }
  }
  out.clipped_mass = clipped;
  out.norm_defect = std::abs(out.mass() - 1.0);
  return out;
}

DensityTable mc_density(const WorkSampleBatch& batch, double e0_shift) {
  if (batch.values.size() < 100)
    throw config_error("mc_density: need at least 100 samples, got " +
                       std::to_string(batch.values.size()));
  std::vector<double> shifted(batch.values);
  for (double& w : shifted) w += e0_shift;

  const HistogramSpec hist = fd_histogram(shifted);
  DensityTable out;
  out.method = CharfnMethod::mc;
  out.w.reserve(hist.density.size());
  for (std::size_t i = 0; i < hist.density.size(); ++i)
    out.w.push_back(hist.edges[i] + 0.5 * hist.bin_width);
  out.p = hist.density;
  out.norm_defect = std::abs(out.mass() - 1.0);
  return out;
}

DensityTable gaussian_reference(const ModeCoefficients& coeffs, double e0,
                                int dim, int w_points) {
  const double var = theoretical_variance(coeffs);
  if (!(var > 0.0))
    throw numerical_error("gaussian_reference: zero variance");
  const double sigma = std::sqrt(var);
  const double mean = dim * coeffs.eps0 - e0;

  DensityTable out;
  out.method = CharfnMethod::gaussian;
  const double span = 8.0 * sigma;
  const double dw = 2.0 * span / (w_points - 1);
  const double norm = 1.0 / (sigma * std::sqrt(kTwoPi));
  out.w.reserve(static_cast<std::size_t>(w_points));
  out.p.reserve(static_cast<std::size_t>(w_points));
  for (int l = 0; l < w_points; ++l) {
    const double w = mean - span + l * dw;
    const double z = (w - mean) / sigma;
    out.w.push_back(w);
    out.p.push_back(norm * std::exp(-0.5 * z * z));
  }
  out.norm_defect = std::abs(out.mass() - 1.0);
  return out;
}

double density_cdf(const DensityTable& table, double w) {
  const double dw = table.spacing();
  if (table.w.empty() || dw <= 0.0)
    throw numerical_error("density_cdf: degenerate table");
  if (w <= table.w.front()) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < table.w.size(); ++i) {
    const double right = table.w[i] + 0.5 * dw;
    if (w >= right) {
      acc += table.p[i] * dw;
    } else {
      const double left = table.w[i] - 0.5 * dw;
      if (w > left) acc += table.p[i] * (w - left);
      break;
    }
  }
  return std::min(acc, 1.0);
}

}  // namespace qwork
