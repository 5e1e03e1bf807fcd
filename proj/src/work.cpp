#include "quenchwork/work.hpp"

#include <cmath>

namespace qwork {

double ModeCoefficients::dispersion(double theta) const {
  double eps = eps0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r = static_cast<double>(i + 1);
    eps += a[i] * std::cos(r * theta) + b[i] * std::sin(r * theta);
  }
  return eps;
}

void ModeCoefficients::validate() const {
  if (a.size() != b.size())
    throw config_error("coefficients: len(a)=" + std::to_string(a.size()) +
                       " != len(b)=" + std::to_string(b.size()));
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(eps0)) throw config_error("coefficients: eps0 not finite");
  for (double x : a)
    if (!finite(x)) throw config_error("coefficients: a entry not finite");
  for (double x : b)
    if (!finite(x)) throw config_error("coefficients: b entry not finite");
}

ModeCoefficients ModeCoefficients::from_alpha(std::span<const cplx> alpha,
                                              double eps0) {
  ModeCoefficients c;
  c.eps0 = eps0;
  c.from_complex_alpha = true;
  c.a.reserve(alpha.size());
  c.b.reserve(alpha.size());
  for (const cplx& al : alpha) {
    c.a.push_back(2.0 * al.real());
    c.b.push_back(-2.0 * al.imag());
  }
  return c;
}

double work_value(const TraceVector& traces, const ModeCoefficients& coeffs) {
  coeffs.validate();
  if (traces.values.size() < coeffs.a.size())
    throw config_error("work_value: trace vector has " +
                       std::to_string(traces.values.size()) +
                       " powers, coefficients need " +
                       std::to_string(coeffs.a.size()));
  double w = 0.0;
  for (std::size_t i = 0; i < coeffs.a.size(); ++i)
    w += coeffs.a[i] * traces.values[i].real() +
         coeffs.b[i] * traces.values[i].imag();
  return w;
}

double theoretical_variance(const ModeCoefficients& coeffs) {
  coeffs.validate();
  double s = 0.0;
  for (std::size_t i = 0; i < coeffs.a.size(); ++i) {
    const double r = static_cast<double>(i + 1);
    s += r * (coeffs.a[i] * coeffs.a[i] + coeffs.b[i] * coeffs.b[i]);
  }
  return 0.5 * s;
}

SkewnessProxy skewness_proxy(const ModeCoefficients& coeffs) {
  coeffs.validate();
  SkewnessProxy out{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < coeffs.a.size(); ++i) {
    const double r = static_cast<double>(i + 1);
    const double ar = std::abs(coeffs.a[i]);
    const double br = std::abs(coeffs.b[i]);
    out.s += r * (ar * ar + br * br);
    out.t += std::pow(r, 1.5) * (ar * ar * ar + br * br * br);
  }
  if (out.s == 0.0)
    throw numerical_error("skewness_proxy: S=0, ratio undefined");
  out.ratio = out.t / std::pow(out.s, 1.5);
  return out;
}

WorkSampleBatch work_batch(const std::vector<TraceVector>& traces,
                           const ModeCoefficients& coeffs,
                           const SampleConfig& config) {
  WorkSampleBatch batch;
  batch.config = config;
  batch.coefficients = coeffs;
  batch.values.reserve(traces.size());
  for (const TraceVector& t : traces) batch.values.push_back(work_value(t, coeffs));
  return batch;
}

MomentEstimate mixed_moment_mc(const std::vector<TraceVector>& samples,
                               const std::vector<TracePower>& powers) {
  const std::size_t n = samples.size();
  if (n < 30)
    throw config_error("mixed_moment_mc: need at least 30 samples, got " +
                       std::to_string(n));
  std::vector<cplx> products(n, cplx(1.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (const TracePower& p : powers) {
      if (p.power < 1 ||
          static_cast<std::size_t>(p.power) > samples[i].values.size())
        throw config_error("mixed_moment_mc: power " + std::to_string(p.power) +
                           " outside sampled range");
      const cplx t = samples[i].values[static_cast<std::size_t>(p.power - 1)];
      products[i] *= p.conjugated ? std::conj(t) : t;
    }
  }
  cplx sum(0.0, 0.0);
  for (const cplx& p : products) sum += p;
  const cplx mean = sum / static_cast<double>(n);

  // Leave-one-out jackknife of the mean, componentwise.
  double var_re = 0.0, var_im = 0.0;
  const double nm1 = static_cast<double>(n - 1);
  for (const cplx& p : products) {
    const cplx loo = (sum - p) / nm1;
    var_re += (loo.real() - mean.real()) * (loo.real() - mean.real());
    var_im += (loo.imag() - mean.imag()) * (loo.imag() - mean.imag());
  }
  const double scale = nm1 / static_cast<double>(n);
  MomentEstimate est;
  est.value = mean;
  est.se_re = std::sqrt(scale * var_re);
  est.se_im = std::sqrt(scale * var_im);
  est.n = static_cast<int>(n);
  return est;
}

}  // namespace qwork
