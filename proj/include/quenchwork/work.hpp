#pragma once

#include <span>
#include <vector>

#include "quenchwork/sampling.hpp"
#include "quenchwork/types.hpp"

namespace qwork {

// Real Fourier data of a dispersion: eps(theta) = eps0 + sum_r (a_r cos r
// theta + b_r sin r theta). Canonical form is real (a_r, b_r); complex alpha
// input is converted at the boundary and the conversion recorded, since the
// two conventions differ by a factor of 2 and silently mixing them is the
// main foot-gun.
struct ModeCoefficients {
  double eps0 = 0.0;
  std::vector<double> a;  // cos-mode weights, index r-1
  std::vector<double> b;  // sin-mode weights, same length as a
  bool from_complex_alpha = false;

  int max_mode() const { return static_cast<int>(a.size()); }
  double dispersion(double theta) const;
  void validate() const;  // len(a) == len(b), finite entries

  // a_r = 2 Re alpha_r, b_r = -2 Im alpha_r, so that
  // sum_r (alpha_r T_r + conj(alpha_r) conj(T_r)) == sum_r (a_r Re T_r + b_r Im T_r).
  static ModeCoefficients from_alpha(std::span<const cplx> alpha,
                                     double eps0 = 0.0);
};

// W = sum_{r<=m} (a_r Re T_r + b_r Im T_r). Throws when the trace vector is
// shorter than the coefficient list.
double work_value(const TraceVector& traces, const ModeCoefficients& coeffs);

// 1/2 sum_r r (a_r^2 + b_r^2)
double theoretical_variance(const ModeCoefficients& coeffs);

struct SkewnessProxy {
  double s;      // sum r (a_r^2 + b_r^2)
  double t;      // sum r^{3/2} (|a_r|^3 + |b_r|^3)
  double ratio;  // t / s^{3/2}, proxy for the normalized third cumulant
};
SkewnessProxy skewness_proxy(const ModeCoefficients& coeffs);

struct WorkSampleBatch {
  std::vector<double> values;
  SampleConfig config;
  ModeCoefficients coefficients;
};
WorkSampleBatch work_batch(const std::vector<TraceVector>& traces,
                           const ModeCoefficients& coeffs,
                           const SampleConfig& config);

// One factor of a mixed trace moment E prod T_r^(..) conj(T_r)^(..).
struct TracePower {
  int power = 1;
  bool conjugated = false;
};

struct MomentEstimate {
  cplx value;
  double se_re = 0.0;  // leave-one-out jackknife standard errors
  double se_im = 0.0;
  int n = 0;
};

MomentEstimate mixed_moment_mc(const std::vector<TraceVector>& samples,
                               const std::vector<TracePower>& powers);

}  // namespace qwork
