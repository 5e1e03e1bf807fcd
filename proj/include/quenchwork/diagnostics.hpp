#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "quenchwork/types.hpp"

namespace qwork {

// Phi^{-1}: Wichura's AS241 rational approximation (well below 1e-9 error).
double normal_quantile(double p);
double normal_cdf(double x);

// Linear-interpolation sample quantile (the numpy default).
double sample_quantile(std::vector<double> sorted_or_not, double p);

struct HistogramSpec {
  double bin_width = 0.0;            // 2 IQR / n^{1/3}
  std::vector<double> edges;         // uniform, covers [min, max]
  std::vector<long> counts;          // sums to n
  std::vector<double> density;       // counts / (n h), so sum density*h = 1
};

HistogramSpec fd_histogram(const std::vector<double>& samples);

struct QQData {
  std::vector<double> theoretical_q;  // Phi^{-1}((i-0.5)/n)
  std::vector<double> empirical_q;    // sorted standardized sample
  std::vector<double> residuals;      // empirical - theoretical
};

QQData qq_normal(const std::vector<double>& samples, double mu, double sigma);

struct MomentReport {
  long n = 0;
  double mean = 0.0;
  double variance = 0.0;         // unbiased (n-1 divisor)
  double skewness = 0.0;         // m3 / m2^{3/2}
  double excess_kurtosis = 0.0;  // m4 / m2^2 - 3, reported raw
  double se_variance = 0.0;      // variance * sqrt(2/(n-1))
  double se_kurtosis = 0.0;      // sqrt(24/n)
  double kurtosis_bias_note = 0.0;  // approx small-sample bias 6/(n+1)
};

MomentReport moment_report(const std::vector<double>& samples);

struct EllipseSpec {
  double center_x = 0.0;
  double center_y = 0.0;
  double semi_axis_x = 0.0;  // sqrt(q r / 2)
  double semi_axis_y = 0.0;  // sqrt(q s / 2)
  double chi2_quantile = 0.0;
};

// Theory ellipse for (Re T_r, Re T_s) scatter at the given coverage level;
// axis-aligned and centered at the origin because different powers are
// uncorrelated with variances r/2 and s/2.
EllipseSpec theory_ellipse(int r, int s, double level = 0.95);

struct CorrelationEstimate {
  double value = 0.0;
  double se = 0.0;  // 1/sqrt(n)
  long n = 0;
};

CorrelationEstimate scatter_correlation(const std::vector<double>& xs,
                                        const std::vector<double>& ys);

// Kolmogorov-Smirnov distance between a sample and a reference CDF.
template <class Cdf>
double ks_distance(std::vector<double> samples, Cdf&& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - (static_cast<double>(i) + 1.0) / n));
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
  }
  return d;
}

}  // namespace qwork
