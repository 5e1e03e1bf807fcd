#include "quenchwork/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace qwork {

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw config_error("normal_quantile: p must be in (0,1)");
  // AS241 (Wichura 1988), PPND16.
  const double q = p - 0.5;
  double r;
  if (std::abs(q) <= 0.425) {
    r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
              3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
            4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
            2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
            5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -val : val;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double sample_quantile(std::vector<double> xs, double p) {
  if (xs.empty()) throw config_error("sample_quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0))
    throw config_error("sample_quantile: p must be in [0,1]");
  std::sort(xs.begin(), xs.end());
  const double idx = p * static_cast<double>(xs.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(idx));
  if (lo + 1 >= xs.size()) return xs.back();
  const double frac = idx - static_cast<double>(lo);
  return xs[lo] * (1.0 - frac) + xs[lo + 1] * frac;
}

HistogramSpec fd_histogram(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw config_error("fd_histogram: need at least 2 samples");
  const double iqr =
      sample_quantile(samples, 0.75) - sample_quantile(samples, 0.25);
  if (!(iqr > 0.0))
    throw numerical_error("fd_histogram: zero IQR, degenerate sample");

  HistogramSpec spec;
  spec.bin_width = 2.0 * iqr / std::cbrt(static_cast<double>(n));
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it, hi = *hi_it;
  const int n_bins =
      std::max(1, static_cast<int>(std::ceil((hi - lo) / spec.bin_width)));

  spec.edges.resize(static_cast<std::size_t>(n_bins) + 1);
  for (int i = 0; i <= n_bins; ++i)
    spec.edges[static_cast<std::size_t>(i)] = lo + i * spec.bin_width;
  spec.counts.assign(static_cast<std::size_t>(n_bins), 0);
  for (double x : samples) {
    int bin = static_cast<int>((x - lo) / spec.bin_width);
    bin = std::clamp(bin, 0, n_bins - 1);  // max lands in the last bin
    ++spec.counts[static_cast<std::size_t>(bin)];
  }
  spec.density.resize(spec.counts.size());
  const double norm = 1.0 / (static_cast<double>(n) * spec.bin_width);
  for (std::size_t i = 0; i < spec.counts.size(); ++i)
    spec.density[i] = static_cast<double>(spec.counts[i]) * norm;
  return spec;
}

QQData qq_normal(const std::vector<double>& samples, double mu, double sigma) {
  if (!(sigma > 0.0)) throw config_error("qq_normal: sigma must be > 0");
  if (samples.size() < 10)
    throw config_error("qq_normal: need at least 10 samples");
  QQData qq;
  qq.empirical_q.reserve(samples.size());
  for (double x : samples) qq.empirical_q.push_back((x - mu) / sigma);
  std::sort(qq.empirical_q.begin(), qq.empirical_q.end());
  const double n = static_cast<double>(samples.size());
  qq.theoretical_q.reserve(samples.size());
  qq.residuals.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double p = (static_cast<double>(i) + 0.5) / n;
    qq.theoretical_q.push_back(normal_quantile(p));
    qq.residuals.push_back(qq.empirical_q[i] - qq.theoretical_q[i]);
  }
  return qq;
}

MomentReport moment_report(const std::vector<double>& samples) {
  const std::size_t n = samples.size();
  if (n < 4) throw config_error("moment_report: need at least 4 samples");
  MomentReport rep;
  rep.n = static_cast<long>(n);
  const double dn = static_cast<double>(n);
  for (double x : samples) rep.mean += x;
  rep.mean /= dn;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : samples) {
    const double d = x - rep.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  rep.variance = m2 / (dn - 1.0);
  m2 /= dn;
  m3 /= dn;
  m4 /= dn;
  if (!(m2 > 0.0)) throw numerical_error("moment_report: zero variance");
  rep.skewness = m3 / std::pow(m2, 1.5);
  rep.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  rep.se_variance = rep.variance * std::sqrt(2.0 / (dn - 1.0));
  rep.se_kurtosis = std::sqrt(24.0 / dn);
  rep.kurtosis_bias_note = 6.0 / (dn + 1.0);
  return rep;
}

EllipseSpec theory_ellipse(int r, int s, double level) {
  if (r < 1 || s < 1) throw config_error("theory_ellipse: powers must be >= 1");
  if (!(level > 0.0 && level < 1.0))
    throw config_error("theory_ellipse: level must be in (0,1)");
  EllipseSpec e;
  e.chi2_quantile = -2.0 * std::log(1.0 - level);  // chi^2 with 2 dof
  e.semi_axis_x = std::sqrt(e.chi2_quantile * r / 2.0);
  e.semi_axis_y = std::sqrt(e.chi2_quantile * s / 2.0);
  return e;
}

CorrelationEstimate scatter_correlation(const std::vector<double>& xs,
                                        const std::vector<double>& ys) {
  if (xs.size() != ys.size())
    throw config_error("scatter_correlation: length mismatch");
  const std::size_t n = xs.size();
  if (n < 30) throw config_error("scatter_correlation: need at least 30 pairs");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0))
    throw numerical_error("scatter_correlation: degenerate variance");
  CorrelationEstimate est;
  est.value = sxy / std::sqrt(sxx * syy);
  est.n = static_cast<long>(n);
  est.se = 1.0 / std::sqrt(static_cast<double>(n));
  return est;
}

}  // namespace qwork
