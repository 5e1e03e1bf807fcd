#include "quenchwork/chain.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <cmath>

namespace qwork {

namespace {

constexpr double kCoeffCut = 1e-13;  // quadrature noise floor for |alpha_m|

struct BlochVector {
  double x, z;  // d = (gamma sin k, 0, h - cos k); y component always 0
  double norm() const { return std::hypot(x, z); }
};

BlochVector bloch(double gamma, double h, double k) {
  return {gamma * std::sin(k), h - std::cos(k)};
}

Eigen::Matrix2cd pauli_dot(const BlochVector& d) {
  Eigen::Matrix2cd m;
  m << cplx(d.z, 0.0), cplx(d.x, 0.0), cplx(d.x, 0.0), cplx(-d.z, 0.0);
  return m;
}

}  // namespace

ModeCoefficients xx_mode_coefficients(const XXChain& chain) {
  ModeCoefficients c;
  c.eps0 = -chain.mu;
  c.a.reserve(chain.hoppings.size());
  for (double j : chain.hoppings) c.a.push_back(2.0 * j);
  c.b.assign(chain.hoppings.size(), 0.0);
  return c;
}

void QuenchXY::validate() const {
  if (sites < 2 || sites % 2 != 0)
    throw config_error("quench_xy.sites: must be even and >= 2, got " +
                       std::to_string(sites));
}

std::vector<double> QuenchXY::sector_momenta() const {
  validate();
  std::vector<double> ks;
  ks.reserve(static_cast<std::size_t>(sites / 2));
  for (int j = 1; j <= sites / 2; ++j)
    ks.push_back((2.0 * j - 1.0) * kPi / sites);
  return ks;
}

double bogoliubov_angle(double gamma, double h, double k) {
  return 0.5 * std::atan2(gamma * std::sin(k), h - std::cos(k));
}

double xy_dispersion(double gamma, double h, double k) {
  return 2.0 * bloch(gamma, h, k).norm();
}

double xy_initial_energy(const QuenchXY& quench) {
  double e0 = 0.0;
  for (double k : quench.sector_momenta())
    e0 += xy_dispersion(quench.gamma_i, quench.h_i, k);
  return e0;
}

cplx loschmidt_xy_factor(const QuenchXY& quench, double t, double k) {
  const double eps_f = xy_dispersion(quench.gamma_f, quench.h_f, k);
  const double dtheta = bogoliubov_angle(quench.gamma_f, quench.h_f, k) -
                        bogoliubov_angle(quench.gamma_i, quench.h_i, k);
  return cplx(std::cos(eps_f * t),
              -std::sin(eps_f * t) * std::cos(2.0 * dtheta));
}

cplx loschmidt_xy_product(const QuenchXY& quench, double t) {
  cplx g(1.0, 0.0);
  for (double k : quench.sector_momenta())
    g *= loschmidt_xy_factor(quench, t, k);
  return g;
}

CharfnTable charfn_xy_product(const QuenchXY& quench,
                              const std::vector<double>& u_grid) {
  const double e0 = xy_initial_energy(quench);
  const auto momenta = quench.sector_momenta();

  double mean = -e0;
  for (double k : momenta)
    mean += xy_dispersion(quench.gamma_f, quench.h_f, k) *
            std::cos(2.0 * (bogoliubov_angle(quench.gamma_f, quench.h_f, k) -
                            bogoliubov_angle(quench.gamma_i, quench.h_i, k)));

  CharfnTable table;
  table.method = CharfnMethod::product;
  table.e0_shift = mean;
  table.u = u_grid;
  table.chi.reserve(u_grid.size());
  table.log_chi.reserve(u_grid.size());
  table.singular.assign(u_grid.size(), false);
  for (std::size_t i = 0; i < u_grid.size(); ++i) {
    const double u = u_grid[i];
    const cplx chi =
        std::exp(cplx(0.0, -u * e0)) * loschmidt_xy_product(quench, -u);
    table.chi.push_back(chi);
    if (std::abs(chi) == 0.0) {
      table.singular[i] = true;
      table.log_chi.push_back(
          cplx(-std::numeric_limits<double>::infinity(), 0.0));
    } else {
      table.log_chi.push_back(std::log(chi));
    }
  }
  return table;
}

BlockSymbolCheck block_symbol_check(const QuenchXY& quench, double t, double k) {
  const Eigen::Matrix2cd eye = Eigen::Matrix2cd::Identity();
  const cplx imag_unit(0.0, 1.0);

  auto pair_block_det = [&](double kk) {
    BlochVector di = bloch(quench.gamma_i, quench.h_i, kk);
    BlochVector df = bloch(quench.gamma_f, quench.h_f, kk);
    const double ni = di.norm();
    const double nf = df.norm();
    // Degenerate Bloch vector: the block is scalar, dhat irrelevant.
    const BlochVector dhat_i = ni > 0 ? BlochVector{di.x / ni, di.z / ni}
                                      : BlochVector{0.0, 1.0};
    const BlochVector dhat_f = nf > 0 ? BlochVector{df.x / nf, df.z / nf}
                                      : BlochVector{0.0, 1.0};
    const double eps_f = 2.0 * nf;

    const Eigen::Matrix2cd c0 = 0.5 * (eye - pauli_dot(dhat_i));
    // Occupation-convention evolution block: the pair ground state must pick
    // up exp(-i eps_f t) to match the product formula's phase.
    const Eigen::Matrix2cd evolution =
        std::cos(eps_f * t) * eye +
        imag_unit * std::sin(eps_f * t) * pauli_dot(dhat_f);
    const Eigen::Matrix2cd phi = (eye - c0) + c0 * evolution;
    return phi.determinant();
  };

  BlockSymbolCheck out;
  out.det_phi = pair_block_det(k) * pair_block_det(-k);
  const cplx factor = loschmidt_xy_factor(quench, t, k);
  out.factor_sq = factor * factor;
  return out;
}

ModeCoefficients EffectiveDispersion::to_mode_coefficients() const {
  ModeCoefficients c;
  if (!alpha_tilde.empty()) c.eps0 = alpha_tilde[0].real();
  for (std::size_t m = 1; m < alpha_tilde.size(); ++m) {
    c.a.push_back(2.0 * alpha_tilde[m].real());
    c.b.push_back(-2.0 * alpha_tilde[m].imag());
  }
  return c;
}

EffectiveDispersion effective_dispersion(const QuenchXY& quench,
                                         int grid_size) {
  if (grid_size < 1024 || (grid_size & (grid_size - 1)) != 0)
    throw config_error(
        "effective_dispersion: grid_size must be a power of two >= 1024");

  std::vector<cplx> samples(static_cast<std::size_t>(grid_size));
  for (int j = 0; j < grid_size; ++j) {
    const double k = kTwoPi * j / grid_size;
    const double dtheta = bogoliubov_angle(quench.gamma_f, quench.h_f, k) -
                          bogoliubov_angle(quench.gamma_i, quench.h_i, k);
    samples[static_cast<std::size_t>(j)] =
        xy_dispersion(quench.gamma_f, quench.h_f, k) * std::cos(2.0 * dtheta);
  }
  Eigen::FFT<double> fft;
  std::vector<cplx> spectrum;
  fft.fwd(spectrum, samples);

  const double inv_m = 1.0 / grid_size;
  int m_max = 0;
  for (int m = 1; m < grid_size / 2; ++m)
    if (std::abs(spectrum[static_cast<std::size_t>(m)]) * inv_m > kCoeffCut)
      m_max = m;

  EffectiveDispersion out;
  out.alpha_tilde.reserve(static_cast<std::size_t>(m_max + 1));
  for (int m = 0; m <= m_max; ++m)
    out.alpha_tilde.push_back(spectrum[static_cast<std::size_t>(m)] * inv_m);
  for (int m = 1; m <= m_max; ++m) {
    const double mag = std::abs(out.alpha_tilde[static_cast<std::size_t>(m)]);
    if (mag > kCoeffCut) out.sigma2 += 2.0 * m * mag * mag;
  }
  return out;
}

}  // namespace qwork
