#include "quenchwork/toeplitz.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>

#include "quenchwork/parallel.hpp"

namespace qwork {

namespace {

bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

int next_power_of_two(int m) {
  int p = 1;
  while (p < m) p <<= 1;
  return p;
}

// Wrap an angle to (-pi, pi].
double principal(double phi) {
  phi = std::fmod(phi, kTwoPi);
  if (phi <= -kPi) phi += kTwoPi;
  if (phi > kPi) phi -= kTwoPi;
  return phi;
}

}  // namespace

int default_grid_size(int max_mode, int dim) {
  const int need = std::max({4096, 16 * max_mode, 8 * dim});
  return next_power_of_two(need);
}

cplx SymbolTable::coeff(int k) const {
  if (std::abs(k) > max_coeff())
    throw config_error("symbol: coefficient |k|=" + std::to_string(std::abs(k)) +
                       " beyond grid_size/2-1=" + std::to_string(max_coeff()) +
                       "; increase grid_size");
  const int m = grid_size;
  const int idx = ((k % m) + m) % m;
  return fourier[static_cast<std::size_t>(idx)];
}

SymbolTable symbol_from_dispersion(const ModeCoefficients& coeffs, double u,
                                   int grid_size) {
  coeffs.validate();
  const int min_size = std::max(8, 8 * coeffs.max_mode());
  if (!is_power_of_two(grid_size) || grid_size < min_size)
    throw config_error("symbol: grid_size must be a power of two >= " +
                       std::to_string(next_power_of_two(min_size)) + ", got " +
                       std::to_string(grid_size));

  SymbolTable sym;
  sym.grid_size = grid_size;
  sym.theta.resize(static_cast<std::size_t>(grid_size));
  sym.values.resize(static_cast<std::size_t>(grid_size));
  for (int j = 0; j < grid_size; ++j) {
    const double theta = kTwoPi * j / grid_size;
    sym.theta[static_cast<std::size_t>(j)] = theta;
    sym.values[static_cast<std::size_t>(j)] =
        std::exp(cplx(0.0, u * coeffs.dispersion(theta)));
  }

  Eigen::FFT<double> fft;
  std::vector<cplx> spectrum;
  fft.fwd(spectrum, sym.values);
  sym.fourier.resize(spectrum.size());
  const double inv_m = 1.0 / grid_size;
  for (std::size_t k = 0; k < spectrum.size(); ++k)
    sym.fourier[k] = spectrum[k] * inv_m;
  return sym;
}

ToeplitzResult toeplitz_determinant(const SymbolTable& symbol, int dim) {
  if (dim < 1) throw config_error("toeplitz_determinant: dim must be >= 1");
  if (dim - 1 > symbol.max_coeff())
    throw config_error(
        "toeplitz_determinant: need Fourier coefficients up to |k|=" +
        std::to_string(dim - 1) + " but grid_size=" +
        std::to_string(symbol.grid_size) + " supports only |k|<=" +
        std::to_string(symbol.max_coeff()) + "; use grid_size >= " +
        std::to_string(next_power_of_two(2 * dim)));

  Eigen::MatrixXcd t(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int k = 0; k < dim; ++k) t(j, k) = symbol.coeff(j - k);

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(t);
  const Eigen::VectorXcd diag = lu.matrixLU().diagonal();
  const int perm_sign = lu.permutationP().determinant();

  ToeplitzResult res;
  res.dim = dim;
  double log_abs = 0.0;
  double phase = perm_sign < 0 ? kPi : 0.0;
  for (int i = 0; i < dim; ++i) {
    const double mag = std::abs(diag(i));
    if (mag == 0.0) {
      res.singular = true;
      res.det = cplx(0.0, 0.0);
      res.log_det = cplx(-std::numeric_limits<double>::infinity(), 0.0);
      return res;
    }
    log_abs += std::log(mag);
    phase += std::arg(diag(i));
  }
  res.log_det = cplx(log_abs, principal(phase));
  res.det = std::exp(res.log_det);
  return res;
}

CharfnTable charfn_toeplitz(const ModeCoefficients& coeffs, double e0,
                            const std::vector<double>& u_grid, int dim,
                            int n_threads) {
  coeffs.validate();
  if (u_grid.empty()) throw config_error("charfn: empty u grid");
  for (double u : u_grid)
    if (!std::isfinite(u)) throw config_error("charfn: non-finite u value");

  const int grid_size = default_grid_size(coeffs.max_mode(), dim);

  CharfnTable table;
  table.method = CharfnMethod::toeplitz;
  table.e0_shift = dim * coeffs.eps0 - e0;
  table.u = u_grid;
  table.chi.resize(u_grid.size());
  table.log_chi.resize(u_grid.size());
  table.singular.assign(u_grid.size(), false);

  std::vector<cplx> raw_log(u_grid.size());
  parallel_for(u_grid.size(), n_threads, [&](std::size_t i) {
    const SymbolTable sym = symbol_from_dispersion(coeffs, u_grid[i], grid_size);
    const ToeplitzResult det = toeplitz_determinant(sym, dim);
    const cplx phase_e0(0.0, -u_grid[i] * e0);
    table.chi[i] = det.det * std::exp(phase_e0);
    raw_log[i] = det.log_det + phase_e0;
    if (det.singular) table.singular[i] = true;
  });

  // Unwrap the determinant phase outward from the point nearest u=0, where
  // the principal branch is the true branch (chi(0)=1).
  std::size_t anchor = 0;
  for (std::size_t i = 1; i < u_grid.size(); ++i)
    if (std::abs(u_grid[i]) < std::abs(u_grid[anchor])) anchor = i;

  table.log_chi[anchor] = raw_log[anchor];
  auto unwrap_step = [&](std::size_t from, std::size_t to) {
    if (table.singular[to] || table.singular[from]) {
      table.log_chi[to] = raw_log[to];  // restart branch after a zero
      return;
    }
    const double prev = table.log_chi[from].imag();
    double arg = raw_log[to].imag();
    arg += kTwoPi * std::round((prev - arg) / kTwoPi);
    table.log_chi[to] = cplx(raw_log[to].real(), arg);
  };
  for (std::size_t i = anchor + 1; i < u_grid.size(); ++i) unwrap_step(i - 1, i);
  for (std::size_t i = anchor; i-- > 0;) unwrap_step(i + 1, i);
  return table;
}

cplx szego_asymptote(const ModeCoefficients& coeffs, double u, int dim) {
  coeffs.validate();
  double quad = 0.0;
  for (std::size_t i = 0; i < coeffs.a.size(); ++i) {
    const double r = static_cast<double>(i + 1);
    quad += r * (coeffs.a[i] * coeffs.a[i] + coeffs.b[i] * coeffs.b[i]);
  }
  return std::exp(cplx(-0.25 * u * u * quad, u * dim * coeffs.eps0));
}

}  // namespace qwork
