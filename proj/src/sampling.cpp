#include "quenchwork/sampling.hpp"

#include <cmath>

#include "quenchwork/parallel.hpp"
#include "quenchwork/rng.hpp"

namespace qwork {

SampleMode parse_sample_mode(const std::string& name) {
  if (name == "haar") return SampleMode::haar;
  if (name == "surrogate") return SampleMode::surrogate;
  throw config_error("mode: expected 'haar' or 'surrogate', got '" + name + "'");
}

std::string to_string(SampleMode mode) {
  return mode == SampleMode::haar ? "haar" : "surrogate";
}

void SampleConfig::validate() const {
  if (matrix_dim < 1) throw config_error("matrix_dim: must be >= 1");
  if (max_power < 1) throw config_error("max_power: must be >= 1");
  if (n_samples < 1) throw config_error("n_samples: must be >= 1");
}

Eigen::MatrixXcd sample_haar_unitary(int dim, std::mt19937_64& stream) {
  if (dim < 1) throw config_error("sample_haar_unitary: dim must be >= 1");
  NormalSampler normal;
  Eigen::MatrixXcd g(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) g(i, j) = cplx(normal(stream), normal(stream));

  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::VectorXcd r_diag = qr.matrixQR().diagonal();
  for (int j = 0; j < dim; ++j) {
    const double mag = std::abs(r_diag(j));
    // Zero pivot has probability zero; leave the column's phase alone then.
    if (mag > 0.0) q.col(j) *= r_diag(j) / mag;
  }
  return q;
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
  const Eigen::MatrixXcd delta =
      u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return delta.cwiseAbs().maxCoeff();
}

TraceVector traces_of_powers(const Eigen::MatrixXcd& u, int max_power) {
  if (max_power < 1) throw config_error("traces_of_powers: max_power must be >= 1");
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(u, false);
  if (solver.info() != Eigen::Success)
    throw numerical_error("eigendecomposition failed for N=" +
                          std::to_string(u.rows()));
  const Eigen::VectorXcd lambda = solver.eigenvalues();

  TraceVector out;
  out.matrix_dim = static_cast<int>(u.rows());
  out.values.resize(static_cast<std::size_t>(max_power));
  Eigen::VectorXcd power = lambda;
  for (int r = 1; r <= max_power; ++r) {
    out.values[static_cast<std::size_t>(r - 1)] = power.sum();
    if (r < max_power) power = power.cwiseProduct(lambda);
  }
  return out;
}

TraceVector sample_surrogate_traces(int max_power, std::mt19937_64& stream) {
  if (max_power < 1)
    throw config_error("sample_surrogate_traces: max_power must be >= 1");
  NormalSampler normal;
  TraceVector out;
  out.matrix_dim = 0;
  out.values.resize(static_cast<std::size_t>(max_power));
  for (int r = 1; r <= max_power; ++r) {
    const double scale = std::sqrt(0.5 * r);  // CN(0, r): each part var r/2
    const double re = scale * normal(stream);
    const double im = scale * normal(stream);
    out.values[static_cast<std::size_t>(r - 1)] = cplx(re, im);
  }
  return out;
}

std::vector<TraceVector> sample_trace_batch(const SampleConfig& config,
                                            int n_threads) {
  config.validate();
  std::vector<TraceVector> out(static_cast<std::size_t>(config.n_samples));
  parallel_for(out.size(), n_threads, [&](std::size_t i) {
    std::mt19937_64 stream = sample_stream(config.seed, i);
    try {
      if (config.mode == SampleMode::haar) {
        const Eigen::MatrixXcd u = sample_haar_unitary(config.matrix_dim, stream);
        out[i] = traces_of_powers(u, config.max_power);
      } else {
        out[i] = sample_surrogate_traces(config.max_power, stream);
      }
    } catch (const numerical_error& err) {
      throw numerical_error(std::string(err.what()) + " (seed=" +
                            std::to_string(config.seed) + ", sample=" +
                            std::to_string(i) + ")");
    }
  });
  return out;
}

}  // namespace qwork
