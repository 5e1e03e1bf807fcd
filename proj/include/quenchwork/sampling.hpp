#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "quenchwork/types.hpp"

namespace qwork {

enum class SampleMode { haar, surrogate };

SampleMode parse_sample_mode(const std::string& name);
std::string to_string(SampleMode mode);

struct SampleConfig {
  int matrix_dim = 1;            // N
  int max_power = 1;             // m: traces Tr U^1 .. Tr U^m
  int n_samples = 1;
  std::uint64_t seed = 0;
  SampleMode mode = SampleMode::haar;

  void validate() const;  // throws config_error naming the offending field
};

// One sample's trace vector, values[r-1] = Tr U^r.
struct TraceVector {
  std::vector<cplx> values;
  int matrix_dim = 0;  // N it was drawn at; 0 for surrogate draws
};

// Ginibre -> QR, then each column of Q rescaled by the phase of the matching
// diagonal entry of R. That diagonal correction is what makes the QR output
// Haar rather than merely unitary.
Eigen::MatrixXcd sample_haar_unitary(int dim, std::mt19937_64& stream);

// max_{jk} |(U^dagger U - I)_{jk}|
double unitarity_defect(const Eigen::MatrixXcd& u);

// One eigendecomposition, then powered eigenvalues.
TraceVector traces_of_powers(const Eigen::MatrixXcd& u, int max_power);

// Tr U^r replaced by CN(0, r), independent across r.
TraceVector sample_surrogate_traces(int max_power, std::mt19937_64& stream);

// n_samples trace vectors, sample i drawn from sample_stream(seed, i).
// Output order is by index for every worker count.
std::vector<TraceVector> sample_trace_batch(const SampleConfig& config,
                                            int n_threads = 1);

}  // namespace qwork
