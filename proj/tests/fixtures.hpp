#pragma once

#include <random>
#include <vector>

#include "quenchwork/sampling.hpp"

namespace qwork::testfix {

// One shared N=80 Haar batch (n=10^4, m=5). Computing it dominates the suite
// runtime, so every test that needs large-N trace statistics reuses it.
inline const std::vector<TraceVector>& haar80() {
  static const std::vector<TraceVector> batch = [] {
    SampleConfig cfg;
    cfg.matrix_dim = 80;
    cfg.max_power = 5;
    cfg.n_samples = 10000;
    cfg.seed = 424242;
    cfg.mode = SampleMode::haar;
    return sample_trace_batch(cfg, 1);
  }();
  return batch;
}

inline std::vector<TraceVector> haar_batch(int dim, int max_power, int n,
                                           std::uint64_t seed) {
  SampleConfig cfg;
  cfg.matrix_dim = dim;
  cfg.max_power = max_power;
  cfg.n_samples = n;
  cfg.seed = seed;
  cfg.mode = SampleMode::haar;
  return sample_trace_batch(cfg, 1);
}

inline std::vector<TraceVector> surrogate_batch(int max_power, int n,
                                                std::uint64_t seed) {
  SampleConfig cfg;
  cfg.matrix_dim = 1;
  cfg.max_power = max_power;
  cfg.n_samples = n;
  cfg.seed = seed;
  cfg.mode = SampleMode::surrogate;
  return sample_trace_batch(cfg, 1);
}

}  // namespace qwork::testfix
