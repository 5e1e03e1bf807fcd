#pragma once

#include <vector>

#include "quenchwork/tables.hpp"
#include "quenchwork/types.hpp"
#include "quenchwork/work.hpp"

namespace qwork {

// Symbol f(theta) = exp(i u eps(theta)) sampled on a uniform grid together
// with its Fourier coefficients c_k (1/M-normalized forward transform).
struct SymbolTable {
  int grid_size = 0;            // M, power of two
  std::vector<double> theta;    // M uniform angles on [0, 2pi)
  std::vector<cplx> values;     // symbol samples
  std::vector<cplx> fourier;    // FFT order: fourier[k mod M] = c_k
  int max_coeff() const { return grid_size / 2 - 1; }
  cplx coeff(int k) const;      // c_k for |k| <= max_coeff()
};

SymbolTable symbol_from_dispersion(const ModeCoefficients& coeffs, double u,
                                   int grid_size);

struct ToeplitzResult {
  int dim = 0;
  cplx log_det;   // principal branch; continuity in u handled by the sweep
  cplx det;
  bool singular = false;  // exactly singular: legitimate zero of chi
};

// det of the dim x dim matrix with entries c_{j-k}; dense LU with partial
// pivoting, log accumulated from the pivots so near-zero determinants do
// not underflow.
ToeplitzResult toeplitz_determinant(const SymbolTable& symbol, int dim);

// chi_W(u) = exp(-i u E0) D_N(exp(i u eps)) over a u grid, with the log
// branch unwrapped outward from the grid point nearest u=0.
CharfnTable charfn_toeplitz(const ModeCoefficients& coeffs, double e0,
                            const std::vector<double>& u_grid, int dim,
                            int n_threads = 1);

// Strong Szego asymptote exp(i u N eps0 - u^2/4 sum r (a_r^2+b_r^2)).
cplx szego_asymptote(const ModeCoefficients& coeffs, double u, int dim);

// Default transform size for the engine: max(4096, 16 m, 8 N) rounded up
// to a power of two.
int default_grid_size(int max_mode, int dim);

}  // namespace qwork
