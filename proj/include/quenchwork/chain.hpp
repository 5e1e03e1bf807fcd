#pragma once

#include <vector>

#include "quenchwork/tables.hpp"
#include "quenchwork/types.hpp"
#include "quenchwork/work.hpp"

namespace qwork {

// Finite-range number-conserving chain: hoppings J_r and chemical potential.
struct XXChain {
  std::vector<double> hoppings;
  double mu = 0.0;
};

// a_r = 2 J_r, b_r = 0, eps0 = -mu.
ModeCoefficients xx_mode_coefficients(const XXChain& chain);

// Sudden quench of the anisotropic chain in a transverse field. The momentum
// sector is the antiperiodic grid k_j = (2j-1) pi / L, j = 1..L/2 (even
// parity ground-state sector).
struct QuenchXY {
  double gamma_i = 0.0;
  double h_i = 0.0;
  double gamma_f = 0.0;
  double h_f = 0.0;
  int sites = 2;  // L, even

  void validate() const;
  std::vector<double> sector_momenta() const;
};

// theta_k = 1/2 atan2(gamma sin k, h - cos k); continuous branch with
// 2 theta_k in (-pi, pi].
double bogoliubov_angle(double gamma, double h, double k);

// eps(k) = 2 sqrt((h - cos k)^2 + (gamma sin k)^2), the positive branch.
double xy_dispersion(double gamma, double h, double k);

// Initial energy entering chi_W(u) = exp(-iu E0) G(-u). The product formula
// below gives the unquenched pair the phase exp(-i eps_f(k) t), so the
// matching initial energy is +sum_{k>0} eps_i(k); any other choice leaves a
// spurious drift in the no-quench work law.
double xy_initial_energy(const QuenchXY& quench);

// G(t) = prod_{k>0} [cos(eps_f t) - i sin(eps_f t) cos(2 dtheta_k)].
cplx loschmidt_xy_product(const QuenchXY& quench, double t);

// Per-momentum factor of the product above.
cplx loschmidt_xy_factor(const QuenchXY& quench, double t, double k);

// chi_W over a u grid from the product formula (method tag "product").
CharfnTable charfn_xy_product(const QuenchXY& quench,
                              const std::vector<double>& u_grid);

struct BlockSymbolCheck {
  cplx det_phi;    // det of the explicitly built Nambu-pair blocks at (k,-k)
  cplx factor_sq;  // squared scalar product-formula factor
};

// Builds C0 = (I - dhat_i . sigma)/2 and the 2x2 evolution block at k and -k
// explicitly, and returns det[(I-C0)+C0 E] over the pair next to the squared
// scalar factor. Used as a per-k identity test.
BlockSymbolCheck block_symbol_check(const QuenchXY& quench, double t, double k);

// Fourier data of eps_tilde(k) = eps_f(k) cos(2 dtheta_k).
struct EffectiveDispersion {
  std::vector<cplx> alpha_tilde;  // index m = 0..m_max; alpha_{-m} = conj
  double sigma2 = 0.0;            // 2 sum_{m>=1} m |alpha_m|^2

  ModeCoefficients to_mode_coefficients() const;
};

EffectiveDispersion effective_dispersion(const QuenchXY& quench, int grid_size);

}  // namespace qwork
