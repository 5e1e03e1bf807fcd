#pragma once

#include <string>
#include <vector>

#include "quenchwork/types.hpp"

namespace qwork {

enum class CharfnMethod { toeplitz, product, mc, gaussian };

std::string to_string(CharfnMethod method);
CharfnMethod parse_charfn_method(const std::string& name);

// Sampled characteristic function chi_W on a u grid.
struct CharfnTable {
  std::vector<double> u;
  std::vector<cplx> chi;
  std::vector<cplx> log_chi;  // branch tracked continuously along the grid
  std::vector<bool> singular;  // genuine zeros of chi, log undefined there
  CharfnMethod method = CharfnMethod::toeplitz;
  double e0_shift = 0.0;  // mean of the work variable, N eps0 - E0

  // |chi(0) - 1| when the grid contains u=0 (invariant bound 1e-10).
  double chi0_defect() const;
  // max |chi(u) - conj(chi(-u))| over symmetric pairs (invariant bound 1e-8).
  double symmetry_defect() const;
};

struct DensityTable {
  std::vector<double> w;  // uniform grid (bin centers for histograms)
  std::vector<double> p;  // nonnegative densities
  double norm_defect = 0.0;    // |sum p dw - 1|
  double clipped_mass = 0.0;   // ringing below 0 that was clipped
  bool decay_warning = false;  // chi did not decay below 1e-8 at grid ends
  CharfnMethod method = CharfnMethod::gaussian;

  double spacing() const;
  double mass() const;
  double mean() const;
  double variance() const;
};

}  // namespace qwork
