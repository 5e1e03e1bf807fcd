#pragma once

#include "quenchwork/tables.hpp"
#include "quenchwork/types.hpp"
#include "quenchwork/work.hpp"

namespace qwork {

// P(w) = (1/2pi) int exp(-iuw) chi(u) du on a uniform w grid of w_points
// points spanning [c - w_span, c + w_span], c = table.e0_shift. Trapezoid
// weights in u; negative ringing below 1e-6 clipped and reported.
DensityTable invert_charfn(const CharfnTable& table, int w_points,
                           double w_span, int n_threads = 1);

// Freedman-Diaconis histogram density of the work samples shifted by
// e0_shift (the N eps0 - E0 offset of the pushforward law).
DensityTable mc_density(const WorkSampleBatch& batch, double e0_shift);

// Normal density with mean N eps0 - E0 and the coefficient variance.
DensityTable gaussian_reference(const ModeCoefficients& coeffs, double e0,
                                int dim, int w_points = 2049);

// Interpolated CDF of a density table; used for KS comparisons.
double density_cdf(const DensityTable& table, double w);

}  // namespace qwork
