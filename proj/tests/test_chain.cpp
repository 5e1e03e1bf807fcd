#include <doctest.h>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

#include "quenchwork/chain.hpp"
#include "quenchwork/rng.hpp"
#include "quenchwork/toeplitz.hpp"

using namespace qwork;

TEST_CASE("xx chain coefficients: a_r = 2 J_r, eps0 = -mu") {
  XXChain nearest{{1.0}, 0.0};
  const ModeCoefficients c = xx_mode_coefficients(nearest);
  CHECK(c.a == std::vector<double>{2.0});
  CHECK(c.b == std::vector<double>{0.0});
  CHECK(c.eps0 == 0.0);

  XXChain three{{0.5, 0.35, 0.25}, 0.0};
  const ModeCoefficients c3 = xx_mode_coefficients(three);
  CHECK(c3.a == std::vector<double>{1.0, 0.7, 0.5});

  XXChain empty{{}, 1.0};
  const ModeCoefficients ce = xx_mode_coefficients(empty);
  CHECK(ce.eps0 == -1.0);
  CHECK(ce.a.empty());
}

TEST_CASE("bogoliubov angle") {
  for (double k : {0.3, 1.0, 2.5}) {
    CHECK(bogoliubov_angle(0.0, 1.7, k) == 0.0);
    CHECK(bogoliubov_angle(0.0, 4.0, k) == 0.0);
  }
  // on the h = cos k locus with positive gamma sin k, the angle is pi/4
  const double k = 0.9;
  CHECK(bogoliubov_angle(0.8, std::cos(k), k) == doctest::Approx(kPi / 4));
  CHECK(bogoliubov_angle(1.0, 2.0, kPi / 2) ==
        doctest::Approx(0.5 * std::atan2(1.0, 2.0)));
}

TEST_CASE("sector momenta are the antiperiodic grid in (0, pi)") {
  QuenchXY q{0.5, 1.5, 1.0, 0.5, 8};
  const auto ks = q.sector_momenta();
  REQUIRE(ks.size() == 4);
  for (std::size_t j = 0; j < ks.size(); ++j) {
    CHECK(ks[j] == doctest::Approx((2.0 * (j + 1) - 1.0) * kPi / 8));
    CHECK(ks[j] > 0.0);
    CHECK(ks[j] < kPi);
  }
  QuenchXY odd{0.0, 1.0, 0.0, 1.0, 7};
  CHECK_THROWS_AS(odd.validate(), config_error);
}

TEST_CASE("loschmidt product: t=0 and the no-quench pure phase") {
  QuenchXY q{0.5, 1.5, 1.0, 0.5, 32};
  CHECK(loschmidt_xy_product(q, 0.0) == cplx(1.0, 0.0));

  QuenchXY same{0.7, 1.4, 0.7, 1.4, 32};
  double energy = 0.0;
  for (double k : same.sector_momenta())
    energy += xy_dispersion(0.7, 1.4, k);
  for (double t : {0.3, 1.1, 4.0}) {
    const cplx g = loschmidt_xy_product(same, t);
    CHECK(std::abs(std::abs(g) - 1.0) <= 1e-12);
    CHECK(std::abs(g - std::exp(cplx(0.0, -energy * t))) <= 1e-10);
  }
}

TEST_CASE("XX limit: |G(t)| = 1 on a t grid") {
  QuenchXY xx{0.0, 2.0, 0.0, 1.5, 64};
  for (int i = 0; i <= 50; ++i) {
    const double t = 0.2 * i;
    CHECK(std::abs(std::abs(loschmidt_xy_product(xx, t)) - 1.0) <= 1e-12);
  }
}

TEST_CASE("block symbol identity: trivial cases") {
  QuenchXY q{0.5, 1.5, 1.0, 0.5, 16};
  const BlockSymbolCheck at0 = block_symbol_check(q, 0.0, 1.1);
  CHECK(std::abs(at0.det_phi - 1.0) < 1e-14);
  CHECK(std::abs(at0.factor_sq - 1.0) < 1e-14);

  QuenchXY same{0.7, 1.4, 0.7, 1.4, 16};
  const double k = 0.8, t = 0.6;
  const double eps = xy_dispersion(0.7, 1.4, k);
  const BlockSymbolCheck noq = block_symbol_check(same, t, k);
  const cplx expected = std::exp(cplx(0.0, -2.0 * eps * t));
  CHECK(std::abs(noq.det_phi - expected) < 1e-12);
  CHECK(std::abs(noq.factor_sq - expected) < 1e-12);
}

TEST_CASE("block symbol identity: generic quench against matrix exponential") {
  // gamma 0.5 -> 1.0, h 1.5 -> 0.5 at t=0.7, k=1.1, rebuilt with an
  // independent Eigen matrix exponential instead of the closed form.
  const QuenchXY q{0.5, 1.5, 1.0, 0.5, 16};
  const double t = 0.7;

  auto pair_det_expm = [&](double k) {
    const double dix = q.gamma_i * std::sin(k), diz = q.h_i - std::cos(k);
    const double dfx = q.gamma_f * std::sin(k), dfz = q.h_f - std::cos(k);
    const double ni = std::hypot(dix, diz), nf = std::hypot(dfx, dfz);
    Eigen::Matrix2cd sig_i, sig_f;
    sig_i << diz / ni, dix / ni, dix / ni, -diz / ni;
    sig_f << dfz / nf, dfx / nf, dfx / nf, -dfz / nf;
    const Eigen::Matrix2cd c0 =
        0.5 * (Eigen::Matrix2cd::Identity() - sig_i);
    const Eigen::Matrix2cd gen = cplx(0.0, 1.0) * (2.0 * nf * t) * sig_f;
    const Eigen::Matrix2cd evo = gen.exp();
    return ((Eigen::Matrix2cd::Identity() - c0) + c0 * evo).determinant();
  };

  const cplx oracle = pair_det_expm(1.1) * pair_det_expm(-1.1);
  const BlockSymbolCheck check = block_symbol_check(q, t, 1.1);
  CHECK(std::abs(check.det_phi - oracle) <= 1e-12);
  CHECK(std::abs(check.det_phi - check.factor_sq) <= 1e-10);
}

TEST_CASE("block symbol identity holds on 100 random quenches") {
  std::mt19937_64 rng(13);
  auto uniform = [&](double lo, double hi) {
    return lo + (hi - lo) * NormalSampler::uniform(rng);
  };
  for (int rep = 0; rep < 100; ++rep) {
    QuenchXY q;
    q.gamma_i = uniform(-1.5, 1.5);
    q.gamma_f = uniform(-1.5, 1.5);
    q.h_i = uniform(-2.0, 2.0);
    q.h_f = uniform(-2.0, 2.0);
    q.sites = 16;
    const double t = uniform(0.0, 5.0);
    const double k = uniform(1e-3, kPi - 1e-3);
    const BlockSymbolCheck check = block_symbol_check(q, t, k);
    CAPTURE(rep);
    CHECK(std::abs(check.det_phi - check.factor_sq) <= 1e-10);
  }
}

TEST_CASE("effective dispersion: XX point gives 4 - 2 cos k") {
  QuenchXY q{0.0, 2.0, 0.0, 2.0, 64};
  const EffectiveDispersion eff = effective_dispersion(q, 4096);
  REQUIRE(eff.alpha_tilde.size() >= 2);
  CHECK(std::abs(eff.alpha_tilde[0] - cplx(4.0, 0.0)) <= 1e-12);
  CHECK(std::abs(eff.alpha_tilde[1] - cplx(-1.0, 0.0)) <= 1e-12);
  for (std::size_t m = 2; m < eff.alpha_tilde.size(); ++m)
    CHECK(std::abs(eff.alpha_tilde[m]) <= 1e-12);
  CHECK(eff.sigma2 == doctest::Approx(2.0).epsilon(1e-10));

  const ModeCoefficients c = eff.to_mode_coefficients();
  CHECK(c.eps0 == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(c.a[0] == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("effective dispersion: within-phase quench decays exponentially") {
  QuenchXY q{1.0, 2.0, 1.0, 1.5, 64};
  const EffectiveDispersion eff = effective_dispersion(q, 4096);
  REQUIRE(eff.alpha_tilde.size() >= 6);
  // least-squares slope of log|alpha_m| vs m must be negative
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (std::size_t m = 1; m < eff.alpha_tilde.size(); ++m) {
    const double mag = std::abs(eff.alpha_tilde[m]);
    if (mag < 1e-13) continue;
    const double x = static_cast<double>(m), y = std::log(mag);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  REQUIRE(count >= 4);
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  CHECK(slope < -0.1);
}

TEST_CASE("effective dispersion: reality alpha_{-m} = conj(alpha_m)") {
  QuenchXY q{0.5, 1.8, 1.2, 0.9, 64};
  const int grid = 4096;
  const EffectiveDispersion eff = effective_dispersion(q, grid);

  // direct DFT oracle at negative m
  for (int m = 1; m <= 5 && m < static_cast<int>(eff.alpha_tilde.size()); ++m) {
    cplx neg(0.0, 0.0);
    for (int j = 0; j < grid; ++j) {
      const double k = kTwoPi * j / grid;
      const double dtheta = bogoliubov_angle(q.gamma_f, q.h_f, k) -
                            bogoliubov_angle(q.gamma_i, q.h_i, k);
      const double val =
          xy_dispersion(q.gamma_f, q.h_f, k) * std::cos(2.0 * dtheta);
      neg += val * std::exp(cplx(0.0, m * k));  // e^{-i(-m)k}
    }
    neg /= static_cast<double>(grid);
    CAPTURE(m);
    CHECK(std::abs(neg - std::conj(eff.alpha_tilde[static_cast<std::size_t>(m)])) <=
          1e-13);
  }
}

TEST_CASE("sigma2 equals the induced coefficients' theoretical variance") {
  QuenchXY q{0.5, 1.8, 1.2, 0.9, 64};
  const EffectiveDispersion eff = effective_dispersion(q, 4096);
  const double var = theoretical_variance(eff.to_mode_coefficients());
  CHECK(eff.sigma2 == doctest::Approx(var).epsilon(1e-12));
}

TEST_CASE("small-u consistency: product formula vs Toeplitz determinant") {
  const QuenchXY q{1.0, 2.0, 1.0, 1.5, 64};
  const int dim = 32;  // L/2
  const EffectiveDispersion eff = effective_dispersion(q, 4096);
  const ModeCoefficients coeffs = eff.to_mode_coefficients();

  // first-order phases differ by the (exponentially small) gap between the
  // momentum sum and its integral; align them explicitly
  double sector_sum = 0.0;
  for (double k : q.sector_momenta()) {
    const double dtheta = bogoliubov_angle(q.gamma_f, q.h_f, k) -
                          bogoliubov_angle(q.gamma_i, q.h_i, k);
    sector_sum += xy_dispersion(q.gamma_f, q.h_f, k) * std::cos(2.0 * dtheta);
  }
  const double phase_gap = sector_sum - dim * coeffs.eps0;

  double diff_at[3];
  const double us[3] = {0.05, 0.1, 0.2};
  for (int i = 0; i < 3; ++i) {
    const double u = us[i];
    const cplx product = loschmidt_xy_product(q, -u);
    const SymbolTable sym = symbol_from_dispersion(
        coeffs, u, default_grid_size(coeffs.max_mode(), dim));
    const cplx toeplitz =
        toeplitz_determinant(sym, dim).det * std::exp(cplx(0.0, u * phase_gap));
    diff_at[i] = std::abs(product - toeplitz);
  }
  // O(u^2) agreement: frozen constant with margin, plus the scaling check
  for (int i = 0; i < 3; ++i) {
    CAPTURE(us[i]);
    CHECK(diff_at[i] <= 2.0 * us[i] * us[i]);
  }
  CHECK(diff_at[2] / diff_at[0] > 8.0);   // quadratic would give 16
  CHECK(diff_at[2] / diff_at[0] < 32.0);
}

TEST_CASE("charfn_xy_product: chi(0)=1 and no-quench is a delta at 0") {
  QuenchXY same{0.7, 1.4, 0.7, 1.4, 32};
  std::vector<double> grid;
  for (int i = -10; i <= 10; ++i) grid.push_back(0.3 * i);
  const CharfnTable table = charfn_xy_product(same, grid);
  CHECK(table.chi0_defect() <= 1e-12);
  // no quench: W identically zero, chi identically one
  for (const cplx& chi : table.chi) CHECK(std::abs(chi - 1.0) <= 1e-10);
  CHECK(std::abs(table.e0_shift) <= 1e-10);
}
