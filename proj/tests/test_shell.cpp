#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>

#include "ngsl/ledger.hpp"
#include "ngsl/shell.hpp"

namespace {

using namespace ngsl;

// mpmath, 40 digits.
constexpr double k5Pi = 15.70796326794896619231321691639751442099;
constexpr double k8PiLn15 = 10.19044963935680424686613318689047268470;
constexpr double k8PiMilli = 0.02513274122871834590770114706623602307358;
constexpr double kInfoChange = -0.02261946710584651131693103235961242076622;
constexpr double kBound = -0.002513274122871834590770114706623602307358;

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

Shell shell_with_mass(double m) { return Shell{m, 2.0, 3.0, 1.0}; }

double quadrature_mass(const DiskProfile& profile, double a, double b) {
  auto integrand = [&](double r) { return profile.surface_density(r) * 2.0 * pi * r; };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, a, b, 15, 1e-14);
}

TEST(BuildShell, ConstantDensity) {
  const Shell s = build_shell(BlackHole(1.0), DiskProfile{1.0, 1.0, 0.0}, 1.0);
  EXPECT_EQ(s.r_inner, 2.0);
  EXPECT_EQ(s.r_outer, 3.0);
  EXPECT_EQ(s.window, 1.0);
  EXPECT_LT(rel_err(s.mass, k5Pi), 1e-14);
  const Shell s2 = build_shell(BlackHole(1.0), DiskProfile{0.25, 1.0, 0.0}, 1.0);
  EXPECT_LT(rel_err(s2.mass, 0.25 * k5Pi), 1e-14);
}

TEST(BuildShell, InverseSquareDensityIsLogarithmic) {
  const Shell s = build_shell(BlackHole(1.0), DiskProfile{1.0, 2.0, 2.0}, 1.0);
  EXPECT_LT(rel_err(s.mass, k8PiLn15), 1e-14);
}

TEST(BuildShell, TruncationAndZeroWidth) {
  const DiskProfile trunc{1.0, 1.0, 0.0, 2.5};
  const Shell s = build_shell(BlackHole(1.0), trunc, 10.0);
  EXPECT_EQ(s.r_outer, 2.5);
  EXPECT_LT(rel_err(s.mass, pi * (2.5 * 2.5 - 4.0)), 1e-14);
  // Disk ends inside the horizon: empty annulus.
  const Shell empty = build_shell(BlackHole(3.0), DiskProfile{1.0, 1.0, 0.0, 2.0}, 1.0);
  EXPECT_EQ(empty.r_outer, empty.r_inner);
  EXPECT_EQ(empty.mass, 0.0);
  EXPECT_EQ(build_shell(BlackHole(1.0), DiskProfile{}, 1.0).mass, 0.0);
}

TEST(BuildShell, RejectsNonPositiveWindow) {
  for (double w : {0.0, -1.0, std::nan("")}) {
    try {
      (void)build_shell(BlackHole(1.0), DiskProfile{1.0}, w);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::invalid_window);
    }
  }
}

TEST(BuildShell, MatchesQuadratureOracle) {
  for (double p : {0.0, 1.0, 2.0, 3.0, 1.999999, 2.5}) {
    for (double m : {0.5, 1.0, 10.0}) {
      for (double window : {0.1, 1.0, 25.0}) {
        const DiskProfile profile{0.3, 2.0 * m, p};
        const Shell s = build_shell(BlackHole(m), profile, window);
        const double oracle = quadrature_mass(profile, s.r_inner, s.r_outer);
        EXPECT_LT(rel_err(s.mass, oracle), 1e-10) << "p=" << p << " M=" << m << " w=" << window;
      }
    }
  }
}

TEST(ShellTerms, ReferenceValues) {
  const BlackHole bh(1.0);
  EXPECT_LT(rel_err(shell_entropy_change(bh, 0.001), -k8PiMilli), 1e-15);
  EXPECT_EQ(shell_entropy_change(bh, 0.0), 0.0);
  EXPECT_LT(rel_err(shell_info_change(bh, shell_with_mass(0.1), 0.001), kInfoChange), 1e-14);
  EXPECT_EQ(shell_info_change(bh, shell_with_mass(1.0), 0.37), 0.0);
  EXPECT_EQ(shell_info_change(bh, shell_with_mass(0.1), 0.0), 0.0);
  EXPECT_LT(rel_err(channel_width_bound(shell_with_mass(0.1), 0.001), kBound), 1e-15);
  EXPECT_LT(rel_err(channel_width_bound(shell_with_mass(0.1), -0.001), -kBound), 1e-15);
  EXPECT_EQ(channel_width_bound(shell_with_mass(0.0), 0.5), 0.0);
}

TEST(ShellTerms, ExteriorEntropyMirrorsHole) {
  for (int i = 0; i < 500; ++i) {
    const double m = 1e-2 * std::pow(1e6, i / 499.0);
    const double dM = 1e-3 * m * (i % 2 ? 1.0 : -1.0);
    EXPECT_EQ(shell_entropy_change(BlackHole(m), dM),
              -bh_entropy_change(BlackHole(m), dM, LedgerMode::differential));
  }
}

TEST(ShellResidual, SaturationAndLinearity) {
  const BlackHole bh(1.0);
  const Shell s = shell_with_mass(0.1);
  const double bound = channel_width_bound(s, 0.001);
  EXPECT_EQ(shell_ngsl_residual(bh, s, 0.001, bound), 0.0);
  const double eps = 1e-6;
  EXPECT_NEAR(shell_ngsl_residual(bh, s, 0.001, bound - eps), eps, 1e-18);
  EXPECT_NEAR(shell_ngsl_residual(bh, s, 0.001, bound + eps), -eps, 1e-18);
}

TEST(ShellResidual, AlgebraicReduction) {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double m = 0.1 + 10.0 * u(rng);
    const double ms = m * u(rng);
    const double dM = (u(rng) - 0.5) * 2e-2 * m;
    const double dI = (u(rng) - 0.5) * 0.2;
    const BlackHole bh(m);
    const Shell s = shell_with_mass(ms);
    const double residual = shell_ngsl_residual(bh, s, dM, dI);
    const double naive = shell_entropy_change(bh, dM) - shell_info_change(bh, s, dM) - dI;
    EXPECT_NEAR(residual, naive, 1e-12);
    EXPECT_NEAR(residual, channel_width_bound(s, dM) - dI, 1e-12);
    const double bound = channel_width_bound(s, dM);
    EXPECT_EQ(shell_ngsl_residual(bh, s, dM, bound), 0.0);
    EXPECT_GT(shell_ngsl_residual(bh, s, dM, std::nextafter(bound, -INFINITY)), 0.0);
    EXPECT_LT(shell_ngsl_residual(bh, s, dM, std::nextafter(bound, INFINITY)), 0.0);
  }
}

TEST(ChannelWidthBound, LinearInShellMassAndTransit) {
  for (double ms : {0.01, 0.1, 1.0}) {
    for (double dM : {1e-4, 1e-3, 1e-2}) {
      const double base = std::abs(channel_width_bound(shell_with_mass(ms), dM));
      EXPECT_LT(rel_err(std::abs(channel_width_bound(shell_with_mass(2 * ms), dM)), 2 * base), 1e-15);
      EXPECT_LT(rel_err(std::abs(channel_width_bound(shell_with_mass(ms), 3 * dM)), 3 * base), 1e-15);
      EXPECT_LT(rel_err(std::abs(channel_width_bound(shell_with_mass(ms), -dM)), base), 1e-15);
    }
  }
}

TEST(ChannelWidthBound, ZeroShellAllowsOnlyLoss) {
  const BlackHole bh(1.0);
  const Shell none = shell_with_mass(0.0);
  for (double dM : {1e-3, -1e-3}) {
    EXPECT_EQ(channel_width_bound(none, dM), 0.0);
    EXPECT_GE(shell_ngsl_residual(bh, none, dM, -1e-9), 0.0);
    EXPECT_EQ(shell_ngsl_residual(bh, none, dM, 0.0), 0.0);
    EXPECT_LT(shell_ngsl_residual(bh, none, dM, 1e-9), 0.0);
  }
}

TEST(DiskProfile, Validation) {
  EXPECT_NO_THROW(validate(DiskProfile{}));
  EXPECT_THROW(validate(DiskProfile{-1.0}), Error);
  EXPECT_THROW(validate(DiskProfile{1.0, 0.0}), Error);
  EXPECT_THROW(validate(DiskProfile{1.0, 2.0, 0.0, 1.0}), Error);
}

}  // namespace
