#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "tidg/errors.hpp"
#include "tidg/material.hpp"

using namespace tidg;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent tensor expression of C : eps, written out component by component.
Mat2 reference_stress(const MaterialParams& m, double angle, const Mat2& e) {
  const double c = std::cos(angle), s = std::sin(angle);
  const double M[2][2] = {{c * c, c * s}, {c * s, s * s}};
  const double tr = e(0, 0) + e(1, 1);
  double Me = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) Me += M[i][j] * e(i, j);
  Mat2 out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double delta = i == j ? 1.0 : 0.0;
      double eM = 0.0, Mexp = 0.0;
      for (int k = 0; k < 2; ++k) {
        eM += e(i, k) * M[k][j];
        Mexp += M[i][k] * e(k, j);
      }
      out(i, j) = m.lambda * tr * delta + 2.0 * m.mu_t * e(i, j) + m.beta * Me * M[i][j] +
                  m.alpha * (Me * delta + tr * M[i][j]) + m.gamma * (eM + Mexp);
    }
  }
  return out;
}

EngineeringConstants random_stable(std::mt19937& rng) {
  std::uniform_real_distribution<double> logp(0.0, 4.0), nu(0.0, 0.45), q(0.5, 3.0), E(0.5, 500.0);
  for (;;) {
    EngineeringConstants ec{E(rng), std::pow(10.0, logp(rng)), q(rng), nu(rng), nu(rng)};
    if (stability_check(ec).passed()) return ec;
  }
}

}  // namespace

TEST(Material, IsotropicUnitModulus) {
  const MaterialParams m = derive_params({1.0, 1.0, 1.0, 0.3, 0.3});
  EXPECT_NEAR(m.lambda, 0.57692307692307692, 1e-15);
  EXPECT_NEAR(m.mu_t, 0.38461538461538462, 1e-15);
  EXPECT_NEAR(m.mu_l, 0.38461538461538462, 1e-15);
  EXPECT_NEAR(m.lambda, 0.3 / (1.3 * 0.4), 1e-15);  // classic Lame value
  EXPECT_EQ(m.alpha, 0.0);
  EXPECT_NEAR(m.beta, 0.0, 1e-15);
  EXPECT_EQ(m.gamma, 0.0);
}

TEST(Material, ShearRatioTwo) {
  const MaterialParams m = derive_params({1.0, 1.0, 2.0, 0.3, 0.3});
  EXPECT_NEAR(m.gamma, 0.76923076923076923, 1e-15);
  EXPECT_EQ(m.gamma, 2.0 * (m.mu_l - m.mu_t));
  EXPECT_NEAR(m.beta, -1.5384615384615385, 1e-14);
}

TEST(Material, GeneralConstantsMatchHighPrecisionOracle) {
  // 40-digit evaluation of the conversion formulas.
  const MaterialParams m = derive_params({2.5, 7.0, 1.7, 0.2, 0.35});
  EXPECT_NEAR(m.lambda, 0.59232026143790849673, 1e-14);
  EXPECT_NEAR(m.mu_t, 1.0416666666666666667, 1e-14);
  EXPECT_NEAR(m.mu_l, 1.7708333333333333333, 1e-14);
  EXPECT_NEAR(m.alpha, 0.55147058823529411765, 1e-14);
  EXPECT_NEAR(m.beta, 11.605392156862745098, 1e-13);
  EXPECT_NEAR(m.gamma, 1.4583333333333333333, 1e-14);
}

TEST(Material, SpecialFormMatchesGeneralForm) {
  const MaterialParams a = derive_params_special(1.0, 1.0, 0.3);
  const MaterialParams b = derive_params({1.0, 1.0, 1.0, 0.3, 0.3});
  EXPECT_NEAR(a.lambda, b.lambda, 1e-15);
  EXPECT_NEAR(a.mu_t, b.mu_t, 1e-15);
  EXPECT_NEAR(a.beta, 0.0, 1e-15);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> logp(0.0, 6.0), nu(0.0, 0.49);
  for (int i = 0; i < 50; ++i) {
    const double p = std::pow(10.0, logp(rng)), v = nu(rng);
    if (!stability_check({3.0, p, 1.0, v, v}).passed()) continue;
    const MaterialParams s = derive_params_special(3.0, p, v);
    const MaterialParams g = derive_params({3.0, p, 1.0, v, v});
    EXPECT_NEAR(s.lambda, g.lambda, 1e-11 * std::abs(g.lambda) + 1e-14);
    EXPECT_NEAR(s.alpha, g.alpha, 1e-11 * std::abs(g.alpha) + 1e-14);
    EXPECT_NEAR(s.beta, g.beta, 1e-11 * std::abs(g.beta) + 1e-14);
    EXPECT_EQ(s.gamma, 0.0);
  }
}

TEST(Material, BenchmarkConstantsOracle) {
  const MaterialParams m = derive_params_special(250.0, 10.0, 0.49995);
  EXPECT_NEAR(m.beta / 250.0, 8.9999666766651483568, 1e-9);
  EXPECT_NEAR(m.lambda, 194.4046347832068946, 1e-8);
  EXPECT_NEAR(m.mu_t, 83.336111203706790226, 1e-11);
  EXPECT_NEAR(m.alpha, 83.308337129108098858, 1e-8);
}

TEST(Material, BetaGrowsLinearlyInP) {
  const double b1 = derive_params_special(1.0, 1e8, 0.3).beta;
  const double b2 = derive_params_special(1.0, 2e8, 0.3).beta;
  EXPECT_NEAR(b2 / b1, 2.0000000103956045, 1e-9);
}

TEST(Material, TrivialAnisotropyVanishesAtUnitRatios) {
  for (double v : {0.0, 0.2, 0.3, 0.45, 0.49995}) {
    const MaterialParams m = derive_params({5.0, 1.0, 1.0, v, v});
    EXPECT_NEAR(m.alpha, 0.0, 1e-12 * m.lambda);
    EXPECT_NEAR(m.beta, 0.0, 1e-12 * m.lambda);
    EXPECT_EQ(m.gamma, 0.0);
  }
}

TEST(Material, DegenerateDenominatorThrows) {
  // (1 - nu_t) p = 2 nu_l^2 exactly.
  EXPECT_THROW(derive_params({1.0, 0.5, 1.0, 0.0, 0.5}), Error);
  try {
    derive_params({1.0, 0.5, 1.0, 0.0, 0.5});
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateDenominator);
  }
}

TEST(Material, StabilityExamples) {
  EXPECT_TRUE(stability_check({1.0, 1.0, 1.0, 0.49995, 0.49995}).passed());
  const StabilityReport low_p = stability_check({1.0, 0.5, 1.0, 0.49995, 0.49995});
  EXPECT_FALSE(low_p.passed());
  EXPECT_FALSE(low_p.extensional_determinant);
  const StabilityReport negative = stability_check({-1.0, 1.0, 1.0, 0.3, 0.3});
  EXPECT_FALSE(negative.passed());
  EXPECT_FALSE(negative.E_t_positive);
}

TEST(Material, FiberDirectionInvariants) {
  for (double t : {0.0, 0.3, kPi / 3, kPi / 2, 2.5, kPi, 4.0, -1.2}) {
    const FiberDirection f(t);
    EXPECT_NEAR(f.a().norm(), 1.0, 1e-14);
    EXPECT_NEAR(f.M().trace(), 1.0, 1e-14);
    EXPECT_EQ(f.M()(0, 1), f.M()(1, 0));
    EXPECT_NEAR(f.M().determinant(), 0.0, 1e-15);
    EXPECT_GE(f.angle(), 0.0);
    EXPECT_LT(f.angle(), kPi);
  }
}

TEST(Material, FiberSignFlipIsBitIdentical) {
  const MaterialParams m = derive_params({250.0, 1e5, 1.0, 0.49995, 0.49995});
  for (double t : {kPi / 3, 3 * kPi / 4, 0.1, kPi / 24 * 7}) {
    const FiberDirection f(t), g(t + kPi);
    EXPECT_EQ(f.M(), g.M());
    EXPECT_EQ(voigt_matrix(m, f).entries, voigt_matrix(m, g).entries);
  }
}

TEST(Material, IsotropicVoigtForm) {
  const MaterialParams m = MaterialParams::isotropic(2.0, 0.7);
  const Mat3 C = voigt_matrix(m, FiberDirection(1.1)).entries;
  Mat3 expected;
  expected << 3.4, 2.0, 0.0, 2.0, 3.4, 0.0, 0.0, 0.0, 0.7;
  EXPECT_LT((C - expected).norm(), 1e-14);
}

TEST(Material, UniaxialFibreStress) {
  const MaterialParams m = derive_params({2.5, 7.0, 1.7, 0.2, 0.35});
  const Mat3 C = voigt_matrix(m, FiberDirection(0.0)).entries;
  const Eigen::Vector3d sigma = C * Eigen::Vector3d(1.0, 0.0, 0.0);
  EXPECT_NEAR(sigma(0), m.lambda + 2 * m.mu_t + m.beta + 2 * m.alpha + 2 * m.gamma, 1e-13);
  EXPECT_NEAR(sigma(2), 0.0, 1e-14);
}

TEST(Material, VoigtMatchesTensorPath) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0), ang(0.0, kPi);
  for (int i = 0; i < 200; ++i) {
    const MaterialParams m = derive_params(random_stable(rng));
    const double t = ang(rng);
    const FiberDirection f(t);
    Mat2 eps;
    eps << u(rng), u(rng), 0.0, u(rng);
    eps(1, 0) = eps(0, 1);
    const Mat2 ref = reference_stress(m, f.angle(), eps);
    const Mat2 via_voigt = voigt_to_stress(voigt_matrix(m, f).entries * strain_to_voigt(eps));
    const Mat2 direct = apply_stress(m, f, eps);
    const double scale = ref.norm() + 1e-300;
    EXPECT_LT((via_voigt - ref).norm() / scale, 1e-13);
    EXPECT_LT((direct - ref).norm() / scale, 1e-13);
  }
}

TEST(Material, VoigtSymmetricAndPositiveWhenStable) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ang(0.0, kPi);
  for (int i = 0; i < 200; ++i) {
    const MaterialParams m = derive_params(random_stable(rng));
    const VoigtMatrix vm = voigt_matrix(m, FiberDirection(ang(rng)));
    const double scale = vm.entries.cwiseAbs().maxCoeff();
    EXPECT_LE((vm.entries - vm.entries.transpose()).cwiseAbs().maxCoeff(), 1e-14 * scale);
    EXPECT_GT(min_eigenvalue(vm), 0.0);
  }
}

TEST(Material, StressOfZeroAndIdentity) {
  const MaterialParams m = MaterialParams::isotropic(1.5, 0.5);
  const FiberDirection f(0.4);
  EXPECT_EQ(apply_stress(m, f, Mat2::Zero()), Mat2::Zero());
  EXPECT_LT((apply_stress(m, f, Mat2::Identity()) - 4.0 * Mat2::Identity()).norm(), 1e-14);
}

TEST(Material, ComplianceInvertsStiffness) {
  const MaterialParams iso = MaterialParams::isotropic(1.0, 0.25);
  EXPECT_NEAR(compliance_matrix(iso, FiberDirection(0.3))(2, 2), 4.0, 1e-13);

  const MaterialParams m = derive_params({1500.0, 1e4, 1.0, 0.49995, 0.49995});
  for (double t : {0.0, kPi / 2}) {
    const Mat3 S = compliance_matrix(m, FiberDirection(t));
    EXPECT_NEAR(S(2, 0), 0.0, 1e-12 * S.cwiseAbs().maxCoeff());
  }
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> ang(0.0, kPi);
  for (int i = 0; i < 50; ++i) {
    const MaterialParams r = derive_params(random_stable(rng));
    const FiberDirection f(ang(rng));
    const Mat3 C = voigt_matrix(r, f).entries;
    const Mat3 S = compliance_matrix(r, f);
    EXPECT_LT((S * C - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Material, MinEigenvalueExamples) {
  VoigtMatrix vm;
  vm.entries << 3, 1, 0, 1, 3, 0, 0, 0, 1;
  EXPECT_NEAR(min_eigenvalue(vm), 1.0, 1e-14);
  vm.entries = Mat3::Identity();
  EXPECT_NEAR(min_eigenvalue(vm), 1.0, 1e-15);
  vm.entries = Eigen::Vector3d(5, 2, 7).asDiagonal();
  EXPECT_NEAR(min_eigenvalue(vm), 2.0, 1e-15);
}

TEST(Material, PositiveEigenvalueIffStable) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> logp(-1.0, 4.0), nu(-0.2, 0.6), q(0.2, 3.0), ang(0.0, kPi);
  int stable = 0, unstable = 0, unstable_positive = 0;
  for (int i = 0; i < 2000; ++i) {
    const EngineeringConstants ec{1.0, std::pow(10.0, logp(rng)), q(rng), nu(rng), nu(rng)};
    const StabilityReport rep = stability_check(ec);
    MaterialParams m;
    try {
      m = derive_params(ec);
    } catch (const Error&) {
      continue;
    }
    const double lmin = min_eigenvalue(voigt_matrix(m, FiberDirection(ang(rng))));
    if (rep.passed()) {
      ++stable;
      EXPECT_GT(lmin, 0.0);
    } else {
      ++unstable;
      if (lmin > 0.0) ++unstable_positive;
    }
  }
  EXPECT_GT(stable, 50);
  EXPECT_GT(unstable, 50);
  EXPECT_EQ(unstable_positive, 0);
}
