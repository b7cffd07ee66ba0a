#include "tidg/material.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "tidg/errors.hpp"

namespace tidg {

namespace {

constexpr double kAngleGrid = 1099511627776.0;  // 2^40

double canonical_angle(double angle) {
  constexpr double pi = std::numbers::pi;
  double t = std::fmod(angle, pi);
  if (t < 0.0) t += pi;
  t = std::round(t * kAngleGrid) / kAngleGrid;
  if (t >= pi) t = 0.0;
  return t;
}

void check_denominator(double denominator, double E_t) {
  if (std::abs(denominator) < 1e-14 * std::abs(E_t) || denominator == 0.0) {
    throw Error(ErrorCode::DegenerateDenominator,
                "(1+nu_t)((1-nu_t)p - 2 nu_l^2) vanishes: parameters sit on the stability boundary");
  }
}

}  // namespace

MaterialParams MaterialParams::isotropic(double lambda, double mu) {
  MaterialParams m;
  m.lambda = lambda;
  m.mu_t = mu;
  m.mu_l = mu;
  return m;
}

FiberDirection::FiberDirection(double angle) : angle_(canonical_angle(angle)) {
  a_ = Vec2(std::cos(angle_), std::sin(angle_));
  M_ = a_ * a_.transpose();
}

MaterialParams derive_params(const EngineeringConstants& ec) {
  const double E = ec.E_t;
  const double p = ec.p;
  const double q = ec.q;
  const double nt = ec.nu_t;
  const double nl = ec.nu_l;
  const double denominator = (1.0 + nt) * ((1.0 - nt) * p - 2.0 * nl * nl);
  check_denominator(denominator, E);

  MaterialParams m;
  m.mu_t = E / (2.0 * (1.0 + nt));
  m.mu_l = q * E / (2.0 * (1.0 + nt));
  m.lambda = (nt * p + nl * nl) / denominator * E;
  m.alpha = ((nl - nt + nt * nl) * p - nl * nl) / denominator * E;
  m.beta = ((1.0 - nt * nt) * p * p + (-2.0 * nt * nl + 2.0 * q * nt - 2.0 * nl + 1.0 - 2.0 * q) * p -
            (1.0 - 4.0 * q) * nl * nl) /
           denominator * E;
  m.gamma = 2.0 * (m.mu_l - m.mu_t);
  return m;
}

MaterialParams derive_params_special(double E_t, double p, double nu) {
  const double denominator = (1.0 + nu) * ((1.0 - nu) * p - 2.0 * nu * nu);
  check_denominator(denominator, E_t);

  MaterialParams m;
  m.mu_t = E_t / (2.0 * (1.0 + nu));
  m.mu_l = m.mu_t;
  m.lambda = nu * (p + nu) / denominator * E_t;
  m.alpha = nu * nu * (p - 1.0) / denominator * E_t;
  m.beta = (p - 1.0) * ((1.0 - nu * nu) * p - 3.0 * nu * nu) / denominator * E_t;
  m.gamma = 0.0;
  return m;
}

StabilityReport stability_check(const EngineeringConstants& ec) {
  StabilityReport r;
  r.E_t_positive = ec.E_t > 0.0;
  const double mu_t = ec.E_t / (2.0 * (1.0 + ec.nu_t));
  r.mu_t_positive = std::isfinite(mu_t) && mu_t > 0.0;
  r.mu_l_positive = r.mu_t_positive && ec.q * mu_t > 0.0;
  r.p_exceeds_nu_l_squared = ec.p > ec.nu_l * ec.nu_l;
  r.extensional_determinant = (1.0 - ec.nu_t) * ec.p - 2.0 * ec.nu_l * ec.nu_l > 0.0;
  return r;
}

VoigtMatrix voigt_matrix(const MaterialParams& m, const FiberDirection& fiber) {
  const double c = fiber.a()(0);
  const double s = fiber.a()(1);
  const double cc = c * c, ss = s * s, cs = c * s;
  const double lam = m.lambda, mu = m.mu_t, al = m.alpha, be = m.beta, ga = m.gamma;

  VoigtMatrix vm;
  Mat3& C = vm.entries;
  C(0, 0) = lam + 2.0 * mu + be * cc * cc + 2.0 * al * cc + 2.0 * ga * cc;
  C(1, 1) = lam + 2.0 * mu + be * ss * ss + 2.0 * al * ss + 2.0 * ga * ss;
  C(2, 2) = mu + be * cc * ss + 0.5 * ga;
  C(0, 1) = C(1, 0) = lam + be * cc * ss + al;
  C(0, 2) = C(2, 0) = (be * cc + al + ga) * cs;
  C(1, 2) = C(2, 1) = (be * ss + al + ga) * cs;
  return vm;
}

Mat2 apply_tensor(const MaterialParams& m, const FiberDirection& fiber, const Mat2& R) {
  const Mat2& M = fiber.M();
  const Mat2 I = Mat2::Identity();
  const double tr = R.trace();
  const double MR = (M.array() * R.array()).sum();
  return m.lambda * tr * I + 2.0 * m.mu_t * R + m.beta * MR * M + m.alpha * (MR * I + tr * M) +
         m.gamma * (R * M + M * R);
}

Mat2 apply_stress(const MaterialParams& m, const FiberDirection& fiber, const Mat2& eps) {
  return apply_tensor(m, fiber, eps);
}

Mat3 compliance_matrix(const MaterialParams& params, const FiberDirection& fiber) {
  const VoigtMatrix vm = voigt_matrix(params, fiber);
  const double scale = vm.entries.cwiseAbs().maxCoeff();
  if (!(min_eigenvalue(vm) > 1e-12 * scale)) {
    throw Error(ErrorCode::SingularMatrix, "plane-strain stiffness is not positive definite");
  }
  return vm.entries.ldlt().solve(Mat3::Identity());
}

double min_eigenvalue(const VoigtMatrix& vm) {
  const Mat3& C = vm.entries;
  const double scale = C.cwiseAbs().maxCoeff();
  if (std::abs(C(0, 2)) <= 1e-15 * scale && std::abs(C(1, 2)) <= 1e-15 * scale) {
    // Normal block decouples from the shear entry.
    const double a = C(0, 0), b = C(0, 1), d = C(1, 1);
    const double mean = 0.5 * (a + d);
    const double radius = std::hypot(0.5 * (a - d), b);
    const double hi = mean + radius;
    double lo = mean - radius;
    if (hi > 0.0) lo = (a * d - b * b) / hi;  // avoids cancellation in mean - radius
    return std::min(lo, C(2, 2));
  }
  Eigen::SelfAdjointEigenSolver<Mat3> solver(C, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

Eigen::Vector3d strain_to_voigt(const Mat2& eps) {
  return {eps(0, 0), eps(1, 1), eps(0, 1) + eps(1, 0)};
}

Mat2 voigt_to_strain(const Eigen::Vector3d& v) {
  Mat2 e;
  e << v(0), 0.5 * v(2), 0.5 * v(2), v(1);
  return e;
}

Mat2 voigt_to_stress(const Eigen::Vector3d& s) {
  Mat2 t;
  t << s(0), s(2), s(2), s(1);
  return t;
}

}  // namespace tidg
