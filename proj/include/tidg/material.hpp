#pragma once

#include <Eigen/Dense>

namespace tidg {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

/// Engineering description of a transversely isotropic solid. E_l = p E_t and
/// mu_l = q mu_t. Constructing one never fails; see stability_check().
struct EngineeringConstants {
  double E_t = 1.0;
  double p = 1.0;
  double q = 1.0;
  double nu_t = 0.3;
  double nu_l = 0.3;
};

/// Coefficients of the elasticity tensor
///   C = lambda I(x)I + 2 mu_t II + beta M(x)M + alpha (I(x)M + M(x)I) + gamma MM.
struct MaterialParams {
  double lambda = 0.0;
  double mu_t = 0.0;
  double mu_l = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  static MaterialParams isotropic(double lambda, double mu);

  bool is_isotropic() const { return alpha == 0.0 && beta == 0.0 && gamma == 0.0; }
};

/// In-plane fibre direction a = (cos t, sin t) and structural tensor M = a (x) a.
///
/// The angle is stored canonically in [0, pi) and rounded to a 2^-40 rad grid,
/// so that t and t + pi (the same fibre) give bit-identical a and M.
class FiberDirection {
 public:
  FiberDirection() : FiberDirection(0.0) {}
  explicit FiberDirection(double angle);

  double angle() const { return angle_; }
  const Vec2& a() const { return a_; }
  const Mat2& M() const { return M_; }

 private:
  double angle_;
  Vec2 a_;
  Mat2 M_;
};

/// Plane-strain stiffness on (eps11, eps22, 2 eps12) -> (sig11, sig22, sig12).
struct VoigtMatrix {
  Mat3 entries = Mat3::Zero();
};

struct StabilityReport {
  bool E_t_positive = false;
  bool mu_t_positive = false;
  bool mu_l_positive = false;
  bool p_exceeds_nu_l_squared = false;     // p > nu_l^2
  bool extensional_determinant = false;    // (1 - nu_t) p - 2 nu_l^2 > 0

  bool passed() const {
    return E_t_positive && mu_t_positive && mu_l_positive && p_exceeds_nu_l_squared &&
           extensional_determinant;
  }
};

/// Throws Error(DegenerateDenominator) when (1+nu_t)((1-nu_t)p - 2 nu_l^2) is
/// below 1e-14 |E_t| in magnitude.
MaterialParams derive_params(const EngineeringConstants& ec);

/// The nu_t = nu_l = nu, q = 1 specialisation, evaluated from its own reduced
/// closed form.
MaterialParams derive_params_special(double E_t, double p, double nu);

StabilityReport stability_check(const EngineeringConstants& ec);

VoigtMatrix voigt_matrix(const MaterialParams& params, const FiberDirection& fiber);

/// Applies C to an arbitrary (not necessarily symmetric) 2x2 tensor. Jump
/// tensors (v_i - v_e) (x) n are not symmetric, and the penalty terms need C
/// acting on them directly.
Mat2 apply_tensor(const MaterialParams& params, const FiberDirection& fiber, const Mat2& R);

/// sigma = C eps for a symmetric strain.
Mat2 apply_stress(const MaterialParams& params, const FiberDirection& fiber, const Mat2& eps);

/// Inverse of the plane-strain Voigt matrix. Throws Error(SingularMatrix) if
/// the Voigt matrix is not positive definite.
Mat3 compliance_matrix(const MaterialParams& params, const FiberDirection& fiber);

double min_eigenvalue(const VoigtMatrix& vm);

// Voigt <-> tensor helpers (engineering shear in the third slot).
Eigen::Vector3d strain_to_voigt(const Mat2& eps);
Mat2 voigt_to_strain(const Eigen::Vector3d& v);
Mat2 voigt_to_stress(const Eigen::Vector3d& s);

}  // namespace tidg
