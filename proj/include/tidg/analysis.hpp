#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tidg/femspace.hpp"
#include "tidg/material.hpp"

namespace tidg {

/// Analytic displacement field. gradient(x)(i, j) = d u_i / d x_j. The
/// hessian is only needed by the interpolation estimate check:
/// hessian(x)[i](j, k) = d^2 u_i / d x_j d x_k.
struct ExactSolution {
  std::function<Vec2(const Vec2&)> value;
  std::function<Mat2(const Vec2&)> gradient;
  std::function<std::array<Mat2, 2>(const Vec2&)> hessian;
};

/// Affine field u(x) = c + G x.
ExactSolution affine_solution(const Vec2& c, const Mat2& G);

class DiscreteField {
 public:
  DiscreteField(std::shared_ptr<const FunctionSpace> space, Eigen::VectorXd coefficients);

  const FunctionSpace& space() const { return *space_; }
  std::shared_ptr<const FunctionSpace> space_ptr() const { return space_; }
  const Eigen::VectorXd& coefficients() const { return coeffs_; }

  Vec2 value(int element, const Vec2& x) const;
  Mat2 gradient(int element, const Vec2& x) const;

 private:
  std::shared_ptr<const FunctionSpace> space_;
  Eigen::VectorXd coeffs_;
};

/// Nodal interpolant of u in `space`.
DiscreteField nodal_interpolant(const std::function<Vec2(const Vec2&)>& u,
                                std::shared_ptr<const FunctionSpace> space);

/// ||u_h||_DG, with jumps on interior and Dirichlet edges; on Dirichlet edges
/// only the masked components count.
double dg_norm(const DiscreteField& field, std::array<bool, 2> dirichlet_components = {true, true});

/// ||u_h - u||_DG. Interior jumps are those of u_h (u is continuous).
double dg_norm_error(const DiscreteField& field, const ExactSolution& exact,
                     std::array<bool, 2> dirichlet_components = {true, true});

struct H1Error {
  double seminorm = 0.0;  // broken |u_h - u|_1
  double l2 = 0.0;        // ||u_h - u||_0
  double absolute = 0.0;  // sqrt(seminorm^2 + l2^2)
  double relative = 0.0;  // absolute / ||u||_1
};

/// Elementwise H^1 error, degree-5 quadrature. Throws Error(ZeroReference)
/// if ||u||_1 vanishes.
H1Error broken_h1_error(const DiscreteField& field, const ExactSolution& exact);

/// DG1 field whose value at every edge midpoint is the edge average of u.
DiscreteField midpoint_interpolant(const std::function<Vec2(const Vec2&)>& u,
                                   std::shared_ptr<const FunctionSpace> dg1_space);

struct InterpolantPropertiesReport {
  double edge_mean = 0.0;        // max_E |int_E (u - Pi u) ds|
  double edge_normal = 0.0;      // max_E |int_E (u - Pi u).n ds|
  double divergence = 0.0;       // max_e |int_e div(u - Pi u) dx|
  double fiber_strain = 0.0;     // max_e |int_e M:eps(u - Pi u) dx|
  double scale = 0.0;
  double tolerance = 0.0;
  bool passed() const;
};

/// Residuals of the four defining identities of the midpoint interpolant,
/// relative tolerance 1e-10 times the size of u on the mesh.
InterpolantPropertiesReport interpolant_properties_check(const ExactSolution& exact, const Mesh& mesh,
                                                         const FiberDirection& fiber);

/// Overload for a fibre angle field; throws Error(NonConstantFiber) unless
/// the angle is the same at every element centroid.
InterpolantPropertiesReport interpolant_properties_check(const ExactSolution& exact, const Mesh& mesh,
                                                         const std::function<double(const Vec2&)>& angle_field);

/// rate_i = log(e_i / e_{i+1}) / log(h_i / h_{i+1}). Throws
/// Error(InvalidSequence) for fewer than two levels, non-decreasing h or
/// non-positive e.
std::vector<double> convergence_rates(const std::vector<std::pair<double, double>>& errors);

/// Rate fitted through the first and last of the final `levels` entries.
double tail_rate(const std::vector<std::pair<double, double>>& errors, int levels = 3);

struct InterpolationLevel {
  double h = 0.0;
  double l2 = 0.0;           // ||u - Pi u||_0
  double h1 = 0.0;           // |u - Pi u|_1 (broken)
  double divergence = 0.0;   // ||div(u - Pi u)||_0
  double fiber_strain = 0.0; // ||M:eps(u - Pi u)||_0
  // second-order seminorms of u - Pi u and of u
  double h2_error = 0.0, h2_exact = 0.0;
  double div_h1_error = 0.0, div_h1_exact = 0.0;
  double fiber_h1_error = 0.0, fiber_h1_exact = 0.0;
};

struct InterpolationEstimateReport {
  std::vector<InterpolationLevel> levels;
  double l2_rate = 0.0, h1_rate = 0.0, divergence_rate = 0.0, fiber_rate = 0.0;
  double max_equality_defect = 0.0;  // relative, over the three seminorm identities
  bool passed() const;
};

/// Observed decay of the interpolation error over a mesh sequence (rates over
/// the last three levels) plus the seminorm identities that hold because
/// Pi u is piecewise linear. Needs exact.hessian.
InterpolationEstimateReport interpolation_estimate_check(const ExactSolution& exact,
                                                         const std::vector<Mesh>& meshes,
                                                         const FiberDirection& fiber);

struct ErrorRecord {
  int level = 0;
  double h = 0.0;
  long ndof = 0;
  double dg_err = 0.0;
  double h1_rel_err = 0.0;
  double l2_err = 0.0;
};

struct ErrorReport {
  std::vector<ErrorRecord> records;

  /// H^1 rates between consecutive levels; the first entry is NaN.
  std::vector<double> h1_rates() const;
  /// CSV with header `level,h,ndof,dg_err,h1_rel_err,l2_err,rate_h1`.
  std::string to_csv() const;
};

}  // namespace tidg
