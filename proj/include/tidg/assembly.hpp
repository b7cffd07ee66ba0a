#pragma once

#include <Eigen/Sparse>
#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tidg/femspace.hpp"
#include "tidg/material.hpp"

namespace tidg {

enum class Method { CG1, CG2, NIPG, SIPG, IIPG };

std::string to_string(Method m);
bool is_dg(Method m);

/// Jump-penalty multipliers, one per constitutive group.
struct StabilizationParams {
  double k_mu = 10.0;
  double k_lambda = 100.0;
  double k_alpha = 10.0;
  double k_beta = 100.0;
  double k_gamma = 10.0;

  /// k_mu = k_alpha = k_gamma = 10, k_lambda = k_beta = 100.
  static StabilizationParams benchmark_defaults() { return {}; }

  /// Single-parameter form (k/h_E) C[u]:[v]. C carries 2 mu_t on the
  /// identity part, hence k_mu = 2k.
  static StabilizationParams uniform(double k) { return {2.0 * k, k, k, k, k}; }

  /// Throws Error(InvalidStabilization) if any multiplier is negative or NaN.
  void validate() const;
};

struct MethodConfig {
  Method method = Method::SIPG;
  bool under_integrate_beta = false;
  StabilizationParams stab;
  /// With under_integrate_beta, also add k_mu mu_t / h_E [u]:[v] on interior
  /// and Dirichlet edges (the extra term of the analysed UI form). Off by
  /// default: the benchmarks use the same penalties for every method, so
  /// the UI variants differ from the full ones only in the beta term.
  bool ui_extra_mu_penalty = false;

  /// +1 NIPG, -1 SIPG, 0 IIPG (and 0 for the conforming methods).
  double theta() const;
  std::string name() const;  // e.g. "P1_SIPG_UI"
};

using VectorField = std::function<Vec2(const Vec2&)>;

/// A nodal constraint at a mesh vertex, e.g. v(A) = 0.
struct PointConstraint {
  Vec2 point = Vec2::Zero();
  int component = 0;
  double value = 0.0;
};

/// Loads and boundary data. Null fields are zero, except that Dirichlet edges
/// require `dirichlet`. `dirichlet_components` selects which displacement
/// components are prescribed on Dirichlet edges; the others are traction
/// components and take `traction` (zero if absent).
struct LoadSpec {
  VectorField body_force;
  VectorField traction;
  VectorField dirichlet;
  std::array<bool, 2> dirichlet_components{true, true};
  std::vector<PointConstraint> point_constraints;
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

struct LinearSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  std::vector<int> constrained_dofs;  // strongly imposed dofs, ascending
};

/// Conforming assembly of a(u,v) = a_iso + a_ti and l(v). Dirichlet values
/// are imposed strongly: constrained rows become diagonal rows and the
/// columns are lifted into the right-hand side.
LinearSystem assemble_cg(const FunctionSpace& space, const MaterialParams& material,
                         const FiberDirection& fiber, const LoadSpec& loads);

/// Interior-penalty assembly with per-group penalties, on a DG1 space.
/// Penalties carry the 1/h_E scaling. With under_integrate_beta the beta
/// jump penalty is evaluated through the edge mean (midpoint rule); see
/// MethodConfig::ui_extra_mu_penalty for the optional extra mu_t term.
LinearSystem assemble_dg(const FunctionSpace& space, const MaterialParams& material,
                         const FiberDirection& fiber, const MethodConfig& config, const LoadSpec& loads);

/// Dispatches on config.method.
LinearSystem assemble(const FunctionSpace& space, const MaterialParams& material, const FiberDirection& fiber,
                      const MethodConfig& config, const LoadSpec& loads);

/// Sufficient coercivity conditions. Advisory only: failing them does not
/// mean the discrete form is indefinite.
struct AdmissibilityReport {
  double theta = 0.0;
  double k = 0.0;                 // smallest penalty multiplier in use
  double threshold = 0.0;         // required k for theta in {0, -1}
  bool full_dg_admissible = false;
  bool ui_checked = false;
  double ui_lhs = 0.0;            // 2 k_beta |beta| / mu_t
  double ui_rhs = 0.0;            // k_mu
  bool ui_admissible = true;
  std::vector<std::string> notes;

  bool admissible() const { return full_dg_admissible && ui_admissible; }
};

AdmissibilityReport check_coercivity_params(const MethodConfig& config, const MaterialParams& material,
                                            double sipg_threshold = 10.0);

/// Gram matrix of the DG norm: sum_e (eps(u), eps(v))_e
/// + 1/2 sum_{E in interior/Dirichlet} h_E^{-1} ([u], [v])_E.
SparseMatrix dg_norm_matrix(const FunctionSpace& space,
                            std::array<bool, 2> dirichlet_components = {true, true});

/// Smallest a_h(v,v)/||v||_DG^2 over fields with nonzero DG norm.
/// samples == 0 solves the generalized eigenproblem on the symmetric part;
/// samples > 0 takes the minimum over that many random fields instead.
double estimate_coercivity(const FunctionSpace& space, const MaterialParams& material,
                           const FiberDirection& fiber, const MethodConfig& config, int samples = 0,
                           unsigned seed = 1);

/// As estimate_coercivity, but throws Error(NonPositive) when the estimate
/// is not positive. Intended for small meshes (dense eigen-solve).
double numeric_coercivity(const FunctionSpace& space, const MaterialParams& material, const FiberDirection& fiber,
                          const MethodConfig& config, int samples = 0);

/// "row col value" lines, 0-based, one per stored entry.
std::string matrix_to_coordinate_text(const SparseMatrix& matrix);

}  // namespace tidg
