#pragma once

#include <Eigen/Dense>

#include "tidg/mesh.hpp"

namespace tidg::cli {

/// Interior-penalty stiffness matrix for isotropic elasticity on DG1,
/// written directly in tensor form (sigma = lambda tr(eps) I + 2 mu eps)
/// with its own basis and quadrature code. It shares nothing with the
/// assembly module except the mesh and the dof numbering
/// (dof = 2 * (3 * element + local) + component), so it serves as an
/// independent check of the general anisotropic kernel at p = q = 1.
/// Penalty: (k_lambda lambda (n.[u])(n.[v]) + k_mu mu [u].[v]) / h_E on
/// interior and Dirichlet edges.
Eigen::MatrixXd isotropic_ipdg_matrix(const Mesh& mesh, double lambda, double mu, double theta, double k_lambda,
                                      double k_mu);

}  // namespace tidg::cli
