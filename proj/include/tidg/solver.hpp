#pragma once

#include <Eigen/Dense>
#include <string>

#include "tidg/assembly.hpp"

namespace tidg {

struct SolveStats {
  std::string factorization;  // "LDLT" or "SparseLU"
  bool symmetric = false;
  int refinement_steps = 0;
  long nonzeros = 0;
  double seconds = 0.0;
};

struct SolveReport {
  Eigen::VectorXd solution;
  double relative_residual = 0.0;  // ||A x - b|| / ||b||
  double backward_error = 0.0;     // ||A x - b|| / (||A|| ||x|| + ||b||), infinity norms
  SolveStats stats;
};

/// Direct sparse solve with up to three steps of iterative refinement.
/// Symmetric matrices take an LDL^T factorization first and fall back to LU
/// if it breaks down. Throws Error(SingularSystem) on a failed factorization
/// and Error(ToleranceNotReached) if the normwise backward error stays above
/// tol. For well-scaled systems this coincides with the relative residual;
/// for nearly incompressible materials ||A|| ||x|| / ||b|| reaches 1e7 and
/// the relative residual of any double-precision solution is bounded below
/// by roughly 1e-16 times that ratio.
SolveReport solve(const LinearSystem& system, double tol = 1e-10);

/// ||A x - b|| / ||b|| by a plain row loop (||A x|| when b = 0).
double relative_residual(const SparseMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b);

/// ||A x - b||_inf / (||A||_inf ||x||_inf + ||b||_inf), by a plain row loop.
double backward_error(const SparseMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b);

/// True if A equals its transpose up to rel_tol times its largest entry.
bool is_symmetric(const SparseMatrix& A, double rel_tol = 1e-14);

}  // namespace tidg
