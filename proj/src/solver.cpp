#include "tidg/solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>

#include "tidg/errors.hpp"

namespace tidg {

namespace {

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

// Type-erased factorization so the refinement loop does not care which
// backend is in use.
class Factorization {
 public:
  virtual ~Factorization() = default;
  virtual Eigen::VectorXd apply(const Eigen::VectorXd& b) const = 0;
};

template <class Solver>
class FactorizationOf final : public Factorization {
 public:
  explicit FactorizationOf(const ColMatrix& A) { solver_.compute(A); }
  bool ok() const { return solver_.info() == Eigen::Success; }
  Eigen::VectorXd apply(const Eigen::VectorXd& b) const override { return solver_.solve(b); }
  Solver& solver() { return solver_; }

 private:
  Solver solver_;
};

bool ldlt_pivots_ok(const Eigen::SimplicialLDLT<ColMatrix>& ldlt, double scale) {
  const Eigen::VectorXd d = ldlt.vectorD();
  for (int i = 0; i < d.size(); ++i) {
    if (!std::isfinite(d(i)) || std::abs(d(i)) <= 1e-14 * scale) return false;
  }
  return true;
}

std::unique_ptr<Factorization> lu_factor(const ColMatrix& A, std::string& name) {
  auto lu = std::make_unique<FactorizationOf<Eigen::SparseLU<ColMatrix>>>(A);
  if (!lu->ok()) {
    throw Error(ErrorCode::SingularSystem, "sparse LU failed: " + lu->solver().lastErrorMessage());
  }
  name = "SparseLU";
  return lu;
}

}  // namespace

double relative_residual(const SparseMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  double r2 = 0.0;
  double b2 = 0.0;
  const int* outer = A.outerIndexPtr();
  const int* inner = A.innerIndexPtr();
  const double* values = A.valuePtr();
  for (int row = 0; row < A.rows(); ++row) {
    double s = 0.0;
    for (int k = outer[row]; k < outer[row + 1]; ++k) s += values[k] * x[inner[k]];
    const double r = s - b[row];
    r2 += r * r;
    b2 += b[row] * b[row];
  }
  return b2 > 0.0 ? std::sqrt(r2 / b2) : std::sqrt(r2);
}

double backward_error(const SparseMatrix& A, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  double r_inf = 0.0, a_inf = 0.0;
  const int* outer = A.outerIndexPtr();
  const int* inner = A.innerIndexPtr();
  const double* values = A.valuePtr();
  for (int row = 0; row < A.rows(); ++row) {
    double s = 0.0, row_sum = 0.0;
    for (int k = outer[row]; k < outer[row + 1]; ++k) {
      s += values[k] * x[inner[k]];
      row_sum += std::abs(values[k]);
    }
    r_inf = std::max(r_inf, std::abs(s - b[row]));
    a_inf = std::max(a_inf, row_sum);
  }
  const double denom = a_inf * x.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>();
  return denom > 0.0 ? r_inf / denom : r_inf;
}

bool is_symmetric(const SparseMatrix& A, double rel_tol) {
  if (A.rows() != A.cols()) return false;
  const SparseMatrix At = A.transpose();
  const double scale = A.coeffs().size() ? A.coeffs().cwiseAbs().maxCoeff() : 0.0;
  if (scale == 0.0) return true;
  const SparseMatrix diff = A - At;
  return diff.nonZeros() == 0 || diff.coeffs().cwiseAbs().maxCoeff() <= rel_tol * scale;
}

SolveReport solve(const LinearSystem& system, double tol) {
  const SparseMatrix& A = system.matrix;
  const Eigen::VectorXd& b = system.rhs;
  if (A.rows() != A.cols() || A.rows() != b.size()) {
    throw Error(ErrorCode::InvalidDimensions, "matrix and right-hand side sizes disagree");
  }
  const auto start = std::chrono::steady_clock::now();
  SolveReport report;
  report.stats.nonzeros = A.nonZeros();
  if (A.rows() == 0) return report;

  ColMatrix Ac = A;
  Ac.makeCompressed();
  const double scale = Ac.coeffs().cwiseAbs().maxCoeff();
  if (scale == 0.0) throw Error(ErrorCode::SingularSystem, "zero matrix");

  std::unique_ptr<Factorization> factor;
  report.stats.symmetric = is_symmetric(A);
  if (report.stats.symmetric) {
    auto ldlt = std::make_unique<FactorizationOf<Eigen::SimplicialLDLT<ColMatrix>>>(Ac);
    if (ldlt->ok() && ldlt_pivots_ok(ldlt->solver(), scale)) {
      report.stats.factorization = "LDLT";
      factor = std::move(ldlt);
    }
  }
  if (!factor) factor = lu_factor(Ac, report.stats.factorization);

  Eigen::VectorXd x = factor->apply(b);
  if (!x.allFinite()) throw Error(ErrorCode::SingularSystem, "factorization produced non-finite values");
  double res = relative_residual(A, x, b);
  for (int step = 0; step < 3 && res > 0.01 * tol; ++step) {
    const Eigen::VectorXd r = b - A * x;
    const Eigen::VectorXd candidate = x + factor->apply(r);
    const double cres = relative_residual(A, candidate, b);
    if (!(cres < res)) break;
    x = candidate;
    res = cres;
    report.stats.refinement_steps = step + 1;
  }
  report.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.solution = std::move(x);
  report.relative_residual = res;
  report.backward_error = backward_error(A, report.solution, b);
  if (!(report.backward_error <= tol)) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "backward error %.3e above tolerance %.3e (relative residual %.3e, %d refinement steps)",
                  report.backward_error, tol, res,
                  report.stats.refinement_steps);
    throw Error(ErrorCode::ToleranceNotReached, msg);
  }
  return report;
}

}  // namespace tidg
