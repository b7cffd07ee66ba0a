#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

#include "tidg/analysis.hpp"
#include "tidg/assembly.hpp"
#include "tidg/errors.hpp"
#include "tidg/solver.hpp"

using namespace tidg;

namespace {

constexpr double kPi = std::numbers::pi;

bool on_left(const Edge& e, const Mesh& m) {
  return std::abs(m.vertices()[e.vertices[0]].x()) < 1e-12 && std::abs(m.vertices()[e.vertices[1]].x()) < 1e-12;
}
bool anything(const Edge&, const Mesh&) { return true; }

std::shared_ptr<const Mesh> left_clamped(int nx, int ny) {
  return std::make_shared<const Mesh>(classify_edges(rect_mesh(2, 1, nx, ny), on_left, anything));
}

Eigen::MatrixXd dense(const SparseMatrix& A) { return Eigen::MatrixXd(A); }

MethodConfig dg(Method m, bool ui = false, StabilizationParams s = {}) {
  MethodConfig c;
  c.method = m;
  c.under_integrate_beta = ui;
  c.stab = s;
  return c;
}

LoadSpec some_loads() {
  LoadSpec L;
  L.body_force = [](const Vec2& x) { return Vec2(std::sin(x.x()), x.y() * x.x()); };
  L.traction = [](const Vec2& x) { return Vec2(0.3, -x.y()); };
  L.dirichlet = [](const Vec2& x) { return Vec2(0.01 * x.y(), -0.02 * x.y() * x.y()); };
  return L;
}

const MaterialParams kAniso = derive_params({10.0, 50.0, 1.5, 0.3, 0.25});

// Penalty matrix sum_E (k/h_E) int_E C([u] (x) n) : ([v] (x) n), built
// directly from apply_tensor and shape_eval.
Eigen::MatrixXd tensor_penalty(const FunctionSpace& space, const MaterialParams& m, const FiberDirection& f,
                               double k) {
  const Mesh& mesh = space.mesh();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(space.dof_count(), space.dof_count());
  const QuadratureRule rule = edge_quadrature(3);
  for (int ei : mesh.interior_or_dirichlet_edges()) {
    const Edge& e = mesh.edges()[ei];
    const Vec2 A = mesh.vertices()[e.vertices[0]], B = mesh.vertices()[e.vertices[1]];
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2 x = A + rule.points[q].x() * (B - A);
      std::vector<std::pair<int, Mat2>> jumps;
      for (int side = 0; side < (e.neighbor ? 2 : 1); ++side) {
        const int t = side == 0 ? e.owner : *e.neighbor;
        const double sign = side == 0 ? 1.0 : -1.0;
        const ShapeValues sv = shape_eval(space, t, x);
        const auto dofs = space.element_dofs(t);
        for (int a = 0; a < sv.count; ++a) {
          for (int c = 0; c < 2; ++c) {
            Vec2 jv = Vec2::Zero();
            jv(c) = sign * sv.value[a];
            jumps.emplace_back(dofs[2 * a + c], jv * e.normal.transpose());
          }
        }
      }
      const double w = rule.weights[q] * e.length * k / e.length;
      for (const auto& [i, Ji] : jumps)
        for (const auto& [j, Jj] : jumps) P(i, j) += w * (apply_tensor(m, f, Jj).array() * Ji.array()).sum();
    }
  }
  return P;
}

}  // namespace

TEST(Assembly, MethodNames) {
  EXPECT_EQ(dg(Method::SIPG, true).name(), "P1_SIPG_UI");
  EXPECT_EQ(dg(Method::CG2).name(), "P2_CG");
  EXPECT_EQ(dg(Method::NIPG).theta(), 1.0);
  EXPECT_EQ(dg(Method::SIPG).theta(), -1.0);
  EXPECT_EQ(dg(Method::IIPG).theta(), 0.0);
}

TEST(Assembly, StabilizationValidation) {
  StabilizationParams s;
  s.k_beta = -1.0;
  try {
    s.validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidStabilization);
  }
  auto mesh = left_clamped(2, 1);
  const FunctionSpace space(mesh, SpaceKind::DG1);
  EXPECT_THROW(assemble_dg(space, kAniso, FiberDirection(0.3), dg(Method::SIPG, false, s), some_loads()), Error);
}

TEST(Assembly, SymmetricFormsGiveSymmetricMatrices) {
  auto mesh = left_clamped(3, 2);
  const FiberDirection f(kPi / 3);
  for (bool ui : {false, true}) {
    const FunctionSpace space(mesh, SpaceKind::DG1);
    const LinearSystem sys = assemble_dg(space, kAniso, f, dg(Method::SIPG, ui), some_loads());
    EXPECT_TRUE(is_symmetric(sys.matrix));
    const LinearSystem nipg = assemble_dg(space, kAniso, f, dg(Method::NIPG, ui), some_loads());
    EXPECT_FALSE(is_symmetric(nipg.matrix));
  }
  for (SpaceKind k : {SpaceKind::CG1, SpaceKind::CG2}) {
    const FunctionSpace space(mesh, k);
    EXPECT_TRUE(is_symmetric(assemble_cg(space, kAniso, f, some_loads()).matrix));
  }
}

TEST(Assembly, ThetaIsAffine) {
  auto mesh = left_clamped(3, 2);
  const FunctionSpace space(mesh, SpaceKind::DG1);
  const FiberDirection f(0.7);
  for (bool ui : {false, true}) {
    const LinearSystem n = assemble_dg(space, kAniso, f, dg(Method::NIPG, ui), some_loads());
    const LinearSystem s = assemble_dg(space, kAniso, f, dg(Method::SIPG, ui), some_loads());
    const LinearSystem i = assemble_dg(space, kAniso, f, dg(Method::IIPG, ui), some_loads());
    const Eigen::MatrixXd defect = dense(n.matrix) + dense(s.matrix) - 2.0 * dense(i.matrix);
    EXPECT_LT(defect.cwiseAbs().maxCoeff(), 1e-12 * dense(i.matrix).cwiseAbs().maxCoeff());
    EXPECT_LT((n.rhs + s.rhs - 2.0 * i.rhs).cwiseAbs().maxCoeff(), 1e-12 * i.rhs.cwiseAbs().maxCoeff());
    // The skew part of NIPG comes entirely from the consistency terms.
    const Eigen::MatrixXd skew = dense(n.matrix) - dense(n.matrix).transpose();
    const Eigen::MatrixXd diff = dense(n.matrix) - dense(s.matrix);
    EXPECT_LT((skew - (diff - diff.transpose())).cwiseAbs().maxCoeff(), 1e-12 * diff.cwiseAbs().maxCoeff());
  }
}

TEST(Assembly, UnderIntegrationIsInertWithoutBeta) {
  auto mesh = left_clamped(3, 2);
  const FunctionSpace space(mesh, SpaceKind::DG1);
  MaterialParams m = derive_params({5.0, 1.0, 2.0, 0.3, 0.3});
  m.beta = 0.0;
  const StabilizationParams s;  // default k_mu, no extra term by default
  for (Method method : {Method::NIPG, Method::SIPG, Method::IIPG}) {
    const LinearSystem full = assemble_dg(space, m, FiberDirection(0.4), dg(method, false, s), some_loads());
    const LinearSystem ui = assemble_dg(space, m, FiberDirection(0.4), dg(method, true, s), some_loads());
    const double scale = dense(full.matrix).cwiseAbs().maxCoeff();
    EXPECT_LT((dense(full.matrix) - dense(ui.matrix)).cwiseAbs().maxCoeff(), 1e-13 * scale);
    EXPECT_LT((full.rhs - ui.rhs).cwiseAbs().maxCoeff(), 1e-13 * full.rhs.cwiseAbs().maxCoeff());
  }
}

TEST(Assembly, ExtraMuPenaltyOnlyActsWithUnderIntegration) {
  auto mesh = left_clamped(3, 2);
  const FunctionSpace space(mesh, SpaceKind::DG1);
  MaterialParams m = derive_params({5.0, 1.0, 2.0, 0.3, 0.3});
  m.beta = 0.0;
  StabilizationParams s;
  MethodConfig full = dg(Method::SIPG, false, s);
  MethodConfig ui = dg(Method::SIPG, true, s);
  full.ui_extra_mu_penalty = true;
  ui.ui_extra_mu_penalty = true;
  const Eigen::MatrixXd A_full = dense(assemble_dg(space, m, FiberDirection(0.4), full, some_loads()).matrix);
  const Eigen::MatrixXd A_plain =
      dense(assemble_dg(space, m, FiberDirection(0.4), dg(Method::SIPG, false, s), some_loads()).matrix);
  const Eigen::MatrixXd A_ui = dense(assemble_dg(space, m, FiberDirection(0.4), ui, some_loads()).matrix);
  // Ignored on the full-integration variant.
  EXPECT_EQ((A_full - A_plain).cwiseAbs().maxCoeff(), 0.0);
  // With beta = 0 the UI difference is exactly one extra mu_t jump block, so it is symmetric PSD.
  const Eigen::MatrixXd diff = A_ui - A_plain;
  EXPECT_GT(diff.cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_LT((diff - diff.transpose()).cwiseAbs().maxCoeff(), 1e-12 * diff.cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (diff + diff.transpose()));
  EXPECT_GT(eig.eigenvalues().minCoeff(), -1e-10 * eig.eigenvalues().maxCoeff());
  // Doubling k_mu doubles the extra block.
  StabilizationParams s2 = s;
  s2.k_mu = 2.0 * s.k_mu;
  MethodConfig ui2 = dg(Method::SIPG, true, s2);
  ui2.ui_extra_mu_penalty = true;
  MethodConfig plain2 = dg(Method::SIPG, false, s2);
  const Eigen::MatrixXd diff2 = dense(assemble_dg(space, m, FiberDirection(0.4), ui2, some_loads()).matrix) -
                                dense(assemble_dg(space, m, FiberDirection(0.4), plain2, some_loads()).matrix);
  EXPECT_LT((diff2 - 2.0 * diff).cwiseAbs().maxCoeff(), 1e-11 * diff.cwiseAbs().maxCoeff());
}

TEST(Assembly, UnderIntegrationChangesBetaPenalty) {
  auto mesh = left_clamped(3, 2);
  const FunctionSpace space(mesh, SpaceKind::DG1);
  const LinearSystem full = assemble_dg(space, kAniso, FiberDirection(0.4), dg(Method::SIPG, false), some_loads());
  const LinearSystem ui = assemble_dg(space, kAniso, FiberDirection(0.4), dg(Method::SIPG, true), some_loads());
  EXPECT_GT((dense(full.matrix) - dense(ui.matrix)).cwiseAbs().maxCoeff(), 1e-3);
}

TEST(Assembly, UniformPenaltyEqualsTensorForm) {
  auto mesh = left_clamped(3, 2);
  const FunctionSpace space(mesh, SpaceKind::DG1);
  LoadSpec L;
  L.dirichlet = [](const Vec2&) { return Vec2::Zero(); };
  for (double angle : {0.0, 0.4, kPi / 2, 2.5}) {
    const FiberDirection f(angle);
    const double k = 3.0;
    const Eigen::MatrixXd with = dense(assemble_dg(space, kAniso, f, dg(Method::IIPG, false, StabilizationParams::uniform(k)), L).matrix);
    const Eigen::MatrixXd without =
        dense(assemble_dg(space, kAniso, f, dg(Method::IIPG, false, StabilizationParams::uniform(0.0)), L).matrix);
    const Eigen::MatrixXd ref = tensor_penalty(space, kAniso, f, k);
    EXPECT_LT((with - without - ref).cwiseAbs().maxCoeff(), 1e-12 * ref.cwiseAbs().maxCoeff());
  }
}

TEST(Assembly, ZeroDataGivesZeroRhs) {
  auto mesh = left_clamped(3, 2);
  LoadSpec zero;
  zero.dirichlet = [](const Vec2&) { return Vec2::Zero(); };
  for (const MethodConfig& c : {dg(Method::CG1), dg(Method::CG2), dg(Method::NIPG), dg(Method::SIPG, true)}) {
    const FunctionSpace space(mesh, c.method == Method::CG2   ? SpaceKind::CG2
                                    : c.method == Method::CG1 ? SpaceKind::CG1
                                                              : SpaceKind::DG1);
    const LinearSystem sys = assemble(space, kAniso, FiberDirection(1.0), c, zero);
    EXPECT_EQ(sys.rhs.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LT(solve(sys).solution.cwiseAbs().maxCoeff(), 1e-300);
  }
}

TEST(Assembly, MissingDirichletData) {
  auto mesh = left_clamped(2, 1);
  const FunctionSpace space(mesh, SpaceKind::CG1);
  try {
    assemble_cg(space, kAniso, FiberDirection(0.0), LoadSpec{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingBoundaryData);
  }
}

TEST(Assembly, CgReproducesLinearField) {
  auto mesh = std::make_shared<const Mesh>(classify_edges(rect_mesh(1, 1, 3, 3), anything, nullptr));
  const auto u = [](const Vec2& x) { return Vec2(0.1 * x.x() + 0.2 * x.y(), 0.3 * x.x() - 0.1 * x.y()); };
  LoadSpec L;
  L.dirichlet = u;
  const auto space = std::make_shared<const FunctionSpace>(mesh, SpaceKind::CG1);
  const SolveReport r = solve(assemble_cg(*space, MaterialParams::isotropic(1.0, 1.0), FiberDirection(0.0), L));
  for (int n = 0; n < space->node_count(); ++n) {
    const Vec2 x = space->node_coordinate(n);
    EXPECT_NEAR(r.solution(2 * n), u(x).x(), 1e-10);
    EXPECT_NEAR(r.solution(2 * n + 1), u(x).y(), 1e-10);
  }
}

TEST(Assembly, StrongConstraintsAreListed) {
  auto mesh = left_clamped(2, 2);
  const FunctionSpace cg2(mesh, SpaceKind::CG2);
  const LinearSystem sys = assemble_cg(cg2, kAniso, FiberDirection(0.0), some_loads());
  // Left edge of a 2x2 grid: 3 vertices and 2 midpoints, both components.
  EXPECT_EQ(sys.constrained_dofs.size(), 10u);
  EXPECT_TRUE(std::is_sorted(sys.constrained_dofs.begin(), sys.constrained_dofs.end()));
}

TEST(Assembly, CoordinateDump) {
  auto mesh = left_clamped(1, 1);
  const FunctionSpace space(mesh, SpaceKind::DG1);
  const LinearSystem sys = assemble_dg(space, kAniso, FiberDirection(0.2), dg(Method::SIPG), some_loads());
  const std::string text = matrix_to_coordinate_text(sys.matrix);
  std::istringstream in(text);
  int i, j, lines = 0;
  double v;
  while (in >> i >> j >> v) {
    EXPECT_NEAR(v, sys.matrix.coeff(i, j), 1e-15 * std::abs(v) + 1e-300);
    ++lines;
  }
  EXPECT_EQ(lines, sys.matrix.nonZeros());
}

TEST(Assembly, AdmissibilityReport) {
  const MaterialParams iso = MaterialParams::isotropic(1.0, 1.0);
  EXPECT_TRUE(check_coercivity_params(dg(Method::NIPG, false, StabilizationParams::uniform(10.0)), iso).admissible());
  EXPECT_FALSE(check_coercivity_params(dg(Method::SIPG, false, StabilizationParams::uniform(0.01)), iso).admissible());
  MaterialParams m = iso;
  m.beta = 1e4;
  const AdmissibilityReport r = check_coercivity_params(dg(Method::SIPG, true), m);
  EXPECT_TRUE(r.ui_checked);
  EXPECT_FALSE(r.ui_admissible);
  EXPECT_NEAR(r.ui_lhs, 2.0 * 100.0 * 1e4, 1e-6);
  EXPECT_FALSE(r.notes.empty());
  StabilizationParams bad;
  bad.k_beta = -1.0;
  EXPECT_THROW(check_coercivity_params(dg(Method::SIPG, false, bad), iso), Error);
}

TEST(Assembly, NipgCoercivityLowerBound) {
  auto mesh = left_clamped(3, 2);
  const FunctionSpace space(mesh, SpaceKind::DG1);
  const MaterialParams iso = MaterialParams::isotropic(1.0, 1.0);
  const double K = numeric_coercivity(space, iso, FiberDirection(0.0), dg(Method::NIPG, false, StabilizationParams::uniform(10.0)));
  EXPECT_GT(K, 0.0);
}

TEST(Assembly, UnderPenalizedSipgMayFail) {
  auto mesh = left_clamped(1, 1);
  const FunctionSpace space(mesh, SpaceKind::DG1);
  try {
    const double K = numeric_coercivity(space, kAniso, FiberDirection(0.0),
                                        dg(Method::SIPG, false, StabilizationParams::uniform(0.01)));
    EXPECT_GT(K, 0.0);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositive);
  }
}

TEST(Assembly, RigidMotionsAreFiltered) {
  auto mesh = std::make_shared<const Mesh>(classify_edges(rect_mesh(1, 1, 2, 2), nullptr, anything));
  const FunctionSpace space(mesh, SpaceKind::DG1);
  const double K = estimate_coercivity(space, MaterialParams::isotropic(1.0, 1.0), FiberDirection(0.0),
                                       dg(Method::NIPG, false, StabilizationParams::uniform(10.0)));
  EXPECT_TRUE(std::isfinite(K));
  EXPECT_GT(K, 0.0);
}

TEST(Assembly, SampledCoercivityBoundsEigenEstimate) {
  auto mesh = left_clamped(2, 2);
  const FunctionSpace space(mesh, SpaceKind::DG1);
  const MethodConfig c = dg(Method::SIPG);
  const double exact = estimate_coercivity(space, kAniso, FiberDirection(1.0), c);
  const double sampled = estimate_coercivity(space, kAniso, FiberDirection(1.0), c, 200, 3);
  EXPECT_GE(sampled, exact * (1.0 - 1e-10));
}

TEST(Assembly, DgNormOfContinuousFieldIgnoresJumps) {
  auto mesh = std::make_shared<const Mesh>(classify_edges(rect_mesh(1, 1, 2, 2), nullptr, anything));
  const auto space = std::make_shared<const FunctionSpace>(mesh, SpaceKind::DG1);
  const DiscreteField u = nodal_interpolant([](const Vec2& x) { return Vec2(x.x(), 0.0); }, space);
  const SparseMatrix G = dg_norm_matrix(*space);
  EXPECT_NEAR(u.coefficients().dot(G * u.coefficients()), 1.0, 1e-14);
  EXPECT_NEAR(dg_norm(u), 1.0, 1e-14);
}
