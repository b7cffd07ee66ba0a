#include "tidg/assembly.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "tidg/errors.hpp"

namespace tidg {

std::string to_string(Method m) {
  switch (m) {
    case Method::CG1: return "CG1";
    case Method::CG2: return "CG2";
    case Method::NIPG: return "NIPG";
    case Method::SIPG: return "SIPG";
    case Method::IIPG: return "IIPG";
  }
  return "unknown";
}

bool is_dg(Method m) { return m == Method::NIPG || m == Method::SIPG || m == Method::IIPG; }

void StabilizationParams::validate() const {
  const std::array<std::pair<const char*, double>, 5> all{
      {{"k_mu", k_mu}, {"k_lambda", k_lambda}, {"k_alpha", k_alpha}, {"k_beta", k_beta}, {"k_gamma", k_gamma}}};
  for (const auto& [name, value] : all) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
      throw Error(ErrorCode::InvalidStabilization,
                  std::string(name) + " = " + std::to_string(value) + " must be a non-negative number");
    }
  }
}

double MethodConfig::theta() const {
  switch (method) {
    case Method::NIPG: return 1.0;
    case Method::SIPG: return -1.0;
    default: return 0.0;
  }
}

std::string MethodConfig::name() const {
  switch (method) {
    case Method::CG1: return "P1_CG";
    case Method::CG2: return "P2_CG";
    default: break;
  }
  return "P1_" + to_string(method) + (under_integrate_beta ? "_UI" : "");
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double, int>>;

// Engineering strain rows of the displacement gradient for basis phi_a e_c.
Eigen::Vector3d basis_strain(const Vec2& grad, int c) {
  return c == 0 ? Eigen::Vector3d(grad.x(), 0.0, grad.y()) : Eigen::Vector3d(0.0, grad.y(), grad.x());
}

// sigma(phi_a e_c) n for a Voigt stress vector.
Vec2 traction(const Eigen::Vector3d& s, const Vec2& n) {
  return {s(0) * n.x() + s(2) * n.y(), s(2) * n.x() + s(1) * n.y()};
}

struct EdgePenalty {
  Mat2 full = Mat2::Zero();  // integrated with the full edge rule
  Mat2 beta = Mat2::Zero();  // beta group, kept apart for under-integration
};

EdgePenalty edge_penalty(const MaterialParams& m, const FiberDirection& fiber, const StabilizationParams& k,
                         const Vec2& n, bool under_integrate, bool extra_mu) {
  const Vec2& a = fiber.a();
  const double an = a.dot(n);
  const Mat2 I = Mat2::Identity();
  EdgePenalty p;
  p.full = k.k_lambda * m.lambda * (n * n.transpose()) + k.k_mu * m.mu_t * I +
           k.k_alpha * m.alpha * an * (n * a.transpose() + a * n.transpose()) +
           k.k_gamma * m.gamma * (an * an * I + a * a.transpose());
  const Mat2 beta = k.k_beta * m.beta * an * an * (a * a.transpose());
  if (under_integrate) {
    p.beta = beta;
    if (extra_mu) p.full += k.k_mu * m.mu_t * I;
  } else {
    p.full += beta;
  }
  return p;
}

// Per-side data of one edge at one point: dofs with their jump vectors and
// averaged tractions.
struct SideEval {
  std::vector<int> dofs;
  std::vector<Vec2> jump;      // sign * phi * D e_c
  std::vector<Vec2> traction;  // average weight * sigma(phi e_c) n
};

class EdgeEvaluator {
 public:
  EdgeEvaluator(const FunctionSpace& space, const Mat3* voigt) : space_(space), voigt_(voigt) {}

  // Evaluates the edge side belonging to `element` at physical point x.
  void side(int element, double sign, double avg_weight, const Vec2& x, const Vec2& n, const Mat2& mask,
            SideEval& out) const {
    const ShapeValues sv = space_.basis_at(element, space_.geometry(element).barycentric(x));
    out.dofs = space_.element_dofs(element);
    out.jump.resize(out.dofs.size());
    out.traction.resize(out.dofs.size());
    for (int a = 0; a < sv.count; ++a) {
      for (int c = 0; c < 2; ++c) {
        const int k = 2 * a + c;
        out.jump[k] = sign * sv.value[a] * mask.col(c);
        if (voigt_) {
          out.traction[k] = avg_weight * traction(*voigt_ * basis_strain(sv.grad[a], c), n);
        } else {
          out.traction[k].setZero();
        }
      }
    }
  }

 private:
  const FunctionSpace& space_;
  const Mat3* voigt_;
};

Mat2 dirichlet_mask(const std::array<bool, 2>& comps) {
  Mat2 D = Mat2::Zero();
  D(0, 0) = comps[0] ? 1.0 : 0.0;
  D(1, 1) = comps[1] ? 1.0 : 0.0;
  return D;
}

// Volume stiffness and body force.
void assemble_volume(const FunctionSpace& space, const Mat3& C, const VectorField& body_force, Triplets& trip,
                     Eigen::VectorXd& rhs) {
  const Mesh& mesh = space.mesh();
  const int order = space.order();
  const QuadratureRule stiff_rule = element_quadrature(order == 1 ? 1 : 2);
  const QuadratureRule load_rule = element_quadrature(5);
  const int nd = space.dofs_per_element();
  Eigen::MatrixXd Ke(nd, nd);
  Eigen::MatrixXd B(3, nd);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry& geo = space.geometry(t);
    const std::vector<int> dofs = space.element_dofs(t);
    Ke.setZero();
    for (std::size_t q = 0; q < stiff_rule.size(); ++q) {
      const Vec2& r = stiff_rule.points[q];
      const ShapeValues sv = space.basis_at(t, {1.0 - r.x() - r.y(), r.x(), r.y()});
      for (int a = 0; a < sv.count; ++a) {
        B.col(2 * a) = basis_strain(sv.grad[a], 0);
        B.col(2 * a + 1) = basis_strain(sv.grad[a], 1);
      }
      Ke.noalias() += (stiff_rule.weights[q] * 2.0 * geo.area) * (B.transpose() * C * B);
    }
    for (int i = 0; i < nd; ++i) {
      for (int j = 0; j < nd; ++j) trip.emplace_back(dofs[i], dofs[j], Ke(i, j));
    }
    if (body_force) {
      for (std::size_t q = 0; q < load_rule.size(); ++q) {
        const Vec2& r = load_rule.points[q];
        const ShapeValues sv = space.basis_at(t, {1.0 - r.x() - r.y(), r.x(), r.y()});
        const Vec2 f = body_force(geo.map(r));
        const double w = load_rule.weights[q] * 2.0 * geo.area;
        for (int a = 0; a < sv.count; ++a) {
          rhs(dofs[2 * a]) += w * sv.value[a] * f.x();
          rhs(dofs[2 * a + 1]) += w * sv.value[a] * f.y();
        }
      }
    }
  }
}

// int_E t . (P v) ds on the owner side, P the projector onto traction components.
void assemble_traction(const FunctionSpace& space, const Edge& e, const VectorField& t, const Mat2& P,
                       Eigen::VectorXd& rhs) {
  if (!t) return;
  const Mesh& mesh = space.mesh();
  const QuadratureRule rule = edge_quadrature(5);
  const Vec2 x0 = mesh.vertices()[e.vertices[0]];
  const Vec2 x1 = mesh.vertices()[e.vertices[1]];
  const std::vector<int> dofs = space.element_dofs(e.owner);
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Vec2 x = x0 + rule.points[q].x() * (x1 - x0);
    const ShapeValues sv = space.basis_at(e.owner, space.geometry(e.owner).barycentric(x));
    const Vec2 tv = P * t(x);
    const double w = rule.weights[q] * e.length;
    for (int a = 0; a < sv.count; ++a) {
      rhs(dofs[2 * a]) += w * sv.value[a] * tv.x();
      rhs(dofs[2 * a + 1]) += w * sv.value[a] * tv.y();
    }
  }
}

SparseMatrix build(int n, const Triplets& trip) {
  SparseMatrix A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  return A;
}

// Strong imposition: constrained rows keep their diagonal, columns are
// lifted into the right-hand side.
void apply_constraints(LinearSystem& sys, const std::map<int, double>& fixed) {
  if (fixed.empty()) return;
  const int n = static_cast<int>(sys.rhs.size());
  std::vector<char> is_fixed(n, 0);
  std::vector<double> value(n, 0.0);
  for (const auto& [dof, v] : fixed) {
    is_fixed[dof] = 1;
    value[dof] = v;
  }
  SparseMatrix& A = sys.matrix;
  for (int r = 0; r < n; ++r) {
    for (SparseMatrix::InnerIterator it(A, r); it; ++it) {
      const int c = it.col();
      if (is_fixed[r]) {
        if (c != r) it.valueRef() = 0.0;
      } else if (is_fixed[c]) {
        sys.rhs(r) -= it.value() * value[c];
        it.valueRef() = 0.0;
      }
    }
  }
  for (const auto& [dof, v] : fixed) {
    double d = A.coeff(dof, dof);
    if (d == 0.0) {
      d = 1.0;
      A.coeffRef(dof, dof) = d;
    }
    sys.rhs(dof) = d * v;
  }
  A.prune(0.0);
  A.makeCompressed();
  sys.constrained_dofs.clear();
  for (const auto& [dof, v] : fixed) sys.constrained_dofs.push_back(dof);
}

void add_point_constraints(const FunctionSpace& space, const LoadSpec& loads, std::map<int, double>& fixed) {
  const Mesh& mesh = space.mesh();
  for (const PointConstraint& pc : loads.point_constraints) {
    const auto vertex = mesh.find_vertex(pc.point);
    if (!vertex) {
      throw Error(ErrorCode::MissingBoundaryData, "point constraint is not at a mesh vertex");
    }
    int node = -1;
    if (space.discontinuous()) {
      for (int t = 0; t < mesh.num_triangles() && node < 0; ++t) {
        for (int j = 0; j < 3; ++j) {
          if (mesh.triangles()[t][j] == *vertex) {
            node = space.node(t, j);
            break;
          }
        }
      }
    } else {
      node = *vertex;
    }
    fixed[FunctionSpace::dof(node, pc.component)] = pc.value;
  }
}

void require_dirichlet_data(const Mesh& mesh, const LoadSpec& loads) {
  if (!loads.dirichlet && !mesh.dirichlet_edges().empty()) {
    throw Error(ErrorCode::MissingBoundaryData, "mesh has Dirichlet edges but no Dirichlet data g");
  }
}

}  // namespace

LinearSystem assemble_cg(const FunctionSpace& space, const MaterialParams& material, const FiberDirection& fiber,
                         const LoadSpec& loads) {
  if (space.discontinuous()) {
    throw Error(ErrorCode::InvalidDimensions, "assemble_cg needs a CG1 or CG2 space");
  }
  const Mesh& mesh = space.mesh();
  require_dirichlet_data(mesh, loads);
  const Mat3 C = voigt_matrix(material, fiber).entries;
  const int n = space.dof_count();

  LinearSystem sys;
  sys.rhs = Eigen::VectorXd::Zero(n);
  Triplets trip;
  trip.reserve(static_cast<size_t>(mesh.num_triangles()) * space.dofs_per_element() * space.dofs_per_element());
  assemble_volume(space, C, loads.body_force, trip, sys.rhs);

  const Mat2 D = dirichlet_mask(loads.dirichlet_components);
  std::map<int, double> fixed;
  for (const Edge& e : mesh.edges()) {
    if (e.tag == EdgeTag::Neumann) {
      assemble_traction(space, e, loads.traction, Mat2::Identity(), sys.rhs);
    } else if (e.tag == EdgeTag::Dirichlet) {
      assemble_traction(space, e, loads.traction, Mat2::Identity() - D, sys.rhs);
      std::vector<int> nodes{e.vertices[0], e.vertices[1]};
      if (space.kind() == SpaceKind::CG2) {
        nodes.push_back(space.node(e.owner, 3 + e.owner_local));
      }
      for (int node : nodes) {
        const Vec2 g = loads.dirichlet(space.node_coordinate(node));
        for (int c = 0; c < 2; ++c) {
          if (loads.dirichlet_components[c]) fixed[FunctionSpace::dof(node, c)] = g(c);
        }
      }
    }
  }
  add_point_constraints(space, loads, fixed);
  sys.matrix = build(n, trip);
  apply_constraints(sys, fixed);
  return sys;
}

LinearSystem assemble_dg(const FunctionSpace& space, const MaterialParams& material, const FiberDirection& fiber,
                         const MethodConfig& config, const LoadSpec& loads) {
  if (!space.discontinuous()) {
    throw Error(ErrorCode::InvalidDimensions, "assemble_dg needs a DG1 space");
  }
  if (!is_dg(config.method)) {
    throw Error(ErrorCode::InvalidDimensions, "assemble_dg needs an interior-penalty method");
  }
  config.stab.validate();
  const Mesh& mesh = space.mesh();
  require_dirichlet_data(mesh, loads);
  const Mat3 C = voigt_matrix(material, fiber).entries;
  const double theta = config.theta();
  const bool ui = config.under_integrate_beta;
  const int n = space.dof_count();

  LinearSystem sys;
  sys.rhs = Eigen::VectorXd::Zero(n);
  Triplets trip;
  trip.reserve(static_cast<size_t>(mesh.num_triangles()) * 36 + static_cast<size_t>(mesh.num_edges()) * 144);
  assemble_volume(space, C, loads.body_force, trip, sys.rhs);

  const QuadratureRule edge_rule = edge_quadrature(3);
  const QuadratureRule load_rule = edge_quadrature(5);
  const Mat2 D = dirichlet_mask(loads.dirichlet_components);
  const Mat2 I = Mat2::Identity();
  EdgeEvaluator evaluator(space, &C);
  SideEval s0, s1;
  Eigen::MatrixXd local;

  for (const Edge& e : mesh.edges()) {
    if (e.tag == EdgeTag::Neumann) {
      assemble_traction(space, e, loads.traction, I, sys.rhs);
      continue;
    }
    const bool interior = e.tag == EdgeTag::Interior;
    if (!interior) assemble_traction(space, e, loads.traction, I - D, sys.rhs);
    const Mat2& mask = interior ? I : D;
    const double avg = interior ? 0.5 : 1.0;
    const Vec2 x0 = mesh.vertices()[e.vertices[0]];
    const Vec2 x1 = mesh.vertices()[e.vertices[1]];
    const double hE = e.length;
    const EdgePenalty pen = edge_penalty(material, fiber, config.stab, e.normal, ui, config.ui_extra_mu_penalty);

    // Gathers both sides into one local dof list.
    auto gather = [&](const Vec2& x, std::vector<int>& dofs, std::vector<Vec2>& jump, std::vector<Vec2>& trac) {
      evaluator.side(e.owner, 1.0, avg, x, e.normal, mask, s0);
      dofs = s0.dofs;
      jump = s0.jump;
      trac = s0.traction;
      if (interior) {
        evaluator.side(*e.neighbor, -1.0, avg, x, e.normal, mask, s1);
        dofs.insert(dofs.end(), s1.dofs.begin(), s1.dofs.end());
        jump.insert(jump.end(), s1.jump.begin(), s1.jump.end());
        trac.insert(trac.end(), s1.traction.begin(), s1.traction.end());
      }
    };

    std::vector<int> dofs;
    std::vector<Vec2> jump, trac;
    const int nl = interior ? 12 : 6;
    local.setZero(nl, nl);
    for (std::size_t q = 0; q < edge_rule.size(); ++q) {
      const Vec2 x = x0 + edge_rule.points[q].x() * (x1 - x0);
      gather(x, dofs, jump, trac);
      const double w = edge_rule.weights[q] * hE;
      for (int i = 0; i < nl; ++i) {      // test
        const Vec2 Pm = pen.full.transpose() * jump[i];
        for (int j = 0; j < nl; ++j) {    // trial
          local(i, j) += w * (-trac[j].dot(jump[i]) + theta * jump[j].dot(trac[i]) + Pm.dot(jump[j]) / hE);
        }
      }
    }
    if (ui) {
      // (1/h_E) * h_E * (M:[u])(mid) (M:[v])(mid)
      gather(e.midpoint, dofs, jump, trac);
      for (int i = 0; i < nl; ++i) {
        const Vec2 Pm = pen.beta.transpose() * jump[i];
        for (int j = 0; j < nl; ++j) local(i, j) += Pm.dot(jump[j]);
      }
    }
    for (int i = 0; i < nl; ++i) {
      for (int j = 0; j < nl; ++j) trip.emplace_back(dofs[i], dofs[j], local(i, j));
    }

    if (!interior) {
      Vec2 g_mean = Vec2::Zero();
      for (std::size_t q = 0; q < load_rule.size(); ++q) {
        const Vec2 x = x0 + load_rule.points[q].x() * (x1 - x0);
        const Vec2 g = D * loads.dirichlet(x);
        g_mean += load_rule.weights[q] * g;
        gather(x, dofs, jump, trac);
        const double w = load_rule.weights[q] * hE;
        const Vec2 Pg = pen.full * g;
        for (int i = 0; i < nl; ++i) {
          sys.rhs(dofs[i]) += w * (theta * g.dot(trac[i]) + Pg.dot(jump[i]) / hE);
        }
      }
      if (ui) {
        gather(e.midpoint, dofs, jump, trac);
        const Vec2 Pg = pen.beta * g_mean;
        for (int i = 0; i < nl; ++i) sys.rhs(dofs[i]) += Pg.dot(jump[i]);
      }
    }
  }

  std::map<int, double> fixed;
  add_point_constraints(space, loads, fixed);
  sys.matrix = build(n, trip);
  apply_constraints(sys, fixed);
  return sys;
}

LinearSystem assemble(const FunctionSpace& space, const MaterialParams& material, const FiberDirection& fiber,
                      const MethodConfig& config, const LoadSpec& loads) {
  if (is_dg(config.method)) return assemble_dg(space, material, fiber, config, loads);
  return assemble_cg(space, material, fiber, loads);
}

AdmissibilityReport check_coercivity_params(const MethodConfig& config, const MaterialParams& material,
                                            double sipg_threshold) {
  config.stab.validate();
  AdmissibilityReport r;
  r.theta = config.theta();
  const StabilizationParams& s = config.stab;
  r.k = std::min({s.k_mu, s.k_lambda, s.k_alpha, s.k_beta, s.k_gamma});
  r.threshold = sipg_threshold;
  if (config.method == Method::NIPG) {
    r.full_dg_admissible = r.k > 0.0;
    if (!r.full_dg_admissible) r.notes.push_back("NIPG needs k > 0");
  } else if (is_dg(config.method)) {
    r.full_dg_admissible = r.k >= sipg_threshold;
    if (!r.full_dg_admissible) {
      r.notes.push_back("k = " + std::to_string(r.k) + " is below the SIPG/IIPG threshold " +
                        std::to_string(sipg_threshold));
    }
  } else {
    r.full_dg_admissible = true;
  }
  if (config.under_integrate_beta) {
    r.ui_checked = true;
    r.ui_lhs = material.mu_t > 0.0 ? 2.0 * s.k_beta * std::abs(material.beta) / material.mu_t
                                   : std::numeric_limits<double>::infinity();
    r.ui_rhs = s.k_mu;
    r.ui_admissible = s.k_mu > 0.0 && r.ui_lhs <= r.ui_rhs;
    if (!r.ui_admissible) {
      r.notes.push_back("under-integration condition 2 k_beta |beta| / mu_t <= k_mu fails (" +
                        std::to_string(r.ui_lhs) + " > " + std::to_string(r.ui_rhs) + "); advisory only");
    }
  }
  return r;
}

SparseMatrix dg_norm_matrix(const FunctionSpace& space, std::array<bool, 2> dirichlet_components) {
  const Mesh& mesh = space.mesh();
  const int n = space.dof_count();
  Triplets trip;
  Eigen::VectorXd unused = Eigen::VectorXd::Zero(n);
  // eps:eps = e11^2 + e22^2 + (2 e12)^2 / 2
  const Mat3 W = Eigen::Vector3d(1.0, 1.0, 0.5).asDiagonal();
  assemble_volume(space, W, nullptr, trip, unused);

  const QuadratureRule rule = edge_quadrature(2 * space.order() + 1);
  const Mat2 D = dirichlet_mask(dirichlet_components);
  EdgeEvaluator evaluator(space, nullptr);
  SideEval s0, s1;
  for (const Edge& e : mesh.edges()) {
    if (e.tag == EdgeTag::Neumann) continue;
    const bool interior = e.tag == EdgeTag::Interior;
    const Mat2 mask = interior ? Mat2::Identity() : D;
    const Vec2 x0 = mesh.vertices()[e.vertices[0]];
    const Vec2 x1 = mesh.vertices()[e.vertices[1]];
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec2 x = x0 + rule.points[q].x() * (x1 - x0);
      evaluator.side(e.owner, 1.0, 1.0, x, e.normal, mask, s0);
      std::vector<int> dofs = s0.dofs;
      std::vector<Vec2> jump = s0.jump;
      if (interior) {
        evaluator.side(*e.neighbor, -1.0, 1.0, x, e.normal, mask, s1);
        dofs.insert(dofs.end(), s1.dofs.begin(), s1.dofs.end());
        jump.insert(jump.end(), s1.jump.begin(), s1.jump.end());
      }
      const double w = 0.5 * rule.weights[q];  // (1/2)(1/h_E) * weight * h_E
      for (std::size_t i = 0; i < dofs.size(); ++i) {
        for (std::size_t j = 0; j < dofs.size(); ++j) {
          trip.emplace_back(dofs[i], dofs[j], w * jump[i].dot(jump[j]));
        }
      }
    }
  }
  return build(n, trip);
}

double estimate_coercivity(const FunctionSpace& space, const MaterialParams& material, const FiberDirection& fiber,
                           const MethodConfig& config, int samples, unsigned seed) {
  LoadSpec zero;
  zero.dirichlet = [](const Vec2&) { return Vec2::Zero(); };
  const LinearSystem sys = assemble(space, material, fiber, config, zero);
  const Eigen::MatrixXd A = Eigen::MatrixXd(sys.matrix);
  const Eigen::MatrixXd As = 0.5 * (A + A.transpose());
  const Eigen::MatrixXd B = Eigen::MatrixXd(dg_norm_matrix(space));

  if (samples > 0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    const double bscale = B.diagonal().cwiseAbs().maxCoeff();
    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXd v(A.rows());
    for (int s = 0; s < samples; ++s) {
      for (int i = 0; i < v.size(); ++i) v(i) = normal(rng);
      const double norm2 = v.dot(B * v);
      if (norm2 <= 1e-12 * bscale * v.squaredNorm()) continue;
      best = std::min(best, v.dot(As * v) / norm2);
    }
    return best;
  }

  // Restrict to the range of B, then reduce to a standard eigenproblem.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> beig(B);
  const Eigen::VectorXd& bl = beig.eigenvalues();
  const double cutoff = 1e-10 * bl.cwiseAbs().maxCoeff();
  std::vector<int> keep;
  for (int i = 0; i < bl.size(); ++i) {
    if (bl(i) > cutoff) keep.push_back(i);
  }
  Eigen::MatrixXd Z(B.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    Z.col(static_cast<Eigen::Index>(j)) = beig.eigenvectors().col(keep[j]) / std::sqrt(bl(keep[j]));
  }
  const Eigen::MatrixXd S = Z.transpose() * As * Z;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> seig(S, Eigen::EigenvaluesOnly);
  return seig.eigenvalues()(0);
}

double numeric_coercivity(const FunctionSpace& space, const MaterialParams& material, const FiberDirection& fiber,
                          const MethodConfig& config, int samples) {
  const double K = estimate_coercivity(space, material, fiber, config, samples);
  if (!(K > 0.0)) {
    throw Error(ErrorCode::NonPositive, "coercivity estimate " + std::to_string(K) + " <= 0");
  }
  return K;
}

std::string matrix_to_coordinate_text(const SparseMatrix& matrix) {
  std::ostringstream os;
  os.precision(17);
  for (int r = 0; r < matrix.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(matrix, r); it; ++it) {
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
  return os.str();
}

}  // namespace tidg
