#include "cli/isotropic_reference.hpp"

#include <array>
#include <cmath>

namespace tidg::cli {

namespace {

// Linear shape functions phi_j = (a_j + b_j x + c_j y) / (2 A).
struct P1Element {
  std::array<double, 3> a, b, c;
  double two_area;

  explicit P1Element(const std::array<Vec2, 3>& p) {
    for (int j = 0; j < 3; ++j) {
      const Vec2& q = p[(j + 1) % 3];
      const Vec2& r = p[(j + 2) % 3];
      a[j] = q.x() * r.y() - r.x() * q.y();
      b[j] = q.y() - r.y();
      c[j] = r.x() - q.x();
    }
    two_area = b[0] * c[1] - b[1] * c[0];
  }
  double value(int j, const Vec2& x) const { return (a[j] + b[j] * x.x() + c[j] * x.y()) / two_area; }
  Vec2 grad(int j) const { return Vec2(b[j], c[j]) / two_area; }
};

// Gradient tensor of basis function j in component comp: e_comp (x) grad phi_j.
Mat2 basis_gradient(const P1Element& el, int j, int comp) {
  Mat2 G = Mat2::Zero();
  G.row(comp) = el.grad(j).transpose();
  return G;
}

Mat2 stress(const Mat2& G, double lambda, double mu) {
  return lambda * G.trace() * Mat2::Identity() + mu * (G + G.transpose());
}

}  // namespace

Eigen::MatrixXd isotropic_ipdg_matrix(const Mesh& mesh, double lambda, double mu, double theta, double k_lambda,
                                      double k_mu) {
  const int n = 6 * mesh.num_triangles();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  std::vector<P1Element> elems;
  for (int t = 0; t < mesh.num_triangles(); ++t) elems.emplace_back(mesh.triangle_points(t));
  auto gdof = [](int t, int j, int comp) { return 2 * (3 * t + j) + comp; };

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const P1Element& el = elems[t];
    const double area = 0.5 * el.two_area;
    for (int i = 0; i < 3; ++i) {
      for (int ci = 0; ci < 2; ++ci) {
        const Mat2 Gv = basis_gradient(el, i, ci);
        const Mat2 ev = 0.5 * (Gv + Gv.transpose());
        for (int j = 0; j < 3; ++j) {
          for (int cj = 0; cj < 2; ++cj) {
            const Mat2 Su = stress(basis_gradient(el, j, cj), lambda, mu);
            K(gdof(t, i, ci), gdof(t, j, cj)) += area * (Su.array() * ev.array()).sum();
          }
        }
      }
    }
  }

  const double g = 0.5 / std::sqrt(3.0);
  const std::array<double, 2> s_pts{0.5 - g, 0.5 + g};
  for (const Edge& e : mesh.edges()) {
    if (e.tag == EdgeTag::Neumann) continue;
    const Vec2 x0 = mesh.vertices()[e.vertices[0]];
    const Vec2 x1 = mesh.vertices()[e.vertices[1]];
    const double h = (x1 - x0).norm();
    const Vec2 n = e.normal;
    std::vector<int> sides{e.owner};
    if (e.neighbor) sides.push_back(*e.neighbor);
    const double avg = e.neighbor ? 0.5 : 1.0;
    for (double s : s_pts) {
      const Vec2 x = x0 + s * (x1 - x0);
      const double w = 0.5 * h;
      // Collect (dof, jump vector, averaged traction) for every basis function.
      struct Entry {
        int dof;
        Vec2 jump;
        Vec2 trac;
      };
      std::vector<Entry> entries;
      for (std::size_t k = 0; k < sides.size(); ++k) {
        const int t = sides[k];
        const double sign = k == 0 ? 1.0 : -1.0;
        for (int j = 0; j < 3; ++j) {
          for (int comp = 0; comp < 2; ++comp) {
            Vec2 jump = Vec2::Zero();
            jump(comp) = sign * elems[t].value(j, x);
            const Vec2 trac = avg * stress(basis_gradient(elems[t], j, comp), lambda, mu) * n;
            entries.push_back({gdof(t, j, comp), jump, trac});
          }
        }
      }
      for (const Entry& v : entries) {
        for (const Entry& u : entries) {
          const double penalty =
              (k_lambda * lambda * u.jump.dot(n) * v.jump.dot(n) + k_mu * mu * u.jump.dot(v.jump)) / h;
          K(v.dof, u.dof) += w * (-u.trac.dot(v.jump) + theta * v.trac.dot(u.jump) + penalty);
        }
      }
    }
  }
  return K;
}

}  // namespace tidg::cli
