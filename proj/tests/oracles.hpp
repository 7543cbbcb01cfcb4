#pragma once

// Independent dense reference computations used by the tests.

#include "ddm/assembly.hpp"
#include "ddm/types.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace oracle {

using ddm::Index;
using ddm::IndexSet;
using ddm::Matrix;
using ddm::Vector;

inline Matrix dense_block(const Matrix& a, const IndexSet& rows, const IndexSet& cols) {
  Matrix out(Index(rows.size()), Index(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(Index(i), Index(j)) = a(rows[i], cols[j]);
  return out;
}

/// Dense Schur complement of a onto `keep`, eliminating `drop`.
inline Matrix schur(const Matrix& a, const IndexSet& drop, const IndexSet& keep) {
  const Matrix a_dd = dense_block(a, drop, drop);
  const Matrix a_dk = dense_block(a, drop, keep);
  const Matrix a_kd = dense_block(a, keep, drop);
  const Matrix a_kk = dense_block(a, keep, keep);
  if (drop.empty()) return a_kk;
  return a_kk - a_kd * a_dd.fullPivLu().solve(a_dk);
}

/// Seven-point degree-5 rule on the reference triangle: (barycentric a, b, c), weight (sum 1).
inline std::vector<std::array<double, 4>> seven_point_rule() {
  const double a1 = 0.059715871789770, b1 = 0.470142064105115;
  const double a2 = 0.797426985353087, b2 = 0.101286507323456;
  const double w0 = 0.225, w1 = 0.132394152788506, w2 = 0.125939180544827;
  return {{1.0 / 3, 1.0 / 3, 1.0 / 3, w0}, {a1, b1, b1, w1}, {b1, a1, b1, w1},
          {b1, b1, a1, w1},                {a2, b2, b2, w2}, {b2, a2, b2, w2},
          {b2, b2, a2, w2}};
}

/// int f phi_j over the square for each free dof, element by element with the 7-point rule.
inline Vector load_7point(const ddm::Mesh& mesh, const ddm::ScalarField& f) {
  Vector out = Vector::Zero(mesh.num_dofs());
  const auto rule = seven_point_rule();
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[std::size_t(t)];
    const double area = std::abs(ddm::signed_area(mesh, t));
    for (const auto& q : rule) {
      Eigen::Vector2d x = Eigen::Vector2d::Zero();
      for (int k = 0; k < 3; ++k) x += q[std::size_t(k)] * mesh.nodes[std::size_t(tri[std::size_t(k)])];
      const double fx = f(x[0], x[1]);
      for (int k = 0; k < 3; ++k) {
        const Index d = mesh.dof_of_node(tri[std::size_t(k)]);
        if (d >= 0) out[d] += area * q[3] * fx * q[std::size_t(k)];
      }
    }
  }
  return out;
}

inline Vector random_vector(Index n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = dist(gen);
  return v;
}

inline double max_abs(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }

} // namespace oracle
