#include "ddm/assembly.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace ddm {

namespace {

struct QuadraturePoint {
  std::array<double, 3> bary;
  double weight;
};

// Dunavant degree-4 rule; weights sum to 1 (multiply by the area).
const std::array<QuadraturePoint, 6>& triangle_rule() {
  static const std::array<QuadraturePoint, 6> rule = [] {
    const double a1 = 0.108103018168070, b1 = 0.445948490915965, w1 = 0.223381589678011;
    const double a2 = 0.816847572980459, b2 = 0.091576213509771, w2 = 0.109951743655322;
    return std::array<QuadraturePoint, 6>{{
        {{a1, b1, b1}, w1}, {{b1, a1, b1}, w1}, {{b1, b1, a1}, w1},
        {{a2, b2, b2}, w2}, {{b2, a2, b2}, w2}, {{b2, b2, a2}, w2},
    }};
  }();
  return rule;
}

bool on_lattice(double value, int n) {
  const double scaled = value * n;
  return std::abs(scaled - std::round(scaled)) <= 1e-9;
}

void check_positive(double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu))
    throw std::invalid_argument("coefficient values must be positive and finite");
}

Eigen::Vector2d centroid(const Mesh& mesh, const std::array<Index, 3>& tri) {
  return (mesh.nodes[std::size_t(tri[0])] + mesh.nodes[std::size_t(tri[1])] +
          mesh.nodes[std::size_t(tri[2])]) / 3.0;
}

} // namespace

CoefficientField CoefficientField::constant(double nu) {
  check_positive(nu);
  CoefficientField c;
  c.kind_ = Kind::constant;
  c.values_ = {nu};
  return c;
}

CoefficientField CoefficientField::two_domain(double a, double nu1, double nu2) {
  check_positive(nu1);
  check_positive(nu2);
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("two_domain: a must lie in (0, 1)");
  CoefficientField c;
  c.kind_ = Kind::two_domain;
  c.a_ = a;
  c.values_ = {nu1, nu2};
  return c;
}

CoefficientField CoefficientField::checkerboard(int N, double nu_red, double nu_black) {
  check_positive(nu_red);
  check_positive(nu_black);
  if (N < 1) throw std::invalid_argument("checkerboard: N must be positive");
  CoefficientField c;
  c.kind_ = Kind::checkerboard;
  c.N_ = N;
  c.values_ = {nu_red, nu_black};
  return c;
}

int CoefficientField::region_of(const Eigen::Vector2d& point) const {
  switch (kind_) {
    case Kind::constant: return 0;
    case Kind::two_domain: return point.x() < a_ ? 0 : 1;
    case Kind::checkerboard: {
      const int p = std::min(N_ - 1, static_cast<int>(point.x() * N_));
      const int q = std::min(N_ - 1, static_cast<int>(point.y() * N_));
      return (p + q) % 2 == 0 ? 0 : 1;
    }
  }
  return 0;
}

void CoefficientField::check_alignment(int n) const {
  if (kind_ == Kind::two_domain && !on_lattice(a_, n))
    throw std::invalid_argument("coefficient jump at x = " + std::to_string(a_) +
                                " is not a mesh line for n = " + std::to_string(n));
  if (kind_ == Kind::checkerboard && n % N_ != 0)
    throw std::invalid_argument("checkerboard with N = " + std::to_string(N_) +
                                " is not aligned with n = " + std::to_string(n));
}

CoefficientField CoefficientField::scaled(double c) const {
  check_positive(c);
  CoefficientField out = *this;
  for (double& v : out.values_) v *= c;
  return out;
}

std::vector<SparseMatrix> assemble_stiffness(const Mesh& mesh, const CoefficientField& coeff) {
  coeff.check_alignment(mesh.n);
  const Index ndof = mesh.num_dofs();
  std::vector<std::vector<Eigen::Triplet<double>>> entries(std::size_t(coeff.num_regions()));

  for (const auto& tri : mesh.triangles) {
    const int region = coeff.region_of(centroid(mesh, tri));
    const double nu = coeff.value(region);

    Eigen::Matrix<double, 2, 3> x;
    for (int k = 0; k < 3; ++k) x.col(k) = mesh.nodes[std::size_t(tri[std::size_t(k)])];
    Eigen::Matrix2d jac;
    jac.col(0) = x.col(1) - x.col(0);
    jac.col(1) = x.col(2) - x.col(0);
    const double area = 0.5 * std::abs(jac.determinant());
    Eigen::Matrix<double, 2, 3> ref_grad;
    ref_grad << -1, 1, 0, -1, 0, 1;
    const Eigen::Matrix<double, 2, 3> grad = jac.inverse().transpose() * ref_grad;
    const Eigen::Matrix3d local = nu * area * grad.transpose() * grad;

    for (int r = 0; r < 3; ++r) {
      const Index dr = mesh.dof_of_node(tri[std::size_t(r)]);
      if (dr < 0) continue;
      for (int c = 0; c < 3; ++c) {
        const Index dc = mesh.dof_of_node(tri[std::size_t(c)]);
        if (dc < 0) continue;
        entries[std::size_t(region)].emplace_back(dr, dc, local(r, c));
      }
    }
  }

  std::vector<SparseMatrix> parts;
  for (auto& e : entries) {
    SparseMatrix a(ndof, ndof);
    a.setFromTriplets(e.begin(), e.end());
    a.prune(0.0);
    parts.push_back(std::move(a));
  }
  return parts;
}

std::vector<Vector> assemble_load(const Mesh& mesh, const CoefficientField& coeff,
                                  const ScalarField& f) {
  std::vector<Vector> parts(std::size_t(coeff.num_regions()), Vector::Zero(mesh.num_dofs()));
  const auto& rule = triangle_rule();
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[std::size_t(t)];
    Vector& load = parts[std::size_t(coeff.region_of(centroid(mesh, tri)))];
    const double area = std::abs(signed_area(mesh, t));
    for (const auto& q : rule) {
      Eigen::Vector2d p = Eigen::Vector2d::Zero();
      for (int k = 0; k < 3; ++k) p += q.bary[std::size_t(k)] * mesh.nodes[std::size_t(tri[std::size_t(k)])];
      const double fq = f(p.x(), p.y()) * q.weight * area;
      for (int k = 0; k < 3; ++k) {
        const Index d = mesh.dof_of_node(tri[std::size_t(k)]);
        if (d >= 0) load[d] += fq * q.bary[std::size_t(k)];
      }
    }
  }
  return parts;
}

Vector assemble_load(const Mesh& mesh, const ScalarField& f) {
  return assemble_load(mesh, CoefficientField::constant(1.0), f).front();
}

AssembledSystem assemble(const Mesh& mesh, const CoefficientField& coeff, const ScalarField& f) {
  AssembledSystem sys;
  sys.mesh = mesh;
  sys.coefficient = coeff;
  sys.part_matrices = assemble_stiffness(mesh, coeff);
  sys.part_loads = assemble_load(mesh, coeff, f);
  sys.A = sys.part_matrices.front();
  sys.f = sys.part_loads.front();
  for (std::size_t k = 1; k < sys.part_matrices.size(); ++k) {
    sys.A += sys.part_matrices[k];
    sys.f += sys.part_loads[k];
  }
  sys.A.prune(0.0);
  return sys;
}

SparseMatrix assemble_interface_mass(const Mesh& mesh, const IndexSet& interface,
                                     const std::vector<int>& vertical_columns,
                                     const std::vector<int>& horizontal_rows) {
  std::unordered_map<Index, Index> local;
  for (std::size_t k = 0; k < interface.size(); ++k) local.emplace(interface[k], Index(k));

  const double h = mesh.h();
  std::vector<Eigen::Triplet<double>> entries;
  auto add_segment = [&](Index node_a, Index node_b) {
    const std::array<Index, 2> dofs{mesh.dof_of_node(node_a), mesh.dof_of_node(node_b)};
    std::array<Index, 2> loc{-1, -1};
    for (int k = 0; k < 2; ++k) {
      if (dofs[std::size_t(k)] < 0) continue;
      const auto it = local.find(dofs[std::size_t(k)]);
      if (it == local.end())
        throw std::invalid_argument("assemble_interface_mass: interface line node missing from the interface set");
      loc[std::size_t(k)] = it->second;
    }
    for (int r = 0; r < 2; ++r) {
      if (loc[std::size_t(r)] < 0) continue;
      for (int c = 0; c < 2; ++c) {
        if (loc[std::size_t(c)] < 0) continue;
        entries.emplace_back(loc[std::size_t(r)], loc[std::size_t(c)], h / 6.0 * (r == c ? 2.0 : 1.0));
      }
    }
  };

  for (int col : vertical_columns)
    for (int j = 0; j < mesh.n; ++j) add_segment(mesh.node(col, j), mesh.node(col, j + 1));
  for (int row : horizontal_rows)
    for (int i = 0; i < mesh.n; ++i) add_segment(mesh.node(i, row), mesh.node(i + 1, row));

  const Index dim = Index(interface.size());
  SparseMatrix m(dim, dim);
  m.setFromTriplets(entries.begin(), entries.end());
  return m;
}

SparseMatrix interface_mass(const Mesh& mesh, const TwoDomainPartition& part) {
  return assemble_interface_mass(mesh, part.interface, {part.column}, {});
}

SparseMatrix interface_mass(const Mesh& mesh, const RedBlackPartition& part) {
  const auto lines = part.interface_lines(mesh.n);
  return assemble_interface_mass(mesh, part.interface, lines, lines);
}

double model_load(double x, double y) { return -2.0 * (x * x + y * y - x - y); }

double model_solution(double x, double y) { return x * (1.0 - x) * y * (1.0 - y); }

double discrete_l2_error(const Mesh& mesh, const Eigen::Ref<const Vector>& u,
                         const ScalarField& exact) {
  double sum = 0.0;
  for (Index d = 0; d < mesh.num_dofs(); ++d) {
    const auto& p = mesh.nodes[std::size_t(mesh.node_of_dof(d))];
    const double e = u[d] - exact(p.x(), p.y());
    sum += e * e;
  }
  return mesh.h() * std::sqrt(sum);
}

} // namespace ddm
