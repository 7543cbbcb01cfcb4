#include "ddm/mesh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ddm {

Index Mesh::dof_of_node(Index k) const {
  const int i = column(k);
  const int j = row(k);
  if (i <= 0 || j <= 0 || i >= n || j >= n) return -1;
  return dof(i, j);
}

Index Mesh::node_of_dof(Index d) const {
  const auto [i, j] = lattice_of_dof(d);
  return node(i, j);
}

std::array<int, 2> Mesh::lattice_of_dof(Index d) const {
  return {static_cast<int>(d / (n - 1)) + 1, static_cast<int>(d % (n - 1)) + 1};
}

Mesh build_mesh(int n) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("build_mesh: n must be even and >= 2, got " + std::to_string(n));

  Mesh mesh;
  mesh.n = n;
  mesh.nodes.reserve(std::size_t(n + 1) * (n + 1));
  mesh.on_boundary.reserve(std::size_t(n + 1) * (n + 1));
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      mesh.nodes.emplace_back(double(i) / n, double(j) / n);
      mesh.on_boundary.push_back(i == 0 || j == 0 || i == n || j == n);
    }
  }

  mesh.triangles.reserve(std::size_t(2) * n * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Index ll = mesh.node(i, j);
      const Index lr = mesh.node(i + 1, j);
      const Index ur = mesh.node(i + 1, j + 1);
      const Index ul = mesh.node(i, j + 1);
      if (2 * i + 1 < n) {
        mesh.triangles.push_back({ll, lr, ur});
        mesh.triangles.push_back({ll, ur, ul});
      } else {
        mesh.triangles.push_back({ll, lr, ul});
        mesh.triangles.push_back({lr, ur, ul});
      }
    }
  }
  return mesh;
}

double signed_area(const Mesh& mesh, Index t) {
  const auto& tri = mesh.triangles[std::size_t(t)];
  const Eigen::Vector2d e1 = mesh.nodes[std::size_t(tri[1])] - mesh.nodes[std::size_t(tri[0])];
  const Eigen::Vector2d e2 = mesh.nodes[std::size_t(tri[2])] - mesh.nodes[std::size_t(tri[0])];
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

std::vector<Index> mirror_permutation(const Mesh& mesh) {
  std::vector<Index> perm(std::size_t(mesh.num_nodes()));
  for (Index k = 0; k < mesh.num_nodes(); ++k)
    perm[std::size_t(k)] = mesh.node(mesh.n - mesh.column(k), mesh.row(k));
  return perm;
}

TwoDomainPartition partition_two(const Mesh& mesh, double a) {
  const double an = a * mesh.n;
  const long column = std::lround(an);
  if (!(a > 0.0 && a < 1.0) || std::abs(an - double(column)) > 1e-9)
    throw std::invalid_argument("partition_two: interface x = " + std::to_string(a) +
                                " is not a mesh line for n = " + std::to_string(mesh.n));

  TwoDomainPartition p;
  p.a = a;
  p.column = static_cast<int>(column);
  for (Index d = 0; d < mesh.num_dofs(); ++d) {
    const int i = mesh.lattice_of_dof(d)[0];
    if (i < p.column)
      p.interior1.push_back(d);
    else if (i == p.column)
      p.interface.push_back(d);
    else
      p.interior2.push_back(d);
  }
  return p;
}

int RedBlackPartition::subdomain_of_cell(int ci, int cj) const {
  return (ci / cells_per_subdomain) * N + cj / cells_per_subdomain;
}

Color RedBlackPartition::color(int subdomain) const {
  const int p = subdomain / N;
  const int q = subdomain % N;
  return (p + q) % 2 == 0 ? Color::red : Color::black;
}

std::vector<int> RedBlackPartition::interface_lines(int n) const {
  std::vector<int> lines;
  for (int l = cells_per_subdomain; l < n; l += cells_per_subdomain) lines.push_back(l);
  return lines;
}

RedBlackPartition partition_redblack(const Mesh& mesh, int N) {
  const int n = mesh.n;
  if (N < 2 || n % N != 0 || n / N < 2)
    throw std::invalid_argument("partition_redblack: N = " + std::to_string(N) +
                                " must be >= 2 and divide n = " + std::to_string(n) +
                                " with H/h >= 2");

  RedBlackPartition p;
  p.N = N;
  p.cells_per_subdomain = n / N;
  p.H = 1.0 / N;
  p.subdomain_interior.resize(std::size_t(N) * N);

  const int m = p.cells_per_subdomain;
  for (Index d = 0; d < mesh.num_dofs(); ++d) {
    const auto [i, j] = mesh.lattice_of_dof(d);
    const bool on_x = i % m == 0;
    const bool on_y = j % m == 0;
    if (on_x && on_y) {
      p.cross.push_back(d);
    } else if (on_x || on_y) {
      p.delta.push_back(d);
    } else {
      const int k = p.subdomain_of_cell(i, j);
      p.subdomain_interior[std::size_t(k)].push_back(d);
      (p.color(k) == Color::red ? p.interior_red : p.interior_black).push_back(d);
    }
  }
  p.interface = concat(p.delta, p.cross);
  return p;
}

} // namespace ddm
