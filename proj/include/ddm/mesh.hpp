#pragma once

#include "ddm/types.hpp"

#include <Eigen/Core>

#include <array>
#include <vector>

namespace ddm {

/// Structured triangulation of the unit square with (n+1)^2 lattice nodes.
///
/// Nodes are numbered x-major: node(i, j) = i*(n+1) + j sits at (i/n, j/n).
/// Cells left of x = 1/2 are cut by the lower-left/upper-right diagonal, cells
/// right of it by the lower-right/upper-left one, so the triangle set is
/// invariant under x -> 1-x.
///
/// Unknowns are the interior (non-Dirichlet) nodes, numbered in the same
/// lexicographic order: dof(i, j) = (i-1)*(n-1) + (j-1).
struct Mesh {
  int n = 0;
  std::vector<Eigen::Vector2d> nodes;
  std::vector<std::array<Index, 3>> triangles;
  std::vector<char> on_boundary;

  double h() const { return 1.0 / n; }
  Index num_nodes() const { return static_cast<Index>(nodes.size()); }
  Index num_triangles() const { return static_cast<Index>(triangles.size()); }
  Index num_dofs() const { return Index(n - 1) * (n - 1); }

  Index node(int i, int j) const { return Index(i) * (n + 1) + j; }
  int column(Index node) const { return static_cast<int>(node / (n + 1)); }
  int row(Index node) const { return static_cast<int>(node % (n + 1)); }

  /// Free-dof index of interior lattice point (i, j), 1 <= i, j <= n-1.
  Index dof(int i, int j) const { return Index(i - 1) * (n - 1) + (j - 1); }
  /// -1 for boundary nodes.
  Index dof_of_node(Index node) const;
  Index node_of_dof(Index dof) const;

  /// Lattice coordinates (i, j) of a free dof.
  std::array<int, 2> lattice_of_dof(Index dof) const;
};

/// Throws std::invalid_argument unless n >= 2 and n is even.
Mesh build_mesh(int n);

/// Signed area of triangle t (positive for counter-clockwise orientation).
double signed_area(const Mesh& mesh, Index t);

/// Node permutation induced by x -> 1-x.
std::vector<Index> mirror_permutation(const Mesh& mesh);

/// Two subdomains separated by the vertical line x = a.
struct TwoDomainPartition {
  double a = 0.5;
  int column = 0;       ///< lattice column of the interface, a*n
  IndexSet interior1;   ///< free dofs with x < a
  IndexSet interface;   ///< free dofs on x = a
  IndexSet interior2;   ///< free dofs with x > a
};

/// Throws std::invalid_argument if a*n is not an integer or a is not in (0,1).
TwoDomainPartition partition_two(const Mesh& mesh, double a);

enum class Color { red, black };

/// N x N checkerboard of square subdomains of H/h = n/N cells each.
///
/// Subdomain k = p*N + q covers cells [p*m, (p+1)*m) x [q*m, (q+1)*m), and is
/// red iff p + q is even. The interface is ordered delta first, then cross
/// points, which is the (0, g_delta, g_C) layout used by all interface solves.
struct RedBlackPartition {
  int N = 0;
  int cells_per_subdomain = 0;  ///< m = H/h
  double H = 0.0;

  IndexSet interior_red;
  IndexSet interior_black;
  IndexSet delta;       ///< interface dofs that are not cross points
  IndexSet cross;       ///< cross points
  IndexSet interface;   ///< delta followed by cross
  std::vector<IndexSet> subdomain_interior;

  int num_subdomains() const { return N * N; }
  int subdomain_of_cell(int ci, int cj) const;
  Color color(int subdomain) const;
  /// Lattice lines (both directions) carrying interface edges: multiples of m in (0, n).
  std::vector<int> interface_lines(int n) const;
};

/// Throws std::invalid_argument unless N >= 2, N divides n, and n/N >= 2.
RedBlackPartition partition_redblack(const Mesh& mesh, int N);

} // namespace ddm
