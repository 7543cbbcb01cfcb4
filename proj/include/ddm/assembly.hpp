#pragma once

#include "ddm/mesh.hpp"
#include "ddm/types.hpp"

#include <functional>
#include <vector>

namespace ddm {

using ScalarField = std::function<double(double, double)>;

/// Piecewise-constant diffusion coefficient.
///
/// Regions: constant has one; two_domain has {x < a, x > a}; checkerboard has
/// {red, black} where subdomain (p, q) of the N x N array is red iff p+q is even.
class CoefficientField {
public:
  enum class Kind { constant, two_domain, checkerboard };

  static CoefficientField constant(double nu);
  static CoefficientField two_domain(double a, double nu1, double nu2);
  static CoefficientField checkerboard(int N, double nu_red, double nu_black);

  Kind kind() const { return kind_; }
  int num_regions() const { return kind_ == Kind::constant ? 1 : 2; }
  double value(int region) const { return values_[std::size_t(region)]; }
  int region_of(const Eigen::Vector2d& point) const;

  double interface_x() const { return a_; }
  int subdomains_per_side() const { return N_; }

  /// Throws std::invalid_argument unless every region boundary is a mesh line of build_mesh(n).
  void check_alignment(int n) const;

  CoefficientField scaled(double c) const;

private:
  Kind kind_ = Kind::constant;
  double a_ = 0.5;
  int N_ = 1;
  std::vector<double> values_{1.0};
};

struct AssembledSystem {
  Mesh mesh;
  CoefficientField coefficient;
  SparseMatrix A;                          ///< free-dof stiffness, sum of the parts
  Vector f;                                ///< free-dof load, sum of the parts
  std::vector<SparseMatrix> part_matrices; ///< element contributions of each region only
  std::vector<Vector> part_loads;
};

/// Stiffness contributions per coefficient region; Dirichlet dofs eliminated, exact zeros pruned.
std::vector<SparseMatrix> assemble_stiffness(const Mesh& mesh, const CoefficientField& coeff);

/// Load contributions per coefficient region, 6-point degree-4 rule per triangle.
std::vector<Vector> assemble_load(const Mesh& mesh, const CoefficientField& coeff,
                                  const ScalarField& f);

/// Load vector for a single region covering the whole square.
Vector assemble_load(const Mesh& mesh, const ScalarField& f);

AssembledSystem assemble(const Mesh& mesh, const CoefficientField& coeff, const ScalarField& f);

/// 1-D P1 mass matrix on the interface lines, in the local numbering of `interface`.
///
/// Every lattice segment on a listed line contributes (h/6)[[2,1],[1,2]];
/// rows of Dirichlet endpoints are dropped.
SparseMatrix assemble_interface_mass(const Mesh& mesh, const IndexSet& interface,
                                     const std::vector<int>& vertical_columns,
                                     const std::vector<int>& horizontal_rows);

SparseMatrix interface_mass(const Mesh& mesh, const TwoDomainPartition& part);
SparseMatrix interface_mass(const Mesh& mesh, const RedBlackPartition& part);

/// -2(x^2 + y^2 - x - y).
double model_load(double x, double y);
/// x(1-x)y(1-y), the solution for model_load with nu = 1.
double model_solution(double x, double y);

/// Nodal discrete L2 error h * ||u - u_exact||_2 over the free dofs.
double discrete_l2_error(const Mesh& mesh, const Eigen::Ref<const Vector>& u,
                         const ScalarField& exact);

} // namespace ddm
