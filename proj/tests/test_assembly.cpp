#include "ddm/assembly.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <Eigen/Cholesky>
#include <Eigen/SparseCholesky>

using namespace ddm;

namespace {

Matrix dense(const SparseMatrix& a) { return Matrix(a); }

} // namespace

TEST(Stiffness, UnitCoefficientStencil) {
  const Mesh mesh = build_mesh(8);
  const Matrix a = dense(assemble(mesh, CoefficientField::constant(1.0), model_load).A);
  for (auto [i, j] : {std::pair{2, 3}, std::pair{6, 5}}) {
    const Index d = mesh.dof(i, j);
    EXPECT_NEAR(a(d, d), 4.0, 1e-14);
    EXPECT_NEAR(a(d, mesh.dof(i - 1, j)), -1.0, 1e-14);
    EXPECT_NEAR(a(d, mesh.dof(i + 1, j)), -1.0, 1e-14);
    EXPECT_NEAR(a(d, mesh.dof(i, j - 1)), -1.0, 1e-14);
    EXPECT_NEAR(a(d, mesh.dof(i, j + 1)), -1.0, 1e-14);
    for (int di : {-1, 1})
      for (int dj : {-1, 1}) EXPECT_EQ(a(d, mesh.dof(i + di, j + dj)), 0.0);
    EXPECT_NEAR(a.row(d).sum(), 0.0, 1e-14);
  }
}

TEST(Stiffness, ScalesLinearlyWithCoefficient) {
  const Mesh mesh = build_mesh(8);
  const SparseMatrix a1 = assemble(mesh, CoefficientField::two_domain(0.5, 1.0, 3.0), model_load).A;
  const SparseMatrix a7 =
      assemble(mesh, CoefficientField::two_domain(0.5, 1.0, 3.0).scaled(7.0), model_load).A;
  EXPECT_EQ(oracle::max_abs(dense(a7) - 7.0 * dense(a1)), 0.0);
}

TEST(Stiffness, InterfaceRowWeightsEachSideByItsCoefficient) {
  const Mesh mesh = build_mesh(8);
  const Matrix a = dense(assemble(mesh, CoefficientField::two_domain(0.5, 1.0, 10.0), model_load).A);
  for (int j = 1; j < 8; ++j) {
    const Index d = mesh.dof(4, j);
    EXPECT_NEAR(10.0 * a(d, mesh.dof(3, j)), a(d, mesh.dof(5, j)), 1e-13);
  }
}

TEST(Stiffness, SymmetricPositiveDefiniteAndPartsSum) {
  const Mesh mesh = build_mesh(12);
  const auto sys = assemble(mesh, CoefficientField::checkerboard(3, 0.01, 5.0), model_load);
  const Matrix a = dense(sys.A);
  EXPECT_EQ(oracle::max_abs(a - a.transpose()), 0.0);
  EXPECT_EQ(Eigen::LLT<Matrix>(a).info(), Eigen::Success);
  ASSERT_EQ(sys.part_matrices.size(), 2u);
  EXPECT_LE(oracle::max_abs(dense(sys.part_matrices[0]) + dense(sys.part_matrices[1]) - a), 1e-14);
  EXPECT_LE((sys.part_loads[0] + sys.part_loads[1] - sys.f).norm(), 1e-15);
}

TEST(Stiffness, ConstantsAreHarmonicAwayFromBoundary) {
  const Mesh mesh = build_mesh(10);
  const auto sys = assemble(mesh, CoefficientField::constant(2.5), model_load);
  const Vector ones = Vector::Ones(mesh.num_dofs());
  const Vector r = sys.A * ones;
  const double scale = dense(sys.A).norm();
  for (int i = 2; i <= 8; ++i)
    for (int j = 2; j <= 8; ++j) EXPECT_LE(std::abs(r[mesh.dof(i, j)]), 1e-12 * scale);
}

TEST(Stiffness, MirrorInvariantForEqualCoefficients) {
  const Mesh mesh = build_mesh(8);
  const Matrix a = dense(assemble(mesh, CoefficientField::two_domain(0.5, 2.0, 2.0), model_load).A);
  const auto perm = mirror_permutation(mesh);
  for (Index r = 0; r < a.rows(); ++r)
    for (Index c = 0; c < a.cols(); ++c) {
      const Index pr = mesh.dof_of_node(perm[std::size_t(mesh.node_of_dof(r))]);
      const Index pc = mesh.dof_of_node(perm[std::size_t(mesh.node_of_dof(c))]);
      EXPECT_EQ(a(r, c), a(pr, pc));
    }
}

TEST(Stiffness, RejectsMisalignedCoefficient) {
  const Mesh mesh = build_mesh(4);
  EXPECT_THROW(assemble_stiffness(mesh, CoefficientField::two_domain(1.0 / 3.0, 1.0, 2.0)),
               std::invalid_argument);
  EXPECT_THROW(assemble_stiffness(build_mesh(10), CoefficientField::checkerboard(4, 1.0, 2.0)),
               std::invalid_argument);
  EXPECT_THROW(CoefficientField::constant(0.0), std::invalid_argument);
}

TEST(Load, ZeroField) {
  const Mesh mesh = build_mesh(6);
  EXPECT_EQ(assemble_load(mesh, [](double, double) { return 0.0; }).norm(), 0.0);
}

TEST(Load, UnitFieldGivesHSquared) {
  const Mesh mesh = build_mesh(8);
  const Vector f = assemble_load(mesh, [](double, double) { return 1.0; });
  const double h = mesh.h();
  for (Index d = 0; d < f.size(); ++d) EXPECT_NEAR(f[d], h * h, 1e-16);
}

TEST(Load, ModelLoadMatchesSevenPointOracle) {
  const Mesh mesh = build_mesh(4);
  const Vector f = assemble_load(mesh, model_load);
  const Vector ref = oracle::load_7point(mesh, model_load);
  EXPECT_LE((f - ref).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_NEAR(f[mesh.dof(2, 2)], ref[mesh.dof(2, 2)], 1e-14);
}

TEST(Load, ExactForQuadraticsOnFinerMesh) {
  const Mesh mesh = build_mesh(10);
  const ScalarField q = [](double x, double y) { return 3.0 * x * x - 2.0 * x * y + y * y - x + 0.5; };
  EXPECT_LE((assemble_load(mesh, q) - oracle::load_7point(mesh, q)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(InterfaceMass, TwoDomainFourCells) {
  const Mesh mesh = build_mesh(4);
  const Matrix m = dense(interface_mass(mesh, partition_two(mesh, 0.5)));
  const double h = mesh.h();
  ASSERT_EQ(m.rows(), 3);
  Matrix want = Matrix::Zero(3, 3);
  for (int k = 0; k < 3; ++k) want(k, k) = 2.0 * h / 3.0;
  for (int k = 0; k < 2; ++k) want(k, k + 1) = want(k + 1, k) = h / 6.0;
  EXPECT_LE(oracle::max_abs(m - want), 1e-16);
}

TEST(InterfaceMass, PartitionOfUnityOnInteriorStretch) {
  const Mesh mesh = build_mesh(16);
  const Vector r = interface_mass(mesh, partition_two(mesh, 0.25)) * Vector::Ones(15);
  for (Index k = 1; k + 1 < r.size(); ++k) EXPECT_NEAR(r[k], mesh.h(), 1e-16);
  EXPECT_NEAR(r[0], 5.0 * mesh.h() / 6.0, 1e-16);
}

TEST(InterfaceMass, CrossPointCollectsFourSegments) {
  const Mesh mesh = build_mesh(8);
  const auto part = partition_redblack(mesh, 2);
  const Matrix m = dense(interface_mass(mesh, part));
  const Index c = Index(part.delta.size());  // cross point comes after delta
  EXPECT_NEAR(m(c, c), 4.0 * 2.0 * mesh.h() / 6.0, 1e-16);
  EXPECT_EQ(Eigen::LLT<Matrix>(m).info(), Eigen::Success);
  EXPECT_EQ(oracle::max_abs(m - m.transpose()), 0.0);
}

TEST(Convergence, SecondOrderDiscreteL2Error) {
  double previous = 0.0;
  for (int n : {8, 16, 32, 64}) {
    const Mesh mesh = build_mesh(n);
    const auto sys = assemble(mesh, CoefficientField::constant(1.0), model_load);
    const Vector u = Eigen::SimplicialLDLT<SparseMatrix>(sys.A).solve(sys.f);
    const double err = discrete_l2_error(mesh, u, model_solution);
    if (previous > 0.0) {
      EXPECT_GE(previous / err, 3.6) << "n = " << n;
      EXPECT_LE(previous / err, 4.4) << "n = " << n;
    }
    previous = err;
  }
}

TEST(ModelProblem, ExactSolutionSatisfiesPoisson) {
  // -Laplacian of x(1-x)y(1-y) by central differences of the closed form.
  const double e = 1e-4;
  for (auto [x, y] : {std::pair{0.3, 0.7}, std::pair{0.5, 0.5}, std::pair{0.9, 0.1}}) {
    const double lap = (model_solution(x + e, y) + model_solution(x - e, y) + model_solution(x, y + e) +
                        model_solution(x, y - e) - 4.0 * model_solution(x, y)) /
                       (e * e);
    EXPECT_NEAR(-lap, model_load(x, y), 1e-6);
  }
}
