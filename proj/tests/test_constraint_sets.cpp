#include "rankfeas/constraint_sets.hpp"
#include "rankfeas/errors.hpp"
#include "rankfeas/random.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace rankfeas;
using testing_support::max_abs_diff;
using testing_support::seeded_gaussian;
using testing_support::seeded_orthogonal;

namespace {

Matrix unit(Eigen::Index m, Eigen::Index n, Eigen::Index i, Eigen::Index j) {
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(m, n);
  e(i, j) = 1.0;
  return Matrix(e);
}

AffineConstraint random_affine(Eigen::Index m, Eigen::Index n, int p, std::uint64_t seed) {
  std::vector<Matrix> maps;
  for (int i = 0; i < p; ++i) maps.emplace_back(seeded_gaussian(m, n, seed * 100 + i));
  const Eigen::VectorXd b = seeded_gaussian(p, 1, seed + 999).col(0);
  return AffineConstraint(std::move(maps), b);
}

// Nearest point of {y : A y = b} through the normal equations of the stacked operator.
Matrix normal_equation_projection(const AffineConstraint& c, const Matrix& x) {
  const auto p = static_cast<Eigen::Index>(c.maps().size());
  Eigen::MatrixXd a(p, x.size());
  for (Eigen::Index i = 0; i < p; ++i) a.row(i) = c.maps()[i].vec().transpose();
  const Eigen::VectorXd lambda = (a * a.transpose()).ldlt().solve(a * x.vec() - c.rhs());
  return Matrix::from_vec(x.vec() - a.transpose() * lambda, x.rows(), x.cols());
}

MagnitudeConstraint random_magnitude(Eigen::Index m, Eigen::Index n, std::uint64_t seed, Matrix* feasible) {
  const Eigen::MatrixXd q = seeded_orthogonal(m * n, seed);
  const Matrix u(seeded_gaussian(m, n, seed + 3));
  if (feasible) *feasible = u;
  return MagnitudeConstraint(q, (q * u.vec()).cwiseAbs(), m, n);
}

}  // namespace

TEST(Affine, SingleEntryConstraint) {
  Eigen::VectorXd b(1);
  b << 1.0;
  const AffineConstraint c({unit(2, 2, 0, 0)}, b);
  EXPECT_LE(max_abs_diff(project_affine(c, Matrix(2, 2)), Matrix::from_rows({{1, 0}, {0, 0}})), 1e-15);
}

TEST(Affine, FeasiblePointIsFixed) {
  const AffineConstraint c = random_affine(3, 3, 4, 1);
  const Matrix y = project_affine(c, Matrix(seeded_gaussian(3, 3, 77)));
  EXPECT_LE(distance(project_affine(c, y), y), 1e-12);
}

TEST(Affine, MatchesNormalEquations) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const AffineConstraint c = random_affine(3, 3, 2, seed);
    const Matrix x(seeded_gaussian(3, 3, seed + 5000));
    const Matrix y = project_affine(c, x);
    EXPECT_LE(distance(y, normal_equation_projection(c, x)), 1e-10 * (1 + fro_norm(x)));
    EXPECT_LE(c.residual(y), 1e-9 * (1 + c.rhs().norm()));
    EXPECT_NEAR(c.distance(x), distance(x, y), 1e-10);
  }
}

TEST(Affine, LipschitzAndIdempotent) {
  const AffineConstraint c = random_affine(4, 3, 5, 2);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Matrix x(seeded_gaussian(4, 3, seed + 10));
    const Matrix y(seeded_gaussian(4, 3, seed + 20));
    EXPECT_LE(distance(project_affine(c, x), project_affine(c, y)), distance(x, y) + 1e-10);
    EXPECT_LE(distance(project_affine(c, project_affine(c, x)), project_affine(c, x)), 1e-12);
  }
}

TEST(Affine, InconsistentSystemRejectedAtConstruction) {
  Eigen::VectorXd b(2);
  b << 1.0, 2.0;
  EXPECT_THROW(AffineConstraint({unit(2, 2, 0, 0), unit(2, 2, 0, 0)}, b), ConfigError);
  EXPECT_THROW(AffineConstraint({}, Eigen::VectorXd(0)), ConfigError);
}

TEST(Affine, RedundantConsistentMapsAreAccepted) {
  Eigen::VectorXd b(2);
  b << 1.0, 2.0;
  const AffineConstraint c({unit(2, 2, 0, 0), 2.0 * unit(2, 2, 0, 0)}, b);
  EXPECT_EQ(c.basis().cols(), 1);
}

TEST(NormalSpaceAffine, SpecExamples) {
  Eigen::VectorXd b1(1);
  b1 << 0.0;
  const auto one = normal_space_affine(AffineConstraint({unit(2, 2, 0, 0)}, b1));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_LE(max_abs_diff(one[0], unit(2, 2, 0, 0)), 1e-15);

  Eigen::VectorXd b2(2);
  b2 << 0.0, 0.0;
  const auto two = normal_space_affine(AffineConstraint({unit(2, 2, 0, 0), 2.0 * unit(2, 2, 0, 0) + unit(2, 2, 0, 1)}, b2));
  ASSERT_EQ(two.size(), 2u);
  for (const auto& g : two) {
    EXPECT_NEAR(fro_norm(g), 1.0, 1e-15);
    EXPECT_EQ(g(1, 0), 0.0);
    EXPECT_EQ(g(1, 1), 0.0);
  }
  EXPECT_NEAR(trace_inner(two[0], two[1]), 0.0, 1e-15);
}

TEST(NormalSpaceAffine, GramIsIdentity) {
  const auto basis = normal_space_affine(random_affine(4, 4, 5, 3));
  ASSERT_EQ(basis.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(trace_inner(basis[i], basis[j]), i == j ? 1.0 : 0.0, 1e-10);
}

TEST(Magnitude, SignPreservingRescale) {
  Eigen::VectorXd b(2);
  b << 2.0, 3.0;
  const MagnitudeConstraint c(Eigen::MatrixXd::Identity(2, 2), b, 1, 2);
  EXPECT_LE(max_abs_diff(project_magnitude(c, Matrix::from_rows({{1, -1}})), Matrix::from_rows({{2, -3}})), 1e-15);
}

TEST(Magnitude, ZeroCoordinateGoesPositive) {
  Eigen::VectorXd b(2);
  b << 1.0, 1.0;
  const MagnitudeConstraint c(Eigen::MatrixXd::Identity(2, 2), b, 1, 2);
  EXPECT_LE(max_abs_diff(project_magnitude(c, Matrix::from_rows({{0, -4}})), Matrix::from_rows({{1, -1}})), 1e-15);
}

TEST(Magnitude, BeatsRandomFeasiblePoints) {
  Matrix u(1, 1);
  const MagnitudeConstraint c = random_magnitude(2, 3, 4, &u);
  EXPECT_LE(distance(project_magnitude(c, u), u), 1e-12);
  std::mt19937_64 gen(8);
  std::bernoulli_distribution coin;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix x(seeded_gaussian(2, 3, seed + 40));
    const Matrix px = project_magnitude(c, x);
    EXPECT_LE(c.residual(px), 1e-12);
    for (int t = 0; t < 500; ++t) {
      Eigen::VectorXd y = c.moduli();
      for (Eigen::Index j = 0; j < y.size(); ++j)
        if (coin(gen)) y(j) = -y(j);
      const Matrix feasible = Matrix::from_vec(c.transform().transpose() * y, 2, 3);
      EXPECT_LE(distance(x, px), distance(x, feasible) + 1e-12);
    }
  }
}

TEST(Magnitude, UnitaryInvarianceAndIdempotence) {
  const MagnitudeConstraint c = random_magnitude(3, 2, 9, nullptr);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Matrix x(seeded_gaussian(3, 2, seed));
    const Matrix px = project_magnitude(c, x);
    const double framed = (c.transform() * x.vec() - c.transform() * px.vec()).norm();
    EXPECT_NEAR(distance(x, px), framed, 1e-10);
    EXPECT_LE(distance(project_magnitude(c, px), px), 1e-12);
    EXPECT_NEAR(c.distance(x), distance(x, px), 1e-10);
  }
}

TEST(Magnitude, ConstructionChecks) {
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(2, 2);
  q(0, 1) = 0.1;
  EXPECT_THROW(MagnitudeConstraint(q, Eigen::VectorXd::Ones(2), 1, 2), ConfigError);
  EXPECT_THROW(MagnitudeConstraint(Eigen::MatrixXd::Identity(2, 2), -Eigen::VectorXd::Ones(2), 1, 2), ConfigError);
}

TEST(MagnitudeNormal, ScalarIsRadial) {
  Eigen::VectorXd b(1);
  b << 1.0;
  const MagnitudeConstraint c(Eigen::MatrixXd::Identity(1, 1), b, 1, 1);
  const Matrix v = normal_cone_magnitude_sample(c, Matrix::from_rows({{1}}), 3);
  EXPECT_GT(v(0, 0), 0.0);
}

TEST(MagnitudeNormal, OutwardPerCoordinate) {
  Eigen::VectorXd b(2);
  b << 1.0, 1.0;
  const MagnitudeConstraint c(Eigen::MatrixXd::Identity(2, 2), b, 1, 2);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix v = normal_cone_magnitude_sample(c, Matrix::from_rows({{1, -1}}), seed);
    EXPECT_GE(v(0, 0), 0.0);
    EXPECT_LE(v(0, 1), 0.0);
  }
  EXPECT_THROW(normal_cone_magnitude_sample(c, Matrix::from_rows({{2, -1}}), 0), PreconditionError);
}

TEST(MagnitudeNormal, RoundTripOnRandomInstance) {
  Matrix u(1, 1);
  const MagnitudeConstraint c = random_magnitude(6, 6, 12, &u);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Matrix v = normal_cone_magnitude_sample(c, u, seed);
    // A proximal normal at u: stepping a little along v projects back to u.
    const Matrix x = u + (0.1 / std::max(1.0, fro_norm(v))) * v;
    EXPECT_LE(distance(project_magnitude(c, x), u), 1e-10);
  }
}

TEST(ConstraintText, RoundTripBothKinds) {
  const Constraint a = random_affine(3, 2, 3, 5);
  std::stringstream sa;
  write_constraint(sa, a);
  const Constraint a2 = read_constraint(sa);
  const Matrix x(seeded_gaussian(3, 2, 1));
  EXPECT_EQ(project(a, x), project(a2, x));

  const Constraint m = random_magnitude(2, 2, 6, nullptr);
  std::stringstream sm;
  write_constraint(sm, m);
  const Constraint m2 = read_constraint(sm);
  EXPECT_EQ(std::get<MagnitudeConstraint>(m2).transform(), std::get<MagnitudeConstraint>(m).transform());
  EXPECT_EQ(std::get<MagnitudeConstraint>(m2).moduli(), std::get<MagnitudeConstraint>(m).moduli());
  EXPECT_EQ(kind_name(m2), kind_name(m));
}

TEST(ConstraintText, MalformedDocuments) {
  std::stringstream bad("constraint ellipse\n");
  EXPECT_THROW(read_constraint(bad), ConfigError);
  EXPECT_THROW(load_constraint("/nonexistent/c.txt"), IoError);
}
