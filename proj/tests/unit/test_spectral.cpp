#include "rankone/errors.hpp"
#include "rankone/linalg.hpp"
#include "rankone/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace rankone;

namespace {

const Complex I{0.0, 1.0};

DenseOperator diag(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (double x : values) v(k++) = x;
  return DenseOperator(v.asDiagonal().toDenseMatrix(), OperatorKind::selfadjoint);
}

DenseOperator swap2() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return DenseOperator(m, OperatorKind::selfadjoint);
}

Vector vec(std::initializer_list<Complex> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (Complex x : values) v(k++) = x;
  return v;
}

AtomicSpectralMeasure line(std::initializer_list<Atom> atoms) { return {SupportKind::real_line, atoms}; }
AtomicSpectralMeasure circle(std::initializer_list<Atom> atoms) { return {SupportKind::unit_circle, atoms}; }

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("diagonal eigendecomposition") {
  const EigenDecomposition d = eigendecompose(diag({3, 1, 2}));
  CHECK(d.values(0).real() == doctest::Approx(1));
  CHECK(d.values(1).real() == doctest::Approx(2));
  CHECK(d.values(2).real() == doctest::Approx(3));
  // eigenvalue 1 lives on e1, 2 on e2, 3 on e0
  CHECK(std::abs(d.vectors(1, 0)) == doctest::Approx(1));
  CHECK(std::abs(d.vectors(2, 1)) == doctest::Approx(1));
  CHECK(std::abs(d.vectors(0, 2)) == doctest::Approx(1));
}

TEST_CASE("swap matrix eigenpairs") {
  const EigenDecomposition d = eigendecompose(swap2());
  CHECK(d.values(0).real() == doctest::Approx(-1));
  CHECK(d.values(1).real() == doctest::Approx(1));
  const double s = 1.0 / std::sqrt(2.0);
  // up to phase: (1, -1)/sqrt2 and (1, 1)/sqrt2
  CHECK(std::abs(d.vectors.col(0).dot(vec({s, -s}))) == doctest::Approx(1));
  CHECK(std::abs(d.vectors.col(1).dot(vec({s, s}))) == doctest::Approx(1));
  CHECK(d.residual <= 1e-14);
}

TEST_CASE("free cmv eigenvalues are unimodular and sorted by argument") {
  const EigenDecomposition d = eigendecompose(materialize_cmv(CMVWindow{0, 4, std::vector<Complex>(4, 0.0)}));
  CHECK(d.support == SupportKind::unit_circle);
  double previous = -1.0;
  for (Eigen::Index k = 0; k < d.size(); ++k) {
    CHECK(std::abs(std::abs(d.values(k)) - 1.0) <= 1e-12);
    double arg = std::arg(d.values(k));
    if (arg < 0) arg += 2 * std::numbers::pi;
    CHECK(arg >= previous);
    previous = arg;
  }
  // E is a 4-cycle, so its eigenvalues are the fourth roots of unity
  for (Eigen::Index k = 0; k < 4; ++k) CHECK(std::abs(std::pow(d.values(k), 4) - 1.0) <= 1e-12);
}

TEST_CASE("general operators are rejected") {
  CHECK_THROWS_AS(eigendecompose(DenseOperator(Matrix::Zero(2, 2), OperatorKind::general)), DomainError);
}

TEST_CASE("spectral measures by hand") {
  const double s = 1.0 / std::sqrt(2.0);
  const AtomicSpectralMeasure mu = spectral_measure(eigendecompose(diag({0, 1})), vec({s, s}));
  REQUIRE(mu.atoms.size() == 2);
  CHECK(mu.atoms[0].location.real() == doctest::Approx(0));
  CHECK(mu.atoms[0].weight == doctest::Approx(0.5));
  CHECK(mu.atoms[1].location.real() == doctest::Approx(1));
  CHECK(mu.atoms[1].weight == doctest::Approx(0.5));

  const EigenDecomposition d = eigendecompose(swap2());
  const AtomicSpectralMeasure nu = spectral_measure(d, vec({1.0, 0.0}));
  REQUIRE(nu.atoms.size() == 2);
  CHECK(nu.atoms[0].location.real() == doctest::Approx(-1));
  CHECK(nu.atoms[0].weight == doctest::Approx(0.5));
  CHECK(nu.atoms[1].weight == doctest::Approx(0.5));

  const AtomicSpectralMeasure one = spectral_measure(d, d.vectors.col(0));
  REQUIRE(one.atoms.size() == 1);
  CHECK(one.atoms[0].location.real() == doctest::Approx(-1));
  CHECK(one.atoms[0].weight == doctest::Approx(1));
  CHECK(one.discarded_mass <= 1e-12);
}

TEST_CASE("degenerate eigenvalues merge into one atom") {
  const AtomicSpectralMeasure mu = spectral_measure(eigendecompose(diag({2, 0, 2})), vec({1.0, 1.0, 1.0}));
  REQUIRE(mu.atoms.size() == 2);
  CHECK(mu.atoms[1].weight == doctest::Approx(2));
  CHECK(mu.total_weight() == doctest::Approx(3));
}

TEST_CASE("krylov dimension examples") {
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(krylov_dimension(diag({0, 1}), vec({s, s})) == 2);
  CHECK(krylov_dimension(diag({0, 0}), vec({s, s})) == 1);
  CHECK(krylov_dimension(diag({0, 0}), vec({0.3, -0.8 * I})) == 1);
  CHECK(krylov_dimension(diag({0, 1, 2}), vec({1.0, 0.0, 1.0})) == 2);
}

TEST_CASE("half-line free jacobi is cyclic from its boundary") {
  const DenseOperator j = materialize_jacobi(free_jacobi(0, 9));
  Vector delta0 = Vector::Zero(10);
  delta0(0) = 1.0;

  // J^k delta_0 ends at site k with entry 1, so the power matrix is unit upper triangular
  Matrix powers(10, 10);
  Vector v = delta0;
  for (int k = 0; k < 10; ++k) {
    powers.col(k) = v;
    v = j.entries() * v;
  }
  for (int k = 0; k < 10; ++k) {
    CHECK(powers(k, k) == Complex(1.0));
    for (int r = k + 1; r < 10; ++r) CHECK(powers(r, k) == Complex(0.0));
  }
  CHECK(krylov_dimension(j, delta0) == 10);
  const Matrix q = krylov_basis(j, delta0);
  CHECK((q.adjoint() * q - Matrix::Identity(10, 10)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("cyclic subspace in spectral form") {
  const EigenDecomposition d = eigendecompose(diag({0, 0, 1, 1, 2}));
  const Vector phi = vec({1.0, 2.0, 0.5, 0.0, 0.0});
  const Matrix l = cyclic_subspace(d, phi, 1e-8);
  CHECK(l.cols() == 2);
  CHECK((l.adjoint() * l - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("support partition") {
  const auto a = line({{0.0, 0.5}, {1.0, 0.5}});
  SupportPartition same = support_partition(a, a, 1e-8);
  CHECK(same.common.size() == 2);
  CHECK(same.first_only.empty());
  CHECK(same.second_only.empty());

  SupportPartition apart = support_partition(a, line({{2.0, 1.0}}), 1e-8);
  CHECK(apart.common.empty());
  CHECK(apart.first_only.size() == 2);
  CHECK(apart.second_only.size() == 1);

  SupportPartition p = support_partition(line({{0.0, 1.0 / 3}, {1.0, 2.0 / 3}}), line({{1.0, 1.0}}), 1e-8);
  REQUIRE(p.common.size() == 1);
  CHECK(p.common[0].location.real() == doctest::Approx(1));
  CHECK(p.common[0].weight1 == doctest::Approx(2.0 / 3));
  CHECK(p.common[0].weight2 == doctest::Approx(1));
  REQUIRE(p.first_only.size() == 1);
  CHECK(p.first_only[0].location.real() == doctest::Approx(0));
  CHECK(p.second_only.empty());

  CHECK_THROWS_AS(support_partition(line({{0.0, 1.0}}), line({{-0.1, 0.5}, {0.1, 0.5}}), 0.2),
                  AmbiguousMatchError);
}

TEST_CASE("borel transform") {
  CHECK(std::abs(borel_transform(line({{0.0, 1.0}}), I) - I) <= 1e-16);
  const auto mu = line({{-1.0, 0.5}, {1.0, 0.5}});
  for (double z : {0.0, 0.3, -0.7, 2.5, -4.0}) {
    CHECK(std::abs(borel_transform(mu, z) - z / (1 - z * z)) <= 1e-14 * (1 + std::abs(z / (1 - z * z))));
  }
  CHECK_THROWS_AS(borel_transform(mu, 1.0), PoleError);
  CHECK_THROWS_AS(borel_transform(circle({{1.0, 1.0}}), 0.5), DomainError);
}

TEST_CASE("caratheodory function") {
  CHECK(std::abs(caratheodory(circle({{1.0, 1.0}}), 0.5) - 3.0) <= 1e-15);
  const auto sym = circle({{1.0, 0.5}, {-1.0, 0.5}});
  // (1/2)(3) + (1/2)(1/3) = (1 + z^2)/(1 - z^2) at z = 1/2
  CHECK(std::abs(caratheodory(sym, 0.5) - 5.0 / 3.0) <= 1e-15);
  CHECK(std::abs(caratheodory(sym, 0.0) - 1.0) <= 1e-16);
  CHECK_THROWS_AS(caratheodory(sym, 1.0), DomainError);
}

TEST_CASE("schur function of point masses") {
  for (double r : {0.1, 0.5, 0.9}) {
    for (int k = 0; k < 16; ++k) {
      const Complex z = std::polar(r, 2 * std::numbers::pi * k / 16);
      CHECK(std::abs(schur_function(circle({{1.0, 1.0}}), z) - 1.0) <= 1e-12);
      const Complex l = std::polar(1.0, 2.1);
      CHECK(std::abs(schur_function(circle({{l, 1.0}}), z) - std::conj(l)) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(schur_function(circle({{1.0, 1.0}}), 0.0), DomainError);
  CHECK_THROWS_AS(schur_function(circle({{1.0, 0.5}}), 0.5), DomainError);
}

TEST_CASE("multiplicity profiles") {
  const MultiplicityProfile p = multiplicity_profile(eigendecompose(diag({0, 0, 1})));
  REQUIRE(p.clusters.size() == 2);
  CHECK(p.clusters[0].multiplicity() == 2);
  CHECK(p.clusters[1].multiplicity() == 1);
  CHECK_FALSE(p.simple());
  CHECK(p.max_multiplicity() == 2);

  const MultiplicityProfile q = multiplicity_profile(eigendecompose(diag({0, 1, 2})));
  CHECK(q.simple());
  CHECK(q.min_gap == doctest::Approx(1));

  const MultiplicityProfile b = multiplicity_profile(eigendecompose(direct_sum(diag({0, 1}), diag({0, 1}))));
  REQUIRE(b.clusters.size() == 2);
  CHECK(b.clusters[0].multiplicity() == 2);
  CHECK(b.clusters[1].multiplicity() == 2);

  CHECK(std::isinf(multiplicity_profile(eigendecompose(diag({4}))).min_gap));
}

TEST_CASE("clusters wrap around the circle") {
  Vector pts(3);
  pts << std::polar(1.0, 1e-12), std::polar(1.0, 3.0), std::polar(1.0, 2 * std::numbers::pi - 1e-12);
  const auto groups = cluster_points(pts, SupportKind::unit_circle, 1e-9);
  CHECK(groups.size() == 2);
}

TEST_CASE("tolerance scale") {
  Vector three(1);
  three << 3.0;
  CHECK(tolerance_scale(three, SupportKind::real_line) == 3.0);
  CHECK(tolerance_scale(Vector::Zero(2), SupportKind::real_line) == 1.0);
  Vector pts(2);
  pts << -1.0, 2.0;
  CHECK(tolerance_scale(pts, SupportKind::real_line) == 3.0);
}

}
