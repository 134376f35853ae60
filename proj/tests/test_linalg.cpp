#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "rsdual/checks.hpp"
#include "rsdual/linalg.hpp"
#include "rsdual/rng.hpp"

using namespace rsd;
using doctest::Approx;

namespace {

bool throws_kind(ErrorKind kind, const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

// −(Λ/2) Re Σ_{jk} X_jk Y_kj, written out entrywise.
double scalar_product_oracle(const CMatrix& x, const CMatrix& y, double lambda) {
  Complex tr = 0.0;
  for (int j = 0; j < x.rows(); ++j)
    for (int k = 0; k < x.cols(); ++k) tr += x(j, k) * y(k, j);
  return -0.5 * lambda * tr.real();
}

}  // namespace

TEST_CASE("certification accepts SU(n) and rejects the rest") {
  CHECK_NOTHROW(UnitaryMatrix::certify(CMatrix::Identity(3, 3)));
  CMatrix scaled = 1.001 * CMatrix::Identity(2, 2);
  CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { UnitaryMatrix::certify(scaled); }));
  // unitary with determinant −1
  CMatrix flip = CMatrix::Identity(2, 2);
  flip(1, 1) = -1.0;
  CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { UnitaryMatrix::certify(flip); }));
  CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { UnitaryMatrix::certify(CMatrix::Identity(1, 1)); }));
  CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { UnitaryMatrix::certify(CMatrix::Identity(2, 3)); }));
}

TEST_CASE("Lie algebra certification and projection") {
  CMatrix herm(2, 2);
  herm << 1.0, 0.0, 0.0, -1.0;
  CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { LieAlgebraVector::certify(herm); }));
  CMatrix x(2, 2);
  x << Complex(0, 1), 0.0, 0.0, Complex(0, -1);
  CHECK_NOTHROW(LieAlgebraVector::certify(x));

  Rng rng(5);
  CMatrix m(3, 3);
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) m(j, k) = rng.complex_normal();
  const CMatrix p = LieAlgebraVector::project(m).matrix();
  CHECK(max_abs(p + p.adjoint()) < 1e-14);
  CHECK(std::abs(p.trace()) < 1e-14);
  CHECK(max_abs(LieAlgebraVector::project(p).matrix() - p) < 1e-14);
}

TEST_CASE("scalar product") {
  CMatrix x(2, 2);
  x << Complex(0, 1), 0.0, 0.0, Complex(0, -1);
  // tr(X²) = −2
  CHECK(scalar_product(x, x) == Approx(1.0));
  CHECK(scalar_product(x, x, 3.0) == Approx(3.0));

  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 4;
    const CMatrix a = random_lie_algebra(n, rng).matrix();
    const CMatrix b = random_lie_algebra(n, rng).matrix();
    CHECK(scalar_product(a, b, 1.7) == Approx(scalar_product_oracle(a, b, 1.7)).epsilon(1e-12));
    CHECK(scalar_product(a, a) > 0.0);
  }
}

TEST_CASE("su basis is orthonormal and complete") {
  for (int n = 2; n <= 5; ++n) {
    const auto basis = su_basis(n);
    REQUIRE(basis.size() == static_cast<std::size_t>(n * n - 1));
    for (std::size_t a = 0; a < basis.size(); ++a) {
      CHECK_NOTHROW(LieAlgebraVector::certify(basis[a]));
      for (std::size_t b = 0; b < basis.size(); ++b)
        CHECK(scalar_product(basis[a], basis[b]) == Approx(a == b ? 1.0 : 0.0));
    }
    Rng rng(static_cast<std::uint64_t>(n));
    const CMatrix x = random_lie_algebra(n, rng).matrix();
    const RVector c = su_coordinates(x, basis);
    CMatrix back = CMatrix::Zero(n, n);
    for (std::size_t a = 0; a < basis.size(); ++a) back += c(static_cast<Eigen::Index>(a)) * basis[a];
    CHECK(max_abs(back - x) < 1e-13);
  }
}

TEST_CASE("diagonal positions") {
  // n = 2, ξ = π/2: x = (−π/4, π/4), δ = diag(−i, i)
  RVector xi(1);
  xi << kPi / 2;
  const RVector x = diagonal_positions(xi);
  CHECK(x(0) == Approx(-kPi / 4));
  CHECK(x(1) == Approx(kPi / 4));
  const CMatrix d = delta_matrix(xi).matrix();
  CHECK(std::abs(d(0, 0) - Complex(0, -1)) < 1e-15);
  CHECK(std::abs(d(1, 1) - Complex(0, 1)) < 1e-15);

  // n = 3: x = ((−2a − b)/3, (a − b)/3, (a + 2b)/3)
  RVector ab(2);
  ab << 0.7, 1.1;
  const RVector x3 = diagonal_positions(ab);
  CHECK(x3(0) == Approx((-2 * 0.7 - 1.1) / 3));
  CHECK(x3(1) == Approx((0.7 - 1.1) / 3));
  CHECK(x3(2) == Approx((0.7 + 2 * 1.1) / 3));

  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 5;
    const RVector r = random_alcove(n, rng);
    const RVector p = diagonal_positions(r);
    CHECK(std::abs(p.sum()) < 1e-14);
    for (int j = 0; j + 1 < n; ++j) CHECK(p(j + 1) - p(j) == Approx(r(j)));
    CHECK(delta_matrix(r).unitarity_residual() < 1e-14);
  }
}

TEST_CASE("theta matrix") {
  RVector th(2);
  th << 0.3, 0.5;
  const CMatrix t = theta_matrix(th).matrix();
  CHECK(std::abs(t(0, 0) - std::polar(1.0, -0.3)) < 1e-15);
  CHECK(std::abs(t(1, 1) - std::polar(1.0, -0.2)) < 1e-15);
  CHECK(std::abs(t(2, 2) - std::polar(1.0, 0.5)) < 1e-15);
}

TEST_CASE("diagonal exponentials reproduce delta and theta") {
  Rng rng(2);
  for (int n = 2; n <= 5; ++n) {
    const RVector xi = random_alcove(n, rng);
    CHECK(max_abs(diag_exponential(xi, position_generators(n)).matrix() -
                  delta_matrix(xi).matrix()) < 1e-14);
    RVector th(n - 1);
    for (int k = 0; k < n - 1; ++k) th(k) = rng.uniform(0.0, 2 * kPi);
    CHECK(max_abs(diag_exponential(th, angle_generators(n)).matrix() -
                  theta_matrix(th).matrix()) < 1e-14);
  }
  const auto off = LieAlgebraVector::certify(su_basis(2)[0]);
  RVector c(1);
  c << 0.1;
  CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { diag_exponential(c, {off}); }));
}

TEST_CASE("unitary eigensystem") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 4;
    const UnitaryMatrix g = random_special_unitary(n, rng);
    const UnitaryEigensystem es = eigensystem_unitary(g);
    for (int j = 0; j + 1 < n; ++j) CHECK(es.phases(j) <= es.phases(j + 1));
    CHECK(es.phases.maxCoeff() <= kPi);
    CHECK(es.phases.minCoeff() > -kPi);
    const double wrapped = std::remainder(es.phases.sum(), 2 * kPi);
    CHECK(std::abs(wrapped) < 1e-12);
    CMatrix d = CMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j) d(j, j) = std::polar(1.0, es.phases(j));
    CHECK(max_abs(es.frame * d * es.frame.adjoint() - g.matrix()) < 1e-12);
    CHECK(max_abs(es.frame.adjoint() * es.frame - CMatrix::Identity(n, n)) < 1e-12);
  }
}

TEST_CASE("alcove coordinates: hand values") {
  // diag(e^{iφ}, e^{−iφ}) has ξ = φ for φ ∈ (0, π)
  for (double phi : {0.2, 1.0, 2.5, 3.0}) {
    CMatrix g = CMatrix::Zero(2, 2);
    g(0, 0) = std::polar(1.0, phi);
    g(1, 1) = std::polar(1.0, -phi);
    const AlcoveVector a = alcove_coordinates(UnitaryMatrix::certify(g));
    CHECK(a.xi(0) == Approx(phi).epsilon(1e-13));
    CHECK_FALSE(a.degenerate);
  }
  const AlcoveVector id = alcove_coordinates(UnitaryMatrix::identity(3));
  CHECK(id.degenerate);
  CHECK(id.xi.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("alcove coordinates: properties") {
  Rng rng(4);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + trial % 4;
    const RVector xi = random_alcove(n, rng);
    const AlcoveVector back = alcove_coordinates(delta_matrix(xi));
    CHECK((back.xi - xi).cwiseAbs().maxCoeff() <= 1e-10);

    const UnitaryMatrix g = random_special_unitary(n, rng);
    const RVector a = alcove_coordinates(g).xi;
    CHECK((alcove_coordinates(g.inverse()).xi - a.reverse()).cwiseAbs().maxCoeff() <= 1e-10);
    const UnitaryMatrix h = random_special_unitary(n, rng);
    CHECK((alcove_coordinates(h * g * h.inverse()).xi - a).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(a.minCoeff() >= 0.0);
    CHECK(a.sum() <= kPi + 1e-12);

    const RVector gaps = cyclic_gaps(a);
    CHECK(gaps.size() == n);
    CHECK(gaps.sum() == Approx(kPi));
  }
}

TEST_CASE("alcove frame diagonalizes in delta order") {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 4;
    const UnitaryMatrix g = random_special_unitary(n, rng);
    const AlcoveFrame af = alcove_frame(g);
    CHECK(std::abs(af.lifted_phases.sum()) < 1e-12);
    const CMatrix d = delta_matrix(af.alcove.xi).matrix();
    CHECK(max_abs(af.frame * d * af.frame.adjoint() - g.matrix()) < 1e-10);
  }
}
