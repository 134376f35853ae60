#include "rsdual/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

namespace rsd {

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double UnitaryMatrix::unitarity_residual() const {
  const int n = dim();
  const double unit = max_abs(m_.adjoint() * m_ - CMatrix::Identity(n, n));
  const double det = std::abs(m_.determinant() - Complex(1.0, 0.0));
  return std::max(unit, det);
}

UnitaryMatrix UnitaryMatrix::certify(CMatrix m, double tol) {
  if (m.rows() != m.cols() || m.rows() < 2)
    throw Error(ErrorKind::InvalidArgument, "special-unitary matrix must be square with n >= 2");
  UnitaryMatrix u(std::move(m));
  const double res = u.unitarity_residual();
  if (!(res <= tol))
    throw Error(ErrorKind::InvalidArgument,
                "matrix is not special-unitary (residual " + std::to_string(res) + ")");
  return u;
}

LieAlgebraVector LieAlgebraVector::certify(CMatrix m, double tol) {
  if (m.rows() != m.cols())
    throw Error(ErrorKind::InvalidArgument, "Lie algebra element must be square");
  const double herm = max_abs(m + m.adjoint());
  const double tr = std::abs(m.trace());
  if (!(herm <= tol && tr <= tol))
    throw Error(ErrorKind::InvalidArgument, "matrix is not in su(n)");
  return LieAlgebraVector(std::move(m));
}

LieAlgebraVector LieAlgebraVector::project(const CMatrix& m) {
  const auto n = m.rows();
  CMatrix x = 0.5 * (m - m.adjoint());
  x -= (x.trace() / static_cast<double>(n)) * CMatrix::Identity(n, n);
  return LieAlgebraVector(std::move(x));
}

double scalar_product(const CMatrix& x, const CMatrix& y, double lambda) {
  // Re tr(XY) without forming the product.
  return -0.5 * lambda * (x.transpose().cwiseProduct(y)).sum().real();
}

double scalar_product(const LieAlgebraVector& x, const LieAlgebraVector& y, double lambda) {
  return scalar_product(x.matrix(), y.matrix(), lambda);
}

std::vector<CMatrix> su_basis(int n) {
  std::vector<CMatrix> basis;
  basis.reserve(static_cast<std::size_t>(n * n - 1));
  const Complex i(0.0, 1.0);
  for (int j = 0; j < n; ++j) {
    for (int l = j + 1; l < n; ++l) {
      CMatrix a = CMatrix::Zero(n, n);
      a(j, l) = 1.0;
      a(l, j) = -1.0;
      basis.push_back(a);
      CMatrix s = CMatrix::Zero(n, n);
      s(j, l) = i;
      s(l, j) = i;
      basis.push_back(s);
    }
  }
  // Generalized Gell-Mann diagonals, normalized so −½tr(X²) = 1.
  for (int k = 1; k < n; ++k) {
    CMatrix d = CMatrix::Zero(n, n);
    const double c = std::sqrt(2.0 / (k * (k + 1.0)));
    for (int j = 0; j < k; ++j) d(j, j) = i * c;
    d(k, k) = -i * c * static_cast<double>(k);
    basis.push_back(d);
  }
  return basis;
}

RVector su_coordinates(const CMatrix& x, const std::vector<CMatrix>& basis) {
  RVector c(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k)
    c(static_cast<Eigen::Index>(k)) = scalar_product(basis[k], x);
  return c;
}

UnitaryMatrix diag_exponential(const RVector& c, const std::vector<LieAlgebraVector>& basis) {
  if (basis.empty() || static_cast<std::size_t>(c.size()) != basis.size())
    throw Error(ErrorKind::InvalidArgument, "coefficient/basis size mismatch");
  const int n = basis.front().dim();
  CVector exponent = CVector::Zero(n);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const CMatrix& b = basis[k].matrix();
    if (max_abs(b - CMatrix(b.diagonal().asDiagonal())) > 0.0)
      throw Error(ErrorKind::InvalidArgument, "diag_exponential requires diagonal generators");
    exponent += c(static_cast<Eigen::Index>(k)) * b.diagonal();
  }
  CMatrix out = CMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) out(j, j) = std::exp(exponent(j));
  return UnitaryMatrix::trusted(std::move(out));
}

std::vector<LieAlgebraVector> position_generators(int n) {
  std::vector<LieAlgebraVector> out;
  for (int k = 1; k < n; ++k) {
    CMatrix m = CMatrix::Zero(n, n);
    for (int j = 0; j < n; ++j)
      m(j, j) = Complex(0.0, -2.0) * ((j < k ? 1.0 : 0.0) - static_cast<double>(k) / n);
    out.push_back(LieAlgebraVector::certify(std::move(m)));
  }
  return out;
}

std::vector<LieAlgebraVector> angle_generators(int n) {
  std::vector<LieAlgebraVector> out;
  for (int k = 0; k + 1 < n; ++k) {
    CMatrix m = CMatrix::Zero(n, n);
    m(k, k) = Complex(0.0, -1.0);
    m(k + 1, k + 1) = Complex(0.0, 1.0);
    out.push_back(LieAlgebraVector::certify(std::move(m)));
  }
  return out;
}

RVector diagonal_positions(const RVector& xi) {
  const auto n = xi.size() + 1;
  double weighted = 0.0;
  for (Eigen::Index k = 0; k < xi.size(); ++k) weighted += static_cast<double>(k + 1) * xi(k);
  weighted /= static_cast<double>(n);
  RVector x(n);
  double tail = 0.0;
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    if (j < xi.size()) tail += xi(j);
    x(j) = -tail + weighted;
  }
  return x;
}

UnitaryMatrix delta_matrix(const RVector& xi) {
  return diag_exponential(xi, position_generators(static_cast<int>(xi.size()) + 1));
}

UnitaryMatrix theta_matrix(const RVector& theta) {
  return diag_exponential(theta, angle_generators(static_cast<int>(theta.size()) + 1));
}

UnitaryEigensystem eigensystem_unitary(const UnitaryMatrix& g, double tol) {
  const int n = g.dim();
  // g is normal, so its Schur form is diagonal up to rounding.
  Eigen::ComplexSchur<CMatrix> schur(g.matrix());
  if (schur.info() != Eigen::Success)
    throw Error(ErrorKind::ConvergenceFailure, "Schur iteration did not converge");
  const CMatrix& t = schur.matrixT();
  const CMatrix& u = schur.matrixU();

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  RVector raw(n);
  for (int j = 0; j < n; ++j) raw(j) = std::arg(t(j, j));
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return raw(a) < raw(b); });

  UnitaryEigensystem es{RVector(n), CMatrix(n, n)};
  for (int j = 0; j < n; ++j) {
    es.phases(j) = raw(order[static_cast<std::size_t>(j)]);
    es.frame.col(j) = u.col(order[static_cast<std::size_t>(j)]);
  }

  CVector ev(n);
  for (int j = 0; j < n; ++j) ev(j) = std::polar(1.0, es.phases(j));
  const double resid = max_abs(es.frame * ev.asDiagonal() * es.frame.adjoint() - g.matrix());
  if (!(resid <= tol))
    throw Error(ErrorKind::ConvergenceFailure,
                "eigen reconstruction residual " + std::to_string(resid));
  return es;
}

RVector cyclic_gaps(const RVector& xi) {
  RVector gaps(xi.size() + 1);
  gaps.head(xi.size()) = xi;
  gaps(xi.size()) = kPi - xi.sum();
  return gaps;
}

AlcoveFrame alcove_frame(const UnitaryMatrix& g) {
  const int n = g.dim();
  const UnitaryEigensystem es = eigensystem_unitary(g);

  struct Entry {
    double phase;
    int column;
  };
  std::vector<Entry> e(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) e[static_cast<std::size_t>(j)] = {es.phases(j), j};

  // Σφ = 2πm up to determinant drift, which is spread evenly over the phases.
  double sum = 0.0;
  for (const auto& x : e) sum += x.phase;
  const long m = std::lround(sum / (2.0 * kPi));
  const double drift = (sum - 2.0 * kPi * static_cast<double>(m)) / n;
  for (auto& x : e) x.phase -= drift;

  // Cyclic shifts: the lift with exact zero sum is the alcove representative.
  auto by_phase = [](const Entry& a, const Entry& b) { return a.phase < b.phase; };
  for (long s = 0; s < m; ++s) {
    e.back().phase -= 2.0 * kPi;
    std::rotate(e.rbegin(), e.rbegin() + 1, e.rend());
  }
  for (long s = 0; s < -m; ++s) {
    e.front().phase += 2.0 * kPi;
    std::rotate(e.begin(), e.begin() + 1, e.end());
  }
  std::stable_sort(e.begin(), e.end(), by_phase);

  AlcoveFrame out;
  out.lifted_phases.resize(n);
  out.frame.resize(n, n);
  for (int j = 0; j < n; ++j) {
    out.lifted_phases(j) = e[static_cast<std::size_t>(j)].phase;
    out.frame.col(j) = es.frame.col(e[static_cast<std::size_t>(j)].column);
  }
  out.alcove.xi.resize(n - 1);
  for (int j = 0; j + 1 < n; ++j)
    out.alcove.xi(j) = 0.5 * (out.lifted_phases(j + 1) - out.lifted_phases(j));
  out.alcove.degenerate = cyclic_gaps(out.alcove.xi).minCoeff() <= kDegeneracyTol;
  return out;
}

AlcoveVector alcove_coordinates(const UnitaryMatrix& g) { return alcove_frame(g).alcove; }

}  // namespace rsd
