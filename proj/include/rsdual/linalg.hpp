#pragma once

// Dense complex matrix kernel for SU(n): certification, unitary eigensystems,
// Weyl-alcove spectral coordinates and diagonal exponentials.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "rsdual/errors.hpp"

namespace rsd {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTolAlgebraic = 1e-10;
// Alcove coordinates closer than this to a wall are flagged degenerate.
inline constexpr double kDegeneracyTol = 1e-9;

double max_abs(const CMatrix& m);

/// An element of SU(n). Construction through certify() checks unitarity and
/// unit determinant in the max-entry norm.
class UnitaryMatrix {
 public:
  static UnitaryMatrix certify(CMatrix m, double tol = kTolAlgebraic);
  /// Wraps a matrix that is special-unitary by construction (no check).
  static UnitaryMatrix trusted(CMatrix m) { return UnitaryMatrix(std::move(m)); }
  static UnitaryMatrix identity(int n) { return UnitaryMatrix(CMatrix::Identity(n, n)); }

  const CMatrix& matrix() const noexcept { return m_; }
  int dim() const noexcept { return static_cast<int>(m_.rows()); }
  UnitaryMatrix inverse() const { return UnitaryMatrix(m_.adjoint()); }
  UnitaryMatrix conjugate() const { return UnitaryMatrix(m_.conjugate()); }

  /// max(‖M†M − 1‖_max, |det M − 1|)
  double unitarity_residual() const;

  friend UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b) {
    return UnitaryMatrix(a.m_ * b.m_);
  }

 private:
  explicit UnitaryMatrix(CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

/// Element of su(n): anti-Hermitian and traceless.
class LieAlgebraVector {
 public:
  static LieAlgebraVector certify(CMatrix m, double tol = kTolAlgebraic);
  /// Orthogonal projection of an arbitrary matrix onto su(n).
  static LieAlgebraVector project(const CMatrix& m);
  static LieAlgebraVector zero(int n) { return LieAlgebraVector(CMatrix::Zero(n, n)); }

  const CMatrix& matrix() const noexcept { return m_; }
  int dim() const noexcept { return static_cast<int>(m_.rows()); }

 private:
  explicit LieAlgebraVector(CMatrix m) : m_(std::move(m)) {}
  CMatrix m_;
};

/// ⟨X, Y⟩ = −(Λ/2) Re tr(XY).
double scalar_product(const LieAlgebraVector& x, const LieAlgebraVector& y, double lambda = 1.0);
double scalar_product(const CMatrix& x, const CMatrix& y, double lambda = 1.0);

/// Basis of su(n) orthonormal for the Λ = 1 scalar product.
std::vector<CMatrix> su_basis(int n);

/// Coordinates of X in su_basis(n).
RVector su_coordinates(const CMatrix& x, const std::vector<CMatrix>& basis);

/// exp(Σ c_k basis_k) for diagonal traceless basis matrices.
UnitaryMatrix diag_exponential(const RVector& c, const std::vector<LieAlgebraVector>& basis);

/// The generators −2iλ_k, with λ_k = Σ_{j≤k} E_jj − (k/n)1.
std::vector<LieAlgebraVector> position_generators(int n);
/// The generators −iH_k, with H_k = E_kk − E_{k+1,k+1}.
std::vector<LieAlgebraVector> angle_generators(int n);

/// Diagonal half-phases x_j of δ(ξ) = diag(e^{2ix_j}); increasing, summing to 0.
RVector diagonal_positions(const RVector& xi);
UnitaryMatrix delta_matrix(const RVector& xi);
UnitaryMatrix theta_matrix(const RVector& theta);

struct UnitaryEigensystem {
  RVector phases;   // ascending in (−π, π], summing to 0 mod 2π
  CMatrix frame;    // unitary; column j is the eigenvector for phases[j]
};

UnitaryEigensystem eigensystem_unitary(const UnitaryMatrix& g, double tol = kTolAlgebraic);

struct AlcoveVector {
  RVector xi;               // length n−1, ξ_j ≥ 0 and Σξ_j ≤ π
  bool degenerate = false;  // some eigenphases coincide (ξ on an alcove wall)
};

AlcoveVector alcove_coordinates(const UnitaryMatrix& g);

/// Alcove coordinates together with an eigenframe ordered like the diagonal of
/// δ(ξ): frame column j spans the e^{2ix_j}-eigenspace of g.
struct AlcoveFrame {
  AlcoveVector alcove;
  RVector lifted_phases;  // 2x_j, increasing, exact zero sum
  CMatrix frame;
};

AlcoveFrame alcove_frame(const UnitaryMatrix& g);

/// Gaps ξ_1..ξ_n of the alcove around the circle, with ξ_n = π − Σ_{k<n} ξ_k.
RVector cyclic_gaps(const RVector& xi);

}  // namespace rsd
