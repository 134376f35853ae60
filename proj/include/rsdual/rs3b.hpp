#pragma once

// The compactified trigonometric Ruijsenaars–Schneider III_b system: polytope,
// local phase space, Hamiltonian, local and global Lax matrices, the embedding
// into CP(n−1) and the two toric moment maps (positions 𝓙, actions 𝓘).

#include <vector>

#include "rsdual/linalg.hpp"
#include "rsdual/rng.hpp"

namespace rsd {

inline constexpr double kTolPatch = 1e-12;

/// System parameters. The sign of y is irrelevant; maps use |y|.
struct Coupling {
  int n = 2;
  double y = 0.0;
  double chi0 = 0.0;    // π − n|y|
  double lambda = 1.0;  // symplectic scale

  /// Validates n ≥ 2, 0 < |y| < π/n and Λ > 0.
  static Coupling make(int n, double y, double lambda = 1.0);
  double abs_y() const noexcept { return y < 0 ? -y : y; }
};

/// (ξ, θ) ∈ 𝒫⁰ × 𝕋_{n−1}.
struct LocalPoint {
  RVector xi;
  RVector theta;

  bool in_open_polytope(const Coupling& c) const;
};

/// Homogeneous coordinates u on the sphere Σ|u_k|² = χ₀, in canonical phase:
/// the last coordinate of largest modulus is real non-negative.
class ProjectivePoint {
 public:
  /// Rescales u onto the χ₀-sphere and fixes the phase.
  static ProjectivePoint from_homogeneous(const Coupling& c, const CVector& u);

  const CVector& u() const noexcept { return u_; }
  int dim() const noexcept { return static_cast<int>(u_.size()); }
  double min_modulus() const { return u_.cwiseAbs().minCoeff(); }
  bool in_dense_patch(double tol = kTolPatch) const { return min_modulus() > tol; }

 private:
  explicit ProjectivePoint(CVector u) : u_(std::move(u)) {}
  CVector u_;
};

/// Canonical-phase distance between two projective points.
double distance(const ProjectivePoint& a, const ProjectivePoint& b);

/// W_j(ξ, sign·|y|), j = 1..n. Throws DomainError outside 𝒫⁰.
RVector w_factor(const Coupling& c, const RVector& xi, int sign);

UnitaryMatrix lax_local(const Coupling& c, const LocalPoint& p);

/// ∂L/∂ξ_m (m = 0..n−2) followed by ∂L/∂θ_m, analytic.
std::vector<CMatrix> lax_local_derivatives(const Coupling& c, const LocalPoint& p);

/// The many-body Hamiltonian Σ_j cos p_j Π_{k≠j}[1 − sin²y / sin²(x_j − x_k)]^{1/2}.
double hamiltonian(const Coupling& c, const LocalPoint& p);

/// Momenta p_j = θ_j − θ_{j−1} (θ_0 = θ_n = 0), so that Θ_j = e^{−ip_j}.
RVector momenta(const RVector& theta);

ProjectivePoint embed(const Coupling& c, const LocalPoint& p);
/// Throws PatchBoundary if some |u_k| ≤ tol.
LocalPoint embed_inverse(const Coupling& c, const ProjectivePoint& q, double tol = kTolPatch);
/// Smooth lift of 𝓔 to the sphere, before phase canonicalization.
CVector embed_lift(const Coupling& c, const LocalPoint& p);

/// Lax matrix on all of CP(n−1), evaluated in homogeneous coordinates.
UnitaryMatrix lax_global(const Coupling& c, const ProjectivePoint& q);

/// 𝓙_k = |u_k|² + |y|, k = 1..n−1.
RVector position_map(const Coupling& c, const ProjectivePoint& q);
/// 𝓘_k = Ξ_k(L(q)).
RVector action_map(const Coupling& c, const ProjectivePoint& q);

/// Membership in the closed polytope 𝒫 with slack tol; returns the largest
/// violation (≤ 0 inside).
double polytope_violation(const Coupling& c, const RVector& xi);

/// Uniform on the open polytope shrunk by `margin`, θ uniform on [0, 2π).
LocalPoint sample_local_point(const Coupling& c, Rng& rng, double margin = 1e-3);
/// Fubini–Study uniform point of CP(n−1).
ProjectivePoint sample_projective_point(const Coupling& c, Rng& rng);

}  // namespace rsd
