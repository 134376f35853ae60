#pragma once

// Reduction of the fused double at the special moment-map value μ₀: the map
// f₀ from the dense patch of CP(n−1) onto the constraint surface, its
// gauge-fixed inverse, and the reduced mapping-class maps 𝔖, T, R and the
// Z_n × Z_n center action.

#include <string_view>

#include "rsdual/fused_double.hpp"
#include "rsdual/rs3b.hpp"

namespace rsd {

inline constexpr double kTolConstraint = 1e-10;

/// A point of μ⁻¹(μ₀) with both components regular.
struct ConstraintPoint {
  DoublePoint point;
  UnitaryMatrix mu0;

  double residual() const { return max_abs(moment(point).matrix() - mu0.matrix()); }
};

/// diag(e^{2iy}, ..., e^{2iy}, e^{2(1−n)iy}) with y = |y|.
UnitaryMatrix mu0_matrix(const Coupling& c);

/// The real orthogonal gauge matrix g_y(ξ) built from v_j = [sin y / sin ny]^{1/2} W_j(ξ, y).
UnitaryMatrix g_matrix(const Coupling& c, const RVector& xi);

/// (g⁻¹ΔLΔ⁻¹g, g⁻¹δg) at 𝓔⁻¹(q). Throws PatchBoundary outside the dense patch
/// and ConstraintViolation if μ misses μ₀ by more than tol.
ConstraintPoint f0_map(const Coupling& c, const ProjectivePoint& q, double tol = kTolConstraint);

/// Gauge-invariant inverse of f₀ on the dense patch: reads ξ off the spectrum of
/// B and the angles off the diagonal of A in the ordered B-eigenframe.
ProjectivePoint f0_inverse(const Coupling& c, const DoublePoint& x, double tol = kTolConstraint);
inline ProjectivePoint f0_inverse(const Coupling& c, const ConstraintPoint& x,
                                  double tol = kTolConstraint) {
  return f0_inverse(c, x.point, tol);
}

/// 𝔖 = f₀⁻¹ ∘ S_D ∘ f₀.
ProjectivePoint duality_map(const Coupling& c, const ProjectivePoint& q);
/// f₀⁻¹ ∘ T_D ∘ f₀.
ProjectivePoint dehn_twist_map(const Coupling& c, const ProjectivePoint& q);
/// f₀⁻¹ ∘ ϱ_D ∘ S_D² ∘ f₀; an anti-symplectic involution.
ProjectivePoint involution_r(const Coupling& c, const ProjectivePoint& q);
/// Descends (A, B) ↦ (e^{2πi z1/n} A, e^{2πi z2/n} B).
ProjectivePoint center_action(const Coupling& c, int z1, int z2, const ProjectivePoint& q);
/// Ĉ: u ↦ ū.
ProjectivePoint complex_conjugation(const Coupling& c, const ProjectivePoint& q);

/// Applies a word over {S, T, R} letter by letter, left to right.
ProjectivePoint apply_word(const Coupling& c, std::string_view word, const ProjectivePoint& q);

}  // namespace rsd
