#pragma once

// Finite-difference pullbacks of symplectic forms: the embedding 𝓔, the
// reduction map f₀ and self-maps of CP(n−1).

#include <functional>

#include "rsdual/duality.hpp"
#include "rsdual/rng.hpp"

namespace rsd {

inline constexpr double kJacobianStep = 1e-6;

using ProjectiveMap = std::function<ProjectivePoint(const ProjectivePoint&)>;

/// χ₀ω_FS pulled back to the sphere: −2 Im Σ conj(v_k) w_k.
double fubini_study_form(const CVector& v, const CVector& w);

/// Ω_loc(a, b) = Σ (a_θ b_ξ − b_θ a_ξ) for tangents laid out as (ξ, θ).
double local_form(const RVector& a, const RVector& b);

/// Random unit tangent at u, Hermitian-orthogonal to u.
CVector horizontal_tangent(const CVector& u, Rng& rng);

/// Central-difference pushforward of a map of CP(n−1); output lifts are phase
/// aligned with F(q) before differencing.
CVector pushforward(const Coupling& c, const ProjectiveMap& f, const ProjectivePoint& q,
                    const CVector& v, double h = kJacobianStep);

/// Central-difference pushforward of f₀ as a tangent of the double at f₀(q).
DoubleTangent f0_pushforward(const Coupling& c, const ProjectivePoint& q, const CVector& v,
                             double h = kJacobianStep);

/// |χ₀ω_FS(d𝓔 a, d𝓔 b) − Ω_loc(a, b)|
double embedding_pullback_residual(const Coupling& c, const LocalPoint& p, const RVector& a,
                                   const RVector& b, double h = kJacobianStep);

/// |ω(df₀ v, df₀ w) − χ₀ω_FS(v, w)| (Λ = 1 scalar product).
double f0_pullback_residual(const Coupling& c, const ProjectivePoint& q, const CVector& v,
                            const CVector& w, double h = kJacobianStep);

/// |χ₀ω_FS(dF v, dF w) − sign · χ₀ω_FS(v, w)|; sign = −1 tests anti-symplecticity.
double map_pullback_residual(const Coupling& c, const ProjectiveMap& f, const ProjectivePoint& q,
                             const CVector& v, const CVector& w, int sign = 1,
                             double h = kJacobianStep);

}  // namespace rsd
