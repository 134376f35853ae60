#pragma once

// The internally fused double D = G × G of G = SU(n): its 2-form, group-valued
// moment map, conjugation action, mapping-class automorphisms and the
// quasi-Hamiltonian vector fields / Poisson bracket of invariant functions.

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "rsdual/linalg.hpp"

namespace rsd {

inline constexpr double kTolSolve = 1e-8;

struct DoublePoint {
  UnitaryMatrix A;
  UnitaryMatrix B;

  int dim() const noexcept { return A.dim(); }
};

/// Tangent vector (vA, vB) at `base`; A⁻¹vA and B⁻¹vB lie in su(n).
struct DoubleTangent {
  DoublePoint base;
  CMatrix vA;
  CMatrix vB;

  /// Tangent with left-trivialized components a = A⁻¹vA, b = B⁻¹vB.
  static DoubleTangent from_left(const DoublePoint& base, const CMatrix& a, const CMatrix& b);
  CMatrix left_a() const { return base.A.matrix().adjoint() * vA; }
  CMatrix left_b() const { return base.B.matrix().adjoint() * vB; }
};

/// G-invariant function on D with its left-trivialized differential: the pair
/// (∇_A h, ∇_B h) in su(n) with dh(vA, vB) = ⟨∇_A h, A⁻¹vA⟩ + ⟨∇_B h, B⁻¹vB⟩ for
/// the Λ = 1 scalar product.
struct InvariantFunction {
  using Gradient = std::pair<LieAlgebraVector, LieAlgebraVector>;

  std::string name;
  std::function<double(const DoublePoint&)> value;
  std::function<Gradient(const DoublePoint&)> gradient;

  double differential(const DoubleTangent& t) const;
};

/// α_k(A, B) = Ξ_k(A); k is 1-based, differentiable at regular A.
InvariantFunction alpha_function(int k);
/// β_k(A, B) = Ξ_k(B).
InvariantFunction beta_function(int k);
InvariantFunction re_trace_a();
InvariantFunction re_trace_b();
InvariantFunction constant_function(double c);

/// Ψ_g(A, B) = (gAg⁻¹, gBg⁻¹).
DoublePoint psi(const UnitaryMatrix& g, const DoublePoint& x);
DoubleTangent psi_push(const UnitaryMatrix& g, const DoubleTangent& t);

/// μ(A, B) = ABA⁻¹B⁻¹.
UnitaryMatrix moment(const DoublePoint& x);
/// Directional derivative dμ(t), by the product rule.
CMatrix moment_differential(const DoubleTangent& t);

double omega_eval(const DoubleTangent& t1, const DoubleTangent& t2, double lambda = 1.0);

/// Infinitesimal conjugation ζ_D(x): vA = ζA − Aζ, vB = ζB − Bζ.
DoubleTangent infinitesimal_action(const LieAlgebraVector& zeta, const DoublePoint& x);

/// |ω(ζ_D, t) − ½⟨μ⁻¹dμ(t) + dμ(t)μ⁻¹, ζ⟩|
double moment_map_identity_residual(const DoublePoint& x, const LieAlgebraVector& zeta,
                                    const DoubleTangent& t, double lambda = 1.0);

DoublePoint sd_map(const DoublePoint& x);   // (B⁻¹, BAB⁻¹)
DoublePoint td_map(const DoublePoint& x);   // (AB, B)
DoublePoint q_map(const DoublePoint& x);    // Ψ_{μ(x)⁻¹}(x)
DoublePoint rho_map(const DoublePoint& x);  // (B̄, Ā)
/// (z1, z2)·(A, B) = (ω^{z1} A, ω^{z2} B) with ω = e^{2πi/n}.
DoublePoint center_map(int z1, int z2, const DoublePoint& x);

DoubleTangent sd_push(const DoubleTangent& t);
DoubleTangent td_push(const DoubleTangent& t);

/// Gram matrix ω(e_i, e_j) on the left-trivialized basis su_basis ⊕ su_basis.
RMatrix omega_gram(const DoublePoint& x, double lambda = 1.0);

struct VectorFieldSolution {
  DoubleTangent field;
  double omega_residual;   // max_m |ω(v, w_m) − dh(w_m)|
  double moment_residual;  // ‖μ⁻¹dμ(v)‖_max
};

/// Quasi-Hamiltonian vector field: ω(v, ·) = dh and dμ(v) = 0, minimum-norm
/// where ω is degenerate. Throws SolveFailure if either residual exceeds tol.
VectorFieldSolution qh_vector_field(const InvariantFunction& h, const DoublePoint& x,
                                    double lambda = 1.0, double tol = kTolSolve);

/// {f, h} = ω(v_f, v_h).
double poisson_bracket(const InvariantFunction& f, const InvariantFunction& h,
                       const DoublePoint& x, double lambda = 1.0);

struct GaugeMatch {
  bool equivalent = false;
  std::optional<UnitaryMatrix> conjugator;  // g with Ψ_g(x) = x′
};

/// Decides whether x′ = Ψ_g(x) for some g ∈ SU(n). Throws AmbiguousMatch when
/// B is not regular.
GaugeMatch gauge_equivalent(const DoublePoint& x, const DoublePoint& xp, double tol = 1e-8);

double distance(const DoublePoint& x, const DoublePoint& y);

}  // namespace rsd
