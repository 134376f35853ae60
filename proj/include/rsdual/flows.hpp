#pragma once

// Hamiltonian dynamics on the local phase space 𝒫⁰ × 𝕋_{n−1} with
// Ω = Λ Σ dθ_k ∧ dξ_k: brackets, flow integration and action-angle checks.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "rsdual/rs3b.hpp"

namespace rsd {

inline constexpr double kTolOde = 1e-9;

/// A smooth function on the local phase space with its gradient, laid out as
/// (∂/∂ξ_1..∂/∂ξ_{n−1}, ∂/∂θ_1..∂/∂θ_{n−1}).
struct Generator {
  std::string name;
  std::function<double(const Coupling&, const LocalPoint&)> value;
  std::function<RVector(const Coupling&, const LocalPoint&)> gradient;
};

Generator position_generator(int k);  // ξ_k, 1-based
Generator angle_generator(int k);     // θ_k (locally defined)
Generator hamiltonian_generator();    // H = Re tr L
Generator action_generator(int k);    // 𝓘_k ∘ 𝓔, eigenvalue perturbation gradient

/// Gradients of all 𝓘_k ∘ 𝓔 at p, one row per k.
RMatrix action_gradients(const Coupling& c, const LocalPoint& p);
/// Central-difference gradient with Richardson extrapolation (cross-check).
RVector fd_gradient(const Generator& g, const Coupling& c, const LocalPoint& p, double h = 1e-4);

/// Parses "H", "xi<k>", "theta<k>" or "I<k>".
Generator generator_by_name(const std::string& name);

/// {f, g} = (1/Λ) Σ_k (∂f/∂θ_k ∂g/∂ξ_k − ∂f/∂ξ_k ∂g/∂θ_k).
double canonical_bracket(const Generator& f, const Generator& g, const Coupling& c,
                         const LocalPoint& p);

/// Hamilton's equations: dξ/dt = −(1/Λ)∂H/∂θ, dθ/dt = (1/Λ)∂H/∂ξ.
RVector hamiltonian_vector_field(const Generator& h, const Coupling& c, const LocalPoint& p);

struct FlowOptions {
  double tol_ode = kTolOde;
  double max_step = kPi / 50.0;
  double boundary_margin = 1e-4;
  double initial_step = 1e-3;
  long max_steps = 2'000'000;
};

enum class FlowStatus { Completed, BoundaryApproach };

struct TrajectorySample {
  double t;
  LocalPoint point;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;  // one per accepted step, t monotone
  std::string generator;
  FlowStatus status = FlowStatus::Completed;
  long steps = 0;
  long rejected = 0;
  double max_step_error = 0.0;

  const LocalPoint& final_point() const { return samples.back().point; }
};

/// Adaptive Dormand–Prince 5(4) integration from p0 to t_final (either sign).
/// Stops with status BoundaryApproach if ξ comes within the margin of ∂𝒫.
Trajectory integrate_flow(const Coupling& c, const Generator& h, const LocalPoint& p0,
                          double t_final, const FlowOptions& opt = {});

/// Dormand–Prince 5th-order steps on a fixed time grid (no error control). The
/// result is a smooth function of p0, which finite-difference probes require.
LocalPoint integrate_on_grid(const Coupling& c, const Generator& h, const LocalPoint& p0,
                             const std::vector<double>& times);

/// Phase-space distance measured through the embedding (well-defined near walls).
double local_distance(const Coupling& c, const LocalPoint& a, const LocalPoint& b);

struct ActionAngleReport {
  double action_bracket_max = 0.0;    // max |{𝓘_j, 𝓘_k}|
  double position_bracket_max = 0.0;  // max |{ξ_j, ξ_k}|
  double conservation_max = 0.0;      // max |𝓘_k(t) − 𝓘_k(0)| along the H-flow
  double energy_drift = 0.0;          // max |H(t) − H(0)|
  std::vector<double> periodicity;    // per k: distance after time 2πΛ of the 𝓘_k flow
  int boundary_skips = 0;
};

ActionAngleReport verify_action_angle(const Coupling& c, const LocalPoint& p0,
                                      double t_conservation = 10.0, const FlowOptions& opt = {});

/// CSV with header t,xi_1..xi_{n−1},theta_1..theta_{n−1} and 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace rsd
