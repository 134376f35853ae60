#include "rsdual/checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rsdual/duality.hpp"
#include "rsdual/flows.hpp"
#include "rsdual/pullback.hpp"

namespace rsd {

namespace {

TrialOutcome ok(double r) { return TrialOutcome{r, false, false, {}}; }
TrialOutcome skip(std::string why) { return TrialOutcome{0.0, true, false, std::move(why)}; }
TrialOutcome holds(bool cond) { return ok(cond ? 0.0 : 1.0); }

double vmax(const RVector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

DoublePoint random_double(int n, Rng& rng) {
  return {random_special_unitary(n, rng), random_special_unitary(n, rng)};
}

DoubleTangent random_tangent(const DoublePoint& x, Rng& rng) {
  const int n = x.dim();
  return DoubleTangent::from_left(x, random_lie_algebra(n, rng).matrix(),
                                  random_lie_algebra(n, rng).matrix());
}

RVector random_direction(int size, Rng& rng) {
  RVector v(size);
  for (int k = 0; k < size; ++k) v(k) = rng.normal();
  return v / v.norm();
}

// Element of the stabilizer S(U(n−1) × U(1)) of μ₀.
UnitaryMatrix random_stabilizer(int n, Rng& rng) {
  const double phi = rng.uniform(0.0, 2.0 * kPi);
  CMatrix g = CMatrix::Zero(n, n);
  if (n - 1 >= 2)
    g.topLeftCorner(n - 1, n - 1) = random_special_unitary(n - 1, rng).matrix();
  else
    g(0, 0) = 1.0;
  g.topLeftCorner(n - 1, n - 1) *= std::polar(1.0, phi);
  g(n - 1, n - 1) = std::polar(1.0, -(n - 1) * phi);
  return UnitaryMatrix::certify(g);
}

RVector reversed(const RVector& v) { return v.reverse(); }

double matrix_distance(const UnitaryMatrix& a, const UnitaryMatrix& b) {
  return max_abs(a.matrix() - b.matrix());
}

// Left-trivialized matrix of Ad_μ + 1 on su(n).
RMatrix ad_plus_identity(const UnitaryMatrix& mu) {
  const auto basis = su_basis(mu.dim());
  const int d = static_cast<int>(basis.size());
  RMatrix m(d, d);
  for (int b = 0; b < d; ++b)
    m.col(b) = su_coordinates(mu.matrix() * basis[b] * mu.matrix().adjoint() + basis[b], basis);
  return m;
}

int word_sign(const std::string& word) {
  return std::count(word.begin(), word.end(), 'R') % 2 == 0 ? 1 : -1;
}

using Checks = std::vector<CheckSpec>;

void linalg_checks(Checks& out) {
  out.push_back({"linalg.alcove_roundtrip", "alcove coordinates of delta(xi) recover xi",
                 [](const Tolerances& t) { return t.algebraic; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const RVector xi = random_alcove(cfg.n, rng);
                   return ok(vmax(alcove_coordinates(delta_matrix(xi)).xi - xi));
                 }});
  out.push_back({"linalg.alcove_inverse", "Xi_k(g^-1) = Xi_{n-k}(g)",
                 [](const Tolerances& t) { return t.algebraic; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const UnitaryMatrix g = random_special_unitary(cfg.n, rng);
                   const AlcoveVector a = alcove_coordinates(g);
                   if (a.degenerate) return skip("degenerate spectrum");
                   return ok(vmax(alcove_coordinates(g.inverse()).xi - reversed(a.xi)));
                 }});
  out.push_back({"linalg.alcove_conjugation", "Xi(h g h^-1) = Xi(g)",
                 [](const Tolerances& t) { return 10.0 * t.algebraic; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const UnitaryMatrix g = random_special_unitary(cfg.n, rng);
                   const UnitaryMatrix h = random_special_unitary(cfg.n, rng);
                   return ok(vmax(alcove_coordinates(h * g * h.inverse()).xi -
                                  alcove_coordinates(g).xi));
                 }});
  out.push_back({"linalg.scalar_product_positive", "<X, X> > 0 on su(n)",
                 [](const Tolerances&) { return 0.0; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const LieAlgebraVector x = random_lie_algebra(cfg.n, rng);
                   return holds(scalar_product(x, x, cfg.lambda) > 0.0);
                 }});
  out.push_back({"linalg.eigensystem_reconstruction", "g = V diag(exp(i phase)) V^-1",
                 [](const Tolerances& t) { return t.algebraic; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const UnitaryMatrix g = random_special_unitary(cfg.n, rng);
                   const UnitaryEigensystem es = eigensystem_unitary(g);
                   CVector d(cfg.n);
                   for (int j = 0; j < cfg.n; ++j) d(j) = std::polar(1.0, es.phases(j));
                   const CMatrix rec = es.frame * d.asDiagonal() * es.frame.adjoint();
                   return ok(max_abs(rec - g.matrix()));
                 }});
}

void double_checks(Checks& out) {
  out.push_back({"double.moment_equivariance", "mu(Psi_g x) = g mu(x) g^-1",
                 [](const Tolerances& t) { return t.exact; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const DoublePoint x = random_double(cfg.n, rng);
                   const UnitaryMatrix g = random_special_unitary(cfg.n, rng);
                   return ok(matrix_distance(moment(psi(g, x)), g * moment(x) * g.inverse()));
                 }});
  out.push_back({"double.moment_map_identity",
                 "omega(zeta_D, t) = 1/2 <mu^-1 dmu(t) + dmu(t) mu^-1, zeta>",
                 [](const Tolerances& t) { return 10.0 * t.algebraic; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const DoublePoint x = random_double(cfg.n, rng);
                   const LieAlgebraVector zeta = random_lie_algebra(cfg.n, rng);
                   return ok(moment_map_identity_residual(x, zeta, random_tangent(x, rng),
                                                          cfg.lambda));
                 }});
  out.push_back({"double.automorphism_invariance", "S_D, T_D and Psi_g preserve omega",
                 [](const Tolerances& t) { return 10.0 * t.algebraic; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const DoublePoint x = random_double(cfg.n, rng);
                   const DoubleTangent t1 = random_tangent(x, rng), t2 = random_tangent(x, rng);
                   const UnitaryMatrix g = random_special_unitary(cfg.n, rng);
                   const double w = omega_eval(t1, t2, cfg.lambda);
                   return ok(std::max(
                       {std::abs(omega_eval(sd_push(t1), sd_push(t2), cfg.lambda) - w),
                        std::abs(omega_eval(td_push(t1), td_push(t2), cfg.lambda) - w),
                        std::abs(omega_eval(psi_push(g, t1), psi_push(g, t2), cfg.lambda) - w)}));
                 }});
  out.push_back({"double.automorphism_equivariance",
                 "S_D, T_D commute with Psi_g and preserve mu",
                 [](const Tolerances& t) { return t.exact; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const DoublePoint x = random_double(cfg.n, rng);
                   const UnitaryMatrix g = random_special_unitary(cfg.n, rng);
                   const UnitaryMatrix mu = moment(x);
                   return ok(std::max({distance(sd_map(psi(g, x)), psi(g, sd_map(x))),
                                       distance(td_map(psi(g, x)), psi(g, td_map(x))),
                                       matrix_distance(moment(sd_map(x)), mu),
                                       matrix_distance(moment(td_map(x)), mu)}));
                 }});
  out.push_back({"double.group_relations", "S_D^2 = (S_D T_D)^3 and S_D^4 = Q",
                 [](const Tolerances& t) { return t.exact; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const DoublePoint x = random_double(cfg.n, rng);
                   const DoublePoint s2 = sd_map(sd_map(x));
                   DoublePoint st3 = x;
                   for (int i = 0; i < 3; ++i) st3 = sd_map(td_map(st3));
                   return ok(std::max(distance(s2, st3), distance(sd_map(sd_map(s2)), q_map(x))));
                 }});
  out.push_back({"double.exchange_precursor", "beta_k o S_D = alpha_k, alpha_k o S_D = beta_{n-k}",
                 [](const Tolerances& t) { return t.algebraic; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const DoublePoint x = random_double(cfg.n, rng);
                   const DoublePoint s = sd_map(x);
                   const RVector a = alcove_coordinates(x.A).xi, b = alcove_coordinates(x.B).xi;
                   return ok(std::max(vmax(alcove_coordinates(s.B).xi - a),
                                      vmax(alcove_coordinates(s.A).xi - reversed(b))));
                 }});
  for (const char* which : {"alpha", "beta"}) {
    const bool alpha = std::string(which) == "alpha";
    out.push_back({std::string("double.") + which + "_involution",
                   std::string("{") + which + "_j, " + which + "_k} = 0",
                   [](const Tolerances& t) { return t.solve; },
                   [alpha](const CampaignConfig& cfg, Rng& rng) {
                     const DoublePoint x = random_double(cfg.n, rng);
                     double r = 0.0;
                     for (int j = 1; j < cfg.n; ++j)
                       for (int k = j + 1; k < cfg.n; ++k) {
                         const auto f = alpha ? alpha_function(j) : beta_function(j);
                         const auto h = alpha ? alpha_function(k) : beta_function(k);
                         r = std::max(r, std::abs(poisson_bracket(f, h, x, cfg.lambda)));
                       }
                     return ok(r);
                   },
                   2});
  }
  out.push_back({"double.kernel_rank", "omega is nondegenerate where Ad_mu + 1 is invertible",
                 [](const Tolerances&) { return 0.0; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const DoublePoint x = random_double(cfg.n, rng);
                   const RVector s_ad =
                       Eigen::JacobiSVD<RMatrix>(ad_plus_identity(moment(x))).singularValues();
                   if (s_ad(s_ad.size() - 1) < 1e-6) return skip("Ad_mu + 1 near singular");
                   const RVector s = Eigen::JacobiSVD<RMatrix>(omega_gram(x, cfg.lambda))
                                         .singularValues();
                   return holds(s(s.size() - 1) > 1e-12 * s(0));
                 }});
}

void rs3b_checks(Checks& out) {
  out.push_back({"rs3b.lax_unitarity", "L(xi, theta) is special unitary",
                 [](const Tolerances& t) { return t.exact; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   return ok(lax_local(c, sample_local_point(c, rng)).unitarity_residual());
                 }});
  out.push_back({"rs3b.hamiltonian_consistency", "H(xi, theta) = Re tr L(xi, theta)",
                 [](const Tolerances& t) { return t.algebraic; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const LocalPoint p = sample_local_point(c, rng);
                   return ok(std::abs(hamiltonian(c, p) -
                                      lax_local(c, p).matrix().trace().real()));
                 }});
  out.push_back({"rs3b.embedding_roundtrip", "E^-1(E(xi, theta)) = (xi, theta)",
                 [](const Tolerances& t) { return t.exact; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const LocalPoint p = sample_local_point(c, rng);
                   return ok(local_distance(c, embed_inverse(c, embed(c, p)), p));
                 }});
  out.push_back({"rs3b.symplectic_embedding", "E* (chi0 omega_FS) = sum dtheta_k ^ dxi_k",
                 [](const Tolerances& t) { return 0.1 * t.fd; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const LocalPoint p = sample_local_point(c, rng, 1e-2);
                   const int d = 2 * (cfg.n - 1);
                   const RVector a = random_direction(d, rng), b = random_direction(d, rng);
                   return ok(embedding_pullback_residual(c, p, a, b, cfg.tol.jacobian_step));
                 }});
  out.push_back({"rs3b.global_lax_agreement", "L(E(xi, theta)) = L(xi, theta)",
                 [](const Tolerances& t) { return t.algebraic; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const LocalPoint p = sample_local_point(c, rng);
                   return ok(matrix_distance(lax_global(c, embed(c, p)), lax_local(c, p)));
                 }});
  out.push_back({"rs3b.lax_regularity", "eigenphases of L(q) are pairwise distinct",
                 [](const Tolerances&) { return 0.0; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const UnitaryMatrix l = lax_global(c, sample_projective_point(c, rng));
                   return holds(cyclic_gaps(alcove_coordinates(l).xi).minCoeff() > kDegeneracyTol);
                 }});
  out.push_back({"rs3b.polytope_images", "J(q) and I(q) lie in the polytope P",
                 [](const Tolerances& t) { return 10.0 * t.algebraic; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const ProjectivePoint q = sample_projective_point(c, rng);
                   return ok(std::max({0.0, polytope_violation(c, position_map(c, q)),
                                       polytope_violation(c, action_map(c, q))}));
                 }});
  out.push_back({"rs3b.action_involution", "{I_j, I_k} = 0",
                 [](const Tolerances& t) { return t.fd; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const LocalPoint p = sample_local_point(c, rng);
                   double r = 0.0;
                   for (int j = 1; j < cfg.n; ++j)
                     for (int k = j + 1; k < cfg.n; ++k)
                       r = std::max(r, std::abs(canonical_bracket(action_generator(j),
                                                                  action_generator(k), c, p)));
                   return ok(r);
                 }});
  out.push_back({"rs3b.hamiltonian_commutes", "{H, I_k} = 0",
                 [](const Tolerances& t) { return t.fd; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const LocalPoint p = sample_local_point(c, rng);
                   double r = 0.0;
                   for (int k = 1; k < cfg.n; ++k)
                     r = std::max(r, std::abs(canonical_bracket(hamiltonian_generator(),
                                                                action_generator(k), c, p)));
                   return ok(r);
                 }});
  out.push_back({"rs3b.action_gradient", "eigen-perturbation gradient of I_k = finite differences",
                 [](const Tolerances& t) { return t.fd; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const LocalPoint p = sample_local_point(c, rng, 1e-2);
                   double r = 0.0;
                   for (int k = 1; k < cfg.n; ++k) {
                     const Generator g = action_generator(k);
                     r = std::max(r, vmax(g.gradient(c, p) - fd_gradient(g, c, p)));
                   }
                   return ok(r);
                 }});
  out.push_back({"rs3b.lambda_scaling", "flow at (Lambda, t) = flow at (1, t / Lambda)",
                 [](const Tolerances& t) { return 100.0 * t.ode; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const double lambda = cfg.lambda == 1.0 ? 2.5 : cfg.lambda;
                   const Coupling scaled = Coupling::make(c.n, c.y, lambda);
                   const Coupling unit = Coupling::make(c.n, c.y, 1.0);
                   const LocalPoint p = sample_local_point(c, rng);
                   FlowOptions opt;
                   opt.tol_ode = cfg.tol.ode;
                   const double t = 1.0;
                   const Trajectory a = integrate_flow(scaled, hamiltonian_generator(), p, t, opt);
                   const Trajectory b =
                       integrate_flow(unit, hamiltonian_generator(), p, t / lambda, opt);
                   if (a.status != FlowStatus::Completed || b.status != FlowStatus::Completed)
                     return skip("boundary approach");
                   return ok(local_distance(c, a.final_point(), b.final_point()));
                 },
                 5, 0.5});
}

void duality_checks(Checks& out) {
  out.push_back({"duality.constraint", "mu(f0(q)) = mu0",
                 [](const Tolerances& t) { return t.constraint; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const ProjectivePoint q = sample_projective_point(c, rng);
                   if (!q.in_dense_patch(cfg.tol.patch)) return skip("outside dense patch");
                   return ok(f0_map(c, q, std::numeric_limits<double>::infinity()).residual());
                 }});
  out.push_back({"duality.spectral_coordinates", "Xi(B) = J(q) and Xi(A) = I(q) at f0(q)",
                 [](const Tolerances& t) { return t.algebraic; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const ProjectivePoint q = sample_projective_point(c, rng);
                   const ConstraintPoint x = f0_map(c, q);
                   return ok(std::max(vmax(alcove_coordinates(x.point.B).xi - position_map(c, q)),
                                      vmax(alcove_coordinates(x.point.A).xi - action_map(c, q))));
                 }});
  out.push_back({"duality.gauge_matrix", "g_y(xi) is real orthogonal with unit determinant",
                 [](const Tolerances& t) { return t.exact; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const CMatrix g = g_matrix(c, sample_local_point(c, rng).xi).matrix();
                   return ok(std::max({g.imag().cwiseAbs().maxCoeff(),
                                       max_abs(g.transpose() * g - CMatrix::Identity(c.n, c.n)),
                                       std::abs(g.determinant() - 1.0)}));
                 }});
  out.push_back({"duality.f0_roundtrip", "f0^-1(f0(q)) = q",
                 [](const Tolerances& t) { return t.roundtrip; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const ProjectivePoint q = sample_projective_point(c, rng);
                   return ok(distance(f0_inverse(c, f0_map(c, q)), q));
                 }});
  out.push_back({"duality.f0_gauge_invariance", "f0^-1(Psi_g x) = f0^-1(x) for g fixing mu0",
                 [](const Tolerances& t) { return t.roundtrip; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const ProjectivePoint q = sample_projective_point(c, rng);
                   const ConstraintPoint x = f0_map(c, q);
                   const UnitaryMatrix g = random_stabilizer(c.n, rng);
                   return ok(distance(f0_inverse(c, psi(g, x.point)), q));
                 }});
  out.push_back({"duality.exchange_positions", "J o S = I",
                 [](const Tolerances& t) { return t.roundtrip; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const ProjectivePoint q = sample_projective_point(c, rng);
                   return ok(vmax(position_map(c, duality_map(c, q)) - action_map(c, q)));
                 }});
  out.push_back({"duality.exchange_actions", "I_k o S = J_{n-k}",
                 [](const Tolerances& t) { return t.roundtrip; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const ProjectivePoint q = sample_projective_point(c, rng);
                   return ok(vmax(action_map(c, duality_map(c, q)) - reversed(position_map(c, q))));
                 }});
  out.push_back({"duality.order_s4", "S^4 = id",
                 [](const Tolerances& t) { return t.fd; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const ProjectivePoint q = sample_projective_point(c, rng);
                   return ok(distance(apply_word(c, "SSSS", q), q));
                 }});
  out.push_back({"duality.order_st3", "(S T)^3 = S^2",
                 [](const Tolerances& t) { return t.fd; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const ProjectivePoint q = sample_projective_point(c, rng);
                   return ok(distance(apply_word(c, "TSTSTS", q), apply_word(c, "SS", q)));
                 }});
  out.push_back({"duality.order_r2", "R^2 = id",
                 [](const Tolerances& t) { return 0.1 * t.fd; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const ProjectivePoint q = sample_projective_point(c, rng);
                   return ok(distance(apply_word(c, "RR", q), q));
                 }});
  out.push_back({"duality.r_exchange", "J o R = I and I o R = J",
                 [](const Tolerances& t) { return t.roundtrip; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const ProjectivePoint q = sample_projective_point(c, rng);
                   const ProjectivePoint r = involution_r(c, q);
                   return ok(std::max(vmax(position_map(c, r) - action_map(c, q)),
                                      vmax(action_map(c, r) - position_map(c, q))));
                 }});
  out.push_back({"duality.r_conjugated_s", "R = C o S with C complex conjugation",
                 [](const Tolerances& t) { return t.roundtrip; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const ProjectivePoint q = sample_projective_point(c, rng);
                   return ok(distance(involution_r(c, q),
                                      complex_conjugation(c, duality_map(c, q))));
                 }});
  out.push_back({"duality.center_action", "S o c(z1, z2) = c(-z2, z1) o S; J, I preserved",
                 [](const Tolerances& t) { return t.roundtrip; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const ProjectivePoint q = sample_projective_point(c, rng);
                   const int z1 = static_cast<int>(rng.bits() % static_cast<unsigned>(c.n));
                   const int z2 = static_cast<int>(rng.bits() % static_cast<unsigned>(c.n));
                   const ProjectivePoint lhs = duality_map(c, center_action(c, z1, z2, q));
                   const ProjectivePoint rhs = center_action(c, -z2, z1, duality_map(c, q));
                   const ProjectivePoint cq = center_action(c, z1, z2, q);
                   return ok(std::max({distance(lhs, rhs),
                                       vmax(position_map(c, center_action(c, z1, 0, q)) -
                                            position_map(c, q)),
                                       vmax(action_map(c, center_action(c, 0, z2, q)) -
                                            action_map(c, q)),
                                       f0_map(c, cq, std::numeric_limits<double>::infinity())
                                           .residual()}));
                 }});
  out.push_back({"duality.phase_invariance", "S, T and R are defined on CP(n-1)",
                 [](const Tolerances& t) { return t.roundtrip; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const ProjectivePoint q = sample_projective_point(c, rng);
                   const Complex phase = std::polar(1.0, rng.uniform(0.0, 2.0 * kPi));
                   const ProjectivePoint qp = ProjectivePoint::from_homogeneous(c, phase * q.u());
                   return ok(std::max({distance(duality_map(c, qp), duality_map(c, q)),
                                       distance(dehn_twist_map(c, qp), dehn_twist_map(c, q)),
                                       distance(involution_r(c, qp), involution_r(c, q))}));
                 }});
  out.push_back({"duality.f0_symplectic", "f0* omega = chi0 omega_FS",
                 [](const Tolerances& t) { return t.fd; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const ProjectivePoint q = sample_projective_point(c, rng);
                   const CVector v = horizontal_tangent(q.u(), rng);
                   const CVector w = horizontal_tangent(q.u(), rng);
                   return ok(f0_pullback_residual(c, q, v, w, cfg.tol.jacobian_step));
                 }});
  struct Probe {
    const char* name;
    const char* anchor;
    const char* word;
    int sign;
  };
  for (const Probe& pr : {Probe{"duality.s_symplectic", "S* omega_FS = omega_FS", "S", 1},
                          Probe{"duality.t_symplectic", "T* omega_FS = omega_FS", "T", 1},
                          Probe{"duality.r_antisymplectic", "R* omega_FS = -omega_FS", "R", -1}}) {
    const std::string word = pr.word;
    const int sign = pr.sign;
    out.push_back({pr.name, pr.anchor, [](const Tolerances& t) { return t.fd; },
                   [word, sign](const CampaignConfig& cfg, Rng& rng) {
                     const Coupling c = cfg.coupling();
                     const ProjectivePoint q = sample_projective_point(c, rng);
                     const CVector v = horizontal_tangent(q.u(), rng);
                     const CVector w = horizontal_tangent(q.u(), rng);
                     const ProjectiveMap f = [&](const ProjectivePoint& a) {
                       return apply_word(c, word, a);
                     };
                     return ok(map_pullback_residual(c, f, q, v, w, sign, cfg.tol.jacobian_step));
                   }});
  }
}

void flow_checks(Checks& out) {
  auto options = [](const CampaignConfig& cfg) {
    FlowOptions opt;
    opt.tol_ode = cfg.tol.ode;
    return opt;
  };
  out.push_back({"flows.energy_conservation", "|H(t) - H(0)| <= 10 tol_ode t along the H-flow",
                 [](const Tolerances& t) { return 10.0 * t.ode; },
                 [options](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const LocalPoint p = sample_local_point(c, rng);
                   const Trajectory tr =
                       integrate_flow(c, hamiltonian_generator(), p, cfg.t_final, options(cfg));
                   if (tr.status != FlowStatus::Completed) return skip("boundary approach");
                   const double h0 = hamiltonian(c, p);
                   double r = 0.0;
                   for (const auto& s : tr.samples)
                     if (s.t != 0.0)
                       r = std::max(r, std::abs(hamiltonian(c, s.point) - h0) / std::abs(s.t));
                   return ok(r);
                 },
                 10, 0.5});
  out.push_back({"flows.action_conservation", "I_k is constant along the H-flow",
                 [](const Tolerances& t) { return 100.0 * t.ode; },
                 [options](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const LocalPoint p = sample_local_point(c, rng);
                   const Trajectory tr =
                       integrate_flow(c, hamiltonian_generator(), p, cfg.t_final, options(cfg));
                   if (tr.status != FlowStatus::Completed) return skip("boundary approach");
                   const RVector i0 = alcove_coordinates(lax_local(c, p)).xi;
                   double r = 0.0;
                   for (const auto& s : tr.samples)
                     r = std::max(r, vmax(alcove_coordinates(lax_local(c, s.point)).xi - i0));
                   return ok(r);
                 },
                 10, 0.5});
  out.push_back({"flows.action_periodicity", "the I_k-flows are periodic with period 2 pi Lambda",
                 [](const Tolerances& t) { return t.fd; },
                 [options](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const LocalPoint p = sample_local_point(c, rng);
                   double r = 0.0;
                   for (int k = 1; k < c.n; ++k) {
                     const Trajectory tr = integrate_flow(c, action_generator(k), p,
                                                          2.0 * kPi * c.lambda, options(cfg));
                     if (tr.status != FlowStatus::Completed) return skip("boundary approach");
                     r = std::max(r, local_distance(c, tr.final_point(), p));
                   }
                   return ok(r);
                 },
                 10, 0.5});
  out.push_back({"flows.reversibility", "flowing to t and back returns to the start",
                 [](const Tolerances& t) { return 10.0 * t.ode; },
                 [options](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const LocalPoint p = sample_local_point(c, rng);
                   const Generator h = generator_by_name(cfg.generator);
                   const Trajectory fwd = integrate_flow(c, h, p, cfg.t_final, options(cfg));
                   if (fwd.status != FlowStatus::Completed) return skip("boundary approach");
                   const Trajectory back =
                       integrate_flow(c, h, fwd.final_point(), -cfg.t_final, options(cfg));
                   if (back.status != FlowStatus::Completed) return skip("boundary approach");
                   return ok(local_distance(c, back.final_point(), p));
                 },
                 10, 0.5});
  out.push_back({"flows.symplecticity", "the time-1 flow map preserves sum dtheta_k ^ dxi_k",
                 [](const Tolerances& t) { return 10.0 * t.fd; },
                 [options](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const LocalPoint p = sample_local_point(c, rng, 1e-2);
                   const Generator h = generator_by_name(cfg.generator);
                   const Trajectory tr = integrate_flow(c, h, p, 1.0, options(cfg));
                   if (tr.status != FlowStatus::Completed) return skip("boundary approach");
                   std::vector<double> times;
                   for (const auto& s : tr.samples) times.push_back(s.t);
                   const int m = c.n - 1;
                   const double step = cfg.tol.jacobian_step;
                   auto push = [&](const RVector& dir) {
                     const LocalPoint pp{p.xi + step * dir.head(m), p.theta + step * dir.tail(m)};
                     const LocalPoint pm{p.xi - step * dir.head(m), p.theta - step * dir.tail(m)};
                     const LocalPoint fp = integrate_on_grid(c, h, pp, times);
                     const LocalPoint fm = integrate_on_grid(c, h, pm, times);
                     RVector d(2 * m);
                     d << (fp.xi - fm.xi) / (2 * step), (fp.theta - fm.theta) / (2 * step);
                     return d;
                   };
                   const RVector a = random_direction(2 * m, rng), b = random_direction(2 * m, rng);
                   return ok(std::abs(local_form(push(a), push(b)) - local_form(a, b)));
                 },
                 10, 0.5});
}

void mcg_checks(Checks& out) {
  out.push_back({"mcg.word_symplectic", "a word with r letters R pulls omega_FS back to (-1)^r omega_FS",
                 [](const Tolerances& t) { return t.fd; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const ProjectivePoint q = sample_projective_point(c, rng);
                   const CVector v = horizontal_tangent(q.u(), rng);
                   const CVector w = horizontal_tangent(q.u(), rng);
                   const ProjectiveMap f = [&](const ProjectivePoint& a) {
                     return apply_word(c, cfg.word, a);
                   };
                   return ok(map_pullback_residual(c, f, q, v, w, word_sign(cfg.word),
                                                   cfg.tol.jacobian_step));
                 }});
  out.push_back({"mcg.word_relation", "a word equal to +1 (-1) in SL(2,Z) acts as id (S^2)",
                 [](const Tolerances& t) { return t.fd; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const auto m = word_matrix(cfg.word);
                   const bool plus = m && *m == std::array<long, 4>{1, 0, 0, 1};
                   const bool minus = m && *m == std::array<long, 4>{-1, 0, 0, -1};
                   if (!plus && !minus)
                     throw Error(ErrorKind::InvalidArgument, "word is not central in SL(2,Z)");
                   const ProjectivePoint q = sample_projective_point(c, rng);
                   const ProjectivePoint target = plus ? q : apply_word(c, "SS", q);
                   return ok(distance(apply_word(c, cfg.word, q), target));
                 }});
  out.push_back({"mcg.word_preserves_polytope", "J and I of the image lie in P",
                 [](const Tolerances& t) { return 10.0 * t.algebraic; },
                 [](const CampaignConfig& cfg, Rng& rng) {
                   const Coupling c = cfg.coupling();
                   const ProjectivePoint q = apply_word(c, cfg.word, sample_projective_point(c, rng));
                   return ok(std::max({0.0, polytope_violation(c, position_map(c, q)),
                                       polytope_violation(c, action_map(c, q))}));
                 }});
}

std::vector<std::string> with_prefix(const std::vector<std::string>& prefixes) {
  std::vector<std::string> names;
  for (const auto& spec : all_checks())
    for (const auto& pre : prefixes)
      if (spec.name.rfind(pre, 0) == 0) names.push_back(spec.name);
  return names;
}

}  // namespace

const std::vector<CheckSpec>& all_checks() {
  static const Checks checks = [] {
    Checks out;
    linalg_checks(out);
    double_checks(out);
    rs3b_checks(out);
    duality_checks(out);
    flow_checks(out);
    mcg_checks(out);
    return out;
  }();
  return checks;
}

const CheckSpec& find_check(const std::string& name) {
  for (const auto& spec : all_checks())
    if (spec.name == name) return spec;
  throw Error(ErrorKind::InvalidArgument, "unknown check '" + name + "'");
}

std::vector<std::string> verify_battery() {
  return with_prefix({"linalg.", "double.", "rs3b.", "duality.", "flows."});
}

std::vector<std::string> duality_battery() {
  return with_prefix({"double.exchange_precursor", "double.group_relations", "duality."});
}

std::vector<std::string> spectra_battery() {
  return {"rs3b.polytope_images", "rs3b.lax_regularity", "duality.spectral_coordinates"};
}

std::vector<std::string> flow_battery() {
  return {"rs3b.action_involution",     "rs3b.hamiltonian_commutes", "flows.energy_conservation",
          "flows.action_conservation", "flows.action_periodicity",  "flows.reversibility",
          "flows.symplecticity"};
}

std::vector<TrialOutcome> run_check_trials(const CheckSpec& spec, const CampaignConfig& cfg,
                                           int trials, Execution exec) {
  const TrialFn fn = [&](Rng& rng) { return spec.trial(cfg, rng); };
  const std::uint64_t seed = cfg.seed ^ name_hash(spec.name);
  return exec == Execution::Parallel ? run_trials_parallel(trials, seed, fn)
                                     : run_trials_serial(trials, seed, fn);
}

CheckRecord run_check(const CheckSpec& spec, const CampaignConfig& cfg, std::optional<int> trials,
                      std::optional<double> threshold, Execution exec) {
  const int count = trials ? *trials : std::max(1, cfg.trials / spec.cost);
  const auto outcomes = run_check_trials(spec, cfg, count, exec);
  return summarize(spec.name, spec.anchor, threshold ? *threshold : spec.threshold(cfg.tol),
                   outcomes, spec.max_skip_rate);
}

RVector random_alcove(int n, Rng& rng) {
  RVector e(n);
  for (int k = 0; k < n; ++k) e(k) = rng.exponential();
  return (kPi / e.sum()) * e.head(n - 1);
}

std::optional<std::array<long, 4>> word_matrix(const std::string& word) {
  std::array<long, 4> m{1, 0, 0, 1};
  for (const char ch : word) {
    std::array<long, 4> g;
    if (ch == 'S')
      g = {0, -1, 1, 0};
    else if (ch == 'T')
      g = {1, 1, 0, 1};
    else
      return std::nullopt;
    m = {g[0] * m[0] + g[1] * m[2], g[0] * m[1] + g[1] * m[3], g[2] * m[0] + g[3] * m[2],
         g[2] * m[1] + g[3] * m[3]};
  }
  return m;
}

namespace {

double cross(const RVector& o, const RVector& a, const RVector& b) {
  return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
}

}  // namespace

std::optional<double> polytope_coverage(const Coupling& c, const std::vector<RVector>& samples) {
  if (c.n != 2 && c.n != 3) return std::nullopt;
  if (samples.empty()) return 0.0;
  const double y = c.abs_y();
  if (c.n == 2) {
    double lo = samples.front()(0), hi = lo;
    for (const auto& s : samples) {
      lo = std::min(lo, s(0));
      hi = std::max(hi, s(0));
    }
    return (hi - lo) / (kPi - 2.0 * y);
  }
  if (c.n == 3) {
    std::vector<RVector> pts = samples;
    std::sort(pts.begin(), pts.end(), [](const RVector& a, const RVector& b) {
      return a(0) < b(0) || (a(0) == b(0) && a(1) < b(1));
    });
    std::vector<RVector> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
      hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
      while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0) --k;
      hull[k++] = pts[i - 1];
    }
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < k; ++i)
      area += hull[i](0) * hull[i + 1](1) - hull[i + 1](0) * hull[i](1);
    const double side = kPi - 3.0 * y;
    return std::abs(area) / 2.0 / (side * side / 2.0);
  }
  return std::nullopt;
}

}  // namespace rsd
