#include "rsdual/flows.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace rsd {

namespace {

int dof(const Coupling& c) { return c.n - 1; }

RVector pack(const LocalPoint& p) {
  RVector z(p.xi.size() + p.theta.size());
  z << p.xi, p.theta;
  return z;
}

LocalPoint unpack(const RVector& z) {
  const auto m = z.size() / 2;
  return {z.head(m), z.tail(m)};
}

void check_index(int k, const Coupling& c) {
  if (k < 1 || k >= c.n) throw Error(ErrorKind::InvalidArgument, "generator index out of range");
}

// Distance of ξ from the polytope walls (negative outside).
double wall_distance(const Coupling& c, const RVector& xi) {
  return -polytope_violation(c, xi);
}

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct StepResult {
  RVector z;
  double error;
};

// One Dormand–Prince step; stage evaluations may throw DomainError.
StepResult dp_step(const std::function<RVector(const RVector&)>& f, const RVector& z, double h) {
  const RVector k1 = f(z);
  const RVector k2 = f(z + h * a21 * k1);
  const RVector k3 = f(z + h * (a31 * k1 + a32 * k2));
  const RVector k4 = f(z + h * (a41 * k1 + a42 * k2 + a43 * k3));
  const RVector k5 = f(z + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  const RVector k6 = f(z + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  const RVector z5 = z + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const RVector k7 = f(z5);
  const RVector err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  return {z5, err.cwiseAbs().maxCoeff()};
}

}  // namespace

Generator position_generator(int k) {
  return {"xi" + std::to_string(k),
          [k](const Coupling& c, const LocalPoint& p) {
            check_index(k, c);
            return p.xi(k - 1);
          },
          [k](const Coupling& c, const LocalPoint&) {
            check_index(k, c);
            RVector g = RVector::Zero(2 * dof(c));
            g(k - 1) = 1.0;
            return g;
          }};
}

Generator angle_generator(int k) {
  return {"theta" + std::to_string(k),
          [k](const Coupling& c, const LocalPoint& p) {
            check_index(k, c);
            return p.theta(k - 1);
          },
          [k](const Coupling& c, const LocalPoint&) {
            check_index(k, c);
            RVector g = RVector::Zero(2 * dof(c));
            g(dof(c) + k - 1) = 1.0;
            return g;
          }};
}

Generator hamiltonian_generator() {
  return {"H", [](const Coupling& c, const LocalPoint& p) { return hamiltonian(c, p); },
          [](const Coupling& c, const LocalPoint& p) {
            const auto d = lax_local_derivatives(c, p);
            RVector g(static_cast<Eigen::Index>(d.size()));
            for (std::size_t m = 0; m < d.size(); ++m)
              g(static_cast<Eigen::Index>(m)) = d[m].trace().real();
            return g;
          }};
}

RMatrix action_gradients(const Coupling& c, const LocalPoint& p) {
  const int n = c.n;
  const AlcoveFrame af = alcove_frame(lax_local(c, p));
  const auto d = lax_local_derivatives(c, p);
  // dψ_j = Im(v_j† dL v_j e^{−iψ_j}) for the ordered eigenframe.
  RMatrix dpsi(n, static_cast<Eigen::Index>(d.size()));
  for (int j = 0; j < n; ++j) {
    const CVector v = af.frame.col(j);
    const Complex inv_eig = std::polar(1.0, -af.lifted_phases(j));
    for (std::size_t m = 0; m < d.size(); ++m)
      dpsi(j, static_cast<Eigen::Index>(m)) = (v.dot(d[m] * v) * inv_eig).imag();
  }
  RMatrix g(n - 1, dpsi.cols());
  for (int k = 0; k + 1 < n; ++k) g.row(k) = 0.5 * (dpsi.row(k + 1) - dpsi.row(k));
  return g;
}

Generator action_generator(int k) {
  return {"I" + std::to_string(k),
          [k](const Coupling& c, const LocalPoint& p) {
            check_index(k, c);
            return alcove_coordinates(lax_local(c, p)).xi(k - 1);
          },
          [k](const Coupling& c, const LocalPoint& p) {
            check_index(k, c);
            return RVector(action_gradients(c, p).row(k - 1).transpose());
          }};
}

RVector fd_gradient(const Generator& g, const Coupling& c, const LocalPoint& p, double h) {
  const RVector z = pack(p);
  RVector out(z.size());
  auto central = [&](Eigen::Index i, double step) {
    RVector zp = z, zm = z;
    zp(i) += step;
    zm(i) -= step;
    return (g.value(c, unpack(zp)) - g.value(c, unpack(zm))) / (2.0 * step);
  };
  for (Eigen::Index i = 0; i < z.size(); ++i)
    out(i) = (4.0 * central(i, h / 2) - central(i, h)) / 3.0;
  return out;
}

Generator generator_by_name(const std::string& name) {
  if (name == "H") return hamiltonian_generator();
  auto index_after = [&](const std::string& prefix) -> int {
    if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size()) return -1;
    std::string rest = name.substr(prefix.size());
    if (!rest.empty() && rest.front() == '_') rest.erase(0, 1);
    if (rest.empty() || rest.find_first_not_of("0123456789") != std::string::npos) return -1;
    return std::stoi(rest);
  };
  if (int k = index_after("theta"); k > 0) return angle_generator(k);
  if (int k = index_after("xi"); k > 0) return position_generator(k);
  if (int k = index_after("I"); k > 0) return action_generator(k);
  throw Error(ErrorKind::InvalidArgument, "unknown generator '" + name + "'");
}

double canonical_bracket(const Generator& f, const Generator& g, const Coupling& c,
                         const LocalPoint& p) {
  const int m = dof(c);
  const RVector df = f.gradient(c, p);
  const RVector dg = g.gradient(c, p);
  return (df.tail(m).dot(dg.head(m)) - df.head(m).dot(dg.tail(m))) / c.lambda;
}

RVector hamiltonian_vector_field(const Generator& h, const Coupling& c, const LocalPoint& p) {
  const int m = dof(c);
  const RVector dh = h.gradient(c, p);
  RVector v(2 * m);
  v.head(m) = -dh.tail(m) / c.lambda;
  v.tail(m) = dh.head(m) / c.lambda;
  return v;
}

Trajectory integrate_flow(const Coupling& c, const Generator& h, const LocalPoint& p0,
                          double t_final, const FlowOptions& opt) {
  if (!p0.in_open_polytope(c))
    throw Error(ErrorKind::DomainError, "initial point outside the open polytope");
  const auto rhs = [&](const RVector& z) { return hamiltonian_vector_field(h, c, unpack(z)); };

  Trajectory traj;
  traj.generator = h.name;
  traj.samples.push_back({0.0, p0});
  if (wall_distance(c, p0.xi) < opt.boundary_margin) {
    traj.status = FlowStatus::BoundaryApproach;
    return traj;
  }

  const double dir = t_final < 0 ? -1.0 : 1.0;
  const double span = std::abs(t_final);
  double t = 0.0;
  double step = std::min(opt.initial_step, opt.max_step);
  RVector z = pack(p0);
  while (t < span) {
    if (traj.steps + traj.rejected >= opt.max_steps)
      throw Error(ErrorKind::ConvergenceFailure, "flow integration exceeded the step budget");
    const bool last = t + step >= span;
    const double h_try = last ? span - t : step;
    StepResult r;
    try {
      r = dp_step(rhs, z, dir * h_try);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::DomainError) throw;
      r.error = std::numeric_limits<double>::infinity();
    }
    // error per unit step, so the accumulated error stays near tol_ode·|t|
    const double budget = opt.tol_ode * std::min(1.0, h_try);
    if (!(r.error <= budget)) {
      ++traj.rejected;
      const double shrink = std::isfinite(r.error) ? 0.9 * std::pow(budget / r.error, 0.2) : 0.25;
      step = h_try * std::max(0.1, shrink);
      if (step < 1e-14 * std::max(1.0, span))
        throw Error(ErrorKind::ConvergenceFailure, "step size underflow");
      continue;
    }
    t = last ? span : t + h_try;
    z = r.z;
    ++traj.steps;
    traj.max_step_error = std::max(traj.max_step_error, r.error);
    traj.samples.push_back({dir * t, unpack(z)});
    if (wall_distance(c, z.head(dof(c))) < opt.boundary_margin) {
      traj.status = FlowStatus::BoundaryApproach;
      return traj;
    }
    const double grow = r.error > 0 ? 0.9 * std::pow(budget / r.error, 0.2) : 5.0;
    step = std::min(opt.max_step, h_try * std::clamp(grow, 0.2, 5.0));
    if (last) break;
  }
  return traj;
}

LocalPoint integrate_on_grid(const Coupling& c, const Generator& h, const LocalPoint& p0,
                             const std::vector<double>& times) {
  const auto rhs = [&](const RVector& z) { return hamiltonian_vector_field(h, c, unpack(z)); };
  RVector z = pack(p0);
  for (std::size_t i = 1; i < times.size(); ++i) z = dp_step(rhs, z, times[i] - times[i - 1]).z;
  return unpack(z);
}

double local_distance(const Coupling& c, const LocalPoint& a, const LocalPoint& b) {
  return (embed_lift(c, a) - embed_lift(c, b)).cwiseAbs().maxCoeff();
}

ActionAngleReport verify_action_angle(const Coupling& c, const LocalPoint& p0,
                                      double t_conservation, const FlowOptions& opt) {
  const int m = dof(c);
  ActionAngleReport rep;

  const RMatrix ga = action_gradients(c, p0);
  const RMatrix brackets =
      (ga.rightCols(m) * ga.leftCols(m).transpose() - ga.leftCols(m) * ga.rightCols(m).transpose()) /
      c.lambda;
  rep.action_bracket_max = brackets.cwiseAbs().maxCoeff();
  for (int j = 1; j <= m; ++j)
    for (int k = 1; k <= m; ++k)
      rep.position_bracket_max =
          std::max(rep.position_bracket_max,
                   std::abs(canonical_bracket(position_generator(j), position_generator(k), c, p0)));

  const Trajectory tr = integrate_flow(c, hamiltonian_generator(), p0, t_conservation, opt);
  if (tr.status == FlowStatus::BoundaryApproach) ++rep.boundary_skips;
  const RVector i0 = alcove_coordinates(lax_local(c, p0)).xi;
  const double h0 = hamiltonian(c, p0);
  for (const auto& s : tr.samples) {
    const RVector it = alcove_coordinates(lax_local(c, s.point)).xi;
    rep.conservation_max = std::max(rep.conservation_max, (it - i0).cwiseAbs().maxCoeff());
    rep.energy_drift = std::max(rep.energy_drift, std::abs(hamiltonian(c, s.point) - h0));
  }

  for (int k = 1; k <= m; ++k) {
    const Trajectory per = integrate_flow(c, action_generator(k), p0, 2.0 * kPi * c.lambda, opt);
    if (per.status == FlowStatus::BoundaryApproach) {
      ++rep.boundary_skips;
      rep.periodicity.push_back(std::numeric_limits<double>::quiet_NaN());
    } else {
      rep.periodicity.push_back(local_distance(c, per.final_point(), p0));
    }
  }
  return rep;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  if (traj.samples.empty()) return;
  const auto m = traj.samples.front().point.xi.size();
  os << "t";
  for (Eigen::Index k = 1; k <= m; ++k) os << ",xi_" << k;
  for (Eigen::Index k = 1; k <= m; ++k) os << ",theta_" << k;
  os << '\n' << std::setprecision(17);
  for (const auto& s : traj.samples) {
    os << s.t;
    for (Eigen::Index k = 0; k < m; ++k) os << ',' << s.point.xi(k);
    for (Eigen::Index k = 0; k < m; ++k) os << ',' << s.point.theta(k);
    os << '\n';
  }
}

}  // namespace rsd
