#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rsdual/flows.hpp"

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

LocalPoint deep_point(const Coupling& c, Rng& rng) { return sample_local_point(c, rng, 0.1); }

}  // namespace

TEST_CASE("canonical brackets") {
  Rng rng(21);
  for (double lambda : {1.0, 2.5}) {
    const Coupling c = Coupling::make(3, 0.4, lambda);
    const LocalPoint p = deep_point(c, rng);
    for (int j = 1; j <= 2; ++j)
      for (int k = 1; k <= 2; ++k) {
        CHECK(canonical_bracket(angle_generator(j), position_generator(k), c, p) ==
              Approx(j == k ? 1.0 / lambda : 0.0));
        CHECK(canonical_bracket(position_generator(j), position_generator(k), c, p) == 0.0);
        CHECK(canonical_bracket(angle_generator(j), angle_generator(k), c, p) == 0.0);
      }
  }
}

TEST_CASE("a position generates a rotation of its angle") {
  const Coupling c = Coupling::make(3, 0.3);
  Rng rng(22);
  const LocalPoint p = deep_point(c, rng);
  const Trajectory tr = integrate_flow(c, position_generator(1), p, 1.7);
  REQUIRE(tr.status == FlowStatus::Completed);
  const LocalPoint& e = tr.final_point();
  CHECK(e.theta(0) == Approx(p.theta(0) + 1.7).epsilon(1e-10));
  CHECK(e.theta(1) == Approx(p.theta(1)).epsilon(1e-12));
  CHECK((e.xi - p.xi).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("actions Poisson commute with each other and with H") {
  Rng rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 3;
    const Coupling c = Coupling::make(n, rng.uniform(0.1, 0.6) * kPi / n);
    const LocalPoint p = deep_point(c, rng);
    for (int j = 1; j < n; ++j) {
      CHECK(std::abs(canonical_bracket(hamiltonian_generator(), action_generator(j), c, p)) < 1e-8);
      for (int k = 1; k < n; ++k)
        CHECK(std::abs(canonical_bracket(action_generator(j), action_generator(k), c, p)) < 1e-6);
    }
  }
}

TEST_CASE("analytic gradients agree with finite differences") {
  Rng rng(24);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 3;
    const Coupling c = Coupling::make(n, rng.uniform(0.1, 0.6) * kPi / n);
    const LocalPoint p = deep_point(c, rng);
    std::vector<Generator> gens{hamiltonian_generator(), position_generator(1), angle_generator(n - 1)};
    for (int k = 1; k < n; ++k) gens.push_back(action_generator(k));
    for (const Generator& g : gens) {
      const RVector a = g.gradient(c, p);
      const RVector f = fd_gradient(g, c, p);
      CHECK((a - f).cwiseAbs().maxCoeff() < 1e-7);
    }
    const RMatrix rows = action_gradients(c, p);
    for (int k = 1; k < n; ++k)
      CHECK((rows.row(k - 1).transpose() - action_generator(k).gradient(c, p)).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("vector field scales with 1/lambda") {
  Rng rng(25);
  const Coupling c1 = Coupling::make(3, 0.4, 1.0);
  const Coupling c3 = Coupling::make(3, 0.4, 3.0);
  const LocalPoint p = deep_point(c1, rng);
  const RVector v1 = hamiltonian_vector_field(hamiltonian_generator(), c1, p);
  const RVector v3 = hamiltonian_vector_field(hamiltonian_generator(), c3, p);
  CHECK((v1 - 3.0 * v3).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("action-angle verification") {
  Rng rng(26);
  for (int n : {2, 3}) {
    const Coupling c = Coupling::make(n, 0.25);
    const LocalPoint p = sample_local_point(c, rng, 0.2);
    const ActionAngleReport r = verify_action_angle(c, p, 10.0);
    CHECK(r.action_bracket_max < 1e-6);
    CHECK(r.position_bracket_max == 0.0);
    if (r.boundary_skips == 0) {
      CHECK(r.conservation_max < 1e-7);
      CHECK(r.energy_drift < 1e-7);
      REQUIRE(r.periodicity.size() == static_cast<std::size_t>(n - 1));
      for (double d : r.periodicity) CHECK(d < 1e-6);
    }
  }
}

TEST_CASE("action flows are periodic with period 2 pi lambda") {
  const Coupling c = Coupling::make(2, 0.3, 1.5);
  Rng rng(27);
  const LocalPoint p = sample_local_point(c, rng, 0.3);
  FlowOptions opt;
  opt.tol_ode = 1e-11;
  const Trajectory full = integrate_flow(c, action_generator(1), p, 2 * kPi * c.lambda, opt);
  if (full.status == FlowStatus::Completed) {
    CHECK(local_distance(c, full.final_point(), p) < 1e-6);
    const Trajectory half = integrate_flow(c, action_generator(1), p, kPi * c.lambda, opt);
    if (half.status == FlowStatus::Completed) CHECK(local_distance(c, half.final_point(), p) > 1e-3);
  }
}

TEST_CASE("flows are reversible and record monotone time") {
  Rng rng(28);
  const Coupling c = Coupling::make(3, 0.35);
  const LocalPoint p = sample_local_point(c, rng, 0.2);
  for (double tf : {3.0, -3.0}) {
    const Trajectory fwd = integrate_flow(c, hamiltonian_generator(), p, tf);
    if (fwd.status != FlowStatus::Completed) continue;
    for (std::size_t i = 1; i < fwd.samples.size(); ++i) {
      if (tf > 0) CHECK(fwd.samples[i].t > fwd.samples[i - 1].t);
      else CHECK(fwd.samples[i].t < fwd.samples[i - 1].t);
    }
    CHECK(fwd.samples.back().t == Approx(tf));
    const Trajectory back = integrate_flow(c, hamiltonian_generator(), fwd.final_point(), -tf);
    if (back.status == FlowStatus::Completed) CHECK(local_distance(c, back.final_point(), p) < 1e-8);
  }
}

TEST_CASE("time-one map preserves the symplectic form") {
  Rng rng(29);
  const Coupling c = Coupling::make(3, 0.3);
  const LocalPoint p = sample_local_point(c, rng, 0.2);
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(i / 100.0);
  const int m = 2;
  const double h = 1e-5;
  auto flat = [](const LocalPoint& q) {
    RVector v(4);
    v << q.xi, q.theta;
    return v;
  };
  RMatrix jac(4, 4);
  for (int a = 0; a < 4; ++a) {
    LocalPoint plus = p, minus = p;
    if (a < m) {
      plus.xi(a) += h;
      minus.xi(a) -= h;
    } else {
      plus.theta(a - m) += h;
      minus.theta(a - m) -= h;
    }
    jac.col(a) = (flat(integrate_on_grid(c, hamiltonian_generator(), plus, grid)) -
                  flat(integrate_on_grid(c, hamiltonian_generator(), minus, grid))) / (2 * h);
  }
  RMatrix omega = RMatrix::Zero(4, 4);
  omega.block(0, 2, 2, 2) = -RMatrix::Identity(2, 2);
  omega.block(2, 0, 2, 2) = RMatrix::Identity(2, 2);
  CHECK((jac.transpose() * omega * jac - omega).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("boundary approach stops the flow") {
  const Coupling c = Coupling::make(2, 0.3);
  LocalPoint p;
  p.xi = RVector::Constant(1, 0.3 + 2e-4);
  p.theta = RVector::Zero(1);
  // the θ-flow moves ξ straight into the wall ξ = y
  const Trajectory tr = integrate_flow(c, angle_generator(1), p, 1.0);
  CHECK(tr.status == FlowStatus::BoundaryApproach);
  CHECK(!tr.samples.empty());
}

TEST_CASE("generator names") {
  CHECK(generator_by_name("H").name == hamiltonian_generator().name);
  CHECK(generator_by_name("xi2").name == position_generator(2).name);
  CHECK(generator_by_name("theta_1").name == angle_generator(1).name);
  CHECK(generator_by_name("I3").name == action_generator(3).name);
  for (const char* bad : {"", "Q", "xi", "xi_", "I0", "theta-1", "Hx"})
    CHECK(throws_kind(ErrorKind::InvalidArgument, [&] { generator_by_name(bad); }));
}

TEST_CASE("trajectory CSV") {
  const Coupling c = Coupling::make(3, 0.3);
  Rng rng(30);
  const Trajectory tr = integrate_flow(c, hamiltonian_generator(), sample_local_point(c, rng, 0.2), 0.5);
  std::ostringstream os;
  write_trajectory_csv(os, tr);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "t,xi_1,xi_2,theta_1,theta_2");
  std::size_t rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 4);
  }
  CHECK(rows == tr.samples.size());
}
