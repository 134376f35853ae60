// Acceptance campaign: one PASS/FAIL line per criterion on stdout, details
// indented underneath. Exit status is nonzero if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "rsdual/checks.hpp"
#include "rsdual/duality.hpp"

using namespace rsd;

namespace {

struct Criterion {
  int id;
  std::string title;
  bool pass = true;

  void require(bool ok, const std::string& what) {
    std::printf("    [%s] %s\n", ok ? "ok" : "!!", what.c_str());
    pass = pass && ok;
  }
  void record(const CheckRecord& r, int n) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s n=%d trials=%d skips=%d max=%.3e threshold=%.1e",
                  r.name.c_str(), n, r.trials, r.skips, r.max_residual, r.threshold);
    require(r.pass, buf);
  }
};

CampaignConfig config_for(int n, double y = 0.3) {
  CampaignConfig cfg;
  cfg.n = n;
  cfg.y = y;
  cfg.seed = 20240917;
  return cfg;
}

CheckRecord run(const std::string& name, const CampaignConfig& cfg, int trials, double threshold) {
  return run_check(find_check(name), cfg, trials, threshold);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

void constraint(Criterion& c) {
  for (int n : {2, 3, 4}) {
    const auto t0 = std::chrono::steady_clock::now();
    c.record(run("duality.constraint", config_for(n), 1000, 1e-10), n);
    const double dt = seconds_since(t0);
    c.require(dt < 10.0, fmt("runtime %.2f s < 10 s", dt));
  }
}

void exchange(Criterion& c) {
  for (int n : {2, 3, 4}) {
    for (const char* name : {"duality.exchange_positions", "duality.exchange_actions"}) {
      const CheckRecord r = run(name, config_for(n), 600, 1e-8);
      c.record(r, n);
      const int survivors = r.trials - r.skips;
      c.require(survivors >= 500, fmt("%g surviving orbits >= 500", survivors));
      c.require(r.skips < 0.2 * r.trials, fmt("skip rate %.3f < 0.2", double(r.skips) / r.trials));
    }
  }
}

void order_relations(Criterion& c) {
  for (int n : {2, 3, 4}) c.record(run("double.group_relations", config_for(n), 1000, 1e-12), n);
  for (int n : {2, 3, 4}) {
    c.record(run("duality.order_s4", config_for(n), 300, 1e-6), n);
    c.record(run("duality.order_st3", config_for(n), 300, 1e-6), n);
  }
}

void lax_consistency(Criterion& c) {
  for (int n : {2, 3, 4, 5}) {
    c.record(run("rs3b.hamiltonian_consistency", config_for(n), 1000, 1e-10), n);
    c.record(run("rs3b.lax_unitarity", config_for(n), 1000, 1e-12), n);
  }
}

void symplectic_maps(Criterion& c) {
  for (int n : {2, 3}) {
    c.record(run("rs3b.symplectic_embedding", config_for(n), 200, 1e-6), n);
    c.record(run("duality.f0_symplectic", config_for(n), 200, 1e-6), n);
  }
}

void moment_identity(Criterion& c) {
  c.record(run("double.moment_map_identity", config_for(3), 1000, 1e-9), 3);
}

void integrability(Criterion& c) {
  for (int n : {2, 3}) {
    CampaignConfig cfg = config_for(n);
    cfg.t_final = 10.0;
    c.record(run("rs3b.action_involution", cfg, 500, 1e-6), n);
    c.record(run("flows.action_conservation", cfg, 20, 1e-7), n);
    c.record(run("flows.action_periodicity", cfg, 20, 1e-6), n);
  }
}

void polytope(Criterion& c) {
  for (int n : {2, 3, 4}) c.record(run("rs3b.polytope_images", config_for(n), 10000, 1e-9), n);

  const Coupling cp = Coupling::make(2, 0.3);
  Rng rng(7);
  std::vector<RVector> positions, actions;
  for (int i = 0; i < 10000; ++i) {
    const ProjectivePoint q = sample_projective_point(cp, rng);
    positions.push_back(position_map(cp, q));
    actions.push_back(action_map(cp, q));
  }
  const double cj = polytope_coverage(cp, positions).value_or(0.0);
  const double ci = polytope_coverage(cp, actions).value_or(0.0);
  // reported only
  std::printf("    [--] n=2 hull coverage: positions %.4f, actions %.4f (target >= 0.95)\n", cj, ci);
}

void involution(Criterion& c) {
  for (int n : {2, 3, 4}) {
    c.record(run("duality.order_r2", config_for(n), 300, 1e-7), n);
    c.record(run("duality.r_exchange", config_for(n), 300, 1e-8), n);
  }
  for (int n : {2, 3}) c.record(run("duality.r_antisymplectic", config_for(n), 200, 1e-6), n);
}

void spectral_precursor(Criterion& c) {
  for (int n : {2, 3, 4, 5}) {
    c.record(run("linalg.alcove_inverse", config_for(n), 1000, 1e-10), n);
    c.record(run("double.exchange_precursor", config_for(n), 1000, 1e-10), n);
  }
}

void hand_oracles(Criterion& c) {
  const Coupling c4 = Coupling::make(2, kPi / 4);
  RVector xi(1);
  xi << kPi / 2;
  const double w1 = w_factor(c4, xi, +1)(0);
  c.require(std::abs(w1 - std::sqrt(std::sqrt(2.0) / 2.0)) <= 1e-12,
            fmt("W_1(pi/2, pi/4) = %.15f", w1));

  const double r = 1.0 / std::sqrt(2.0);
  CMatrix expected(2, 2);
  expected << r, r, -r, r;
  double worst = 0.0;
  for (double y : {0.2, kPi / 4, 1.3}) {
    worst = std::max(worst, max_abs(g_matrix(Coupling::make(2, y), xi).matrix() - expected));
  }
  c.require(worst <= 1e-12, fmt("gauge matrix at pi/2: max deviation %.3e", worst));

  CMatrix a = CMatrix::Zero(2, 2), b = CMatrix::Zero(2, 2);
  a(0, 0) = Complex(0, 1);
  a(1, 1) = Complex(0, -1);
  b(0, 1) = -1.0;
  b(1, 0) = 1.0;
  const DoublePoint x{UnitaryMatrix::certify(a), UnitaryMatrix::certify(b)};
  const double dev = max_abs(moment(x).matrix() + CMatrix::Identity(2, 2));
  c.require(dev <= 1e-12, fmt("moment of (diag(i,-i), rotation) = -1: deviation %.3e", dev));
}

}  // namespace

int main() {
  struct Entry {
    const char* title;
    void (*body)(Criterion&);
  };
  const std::vector<Entry> entries{
      {"moment-map constraint of f0", constraint},
      {"exchange of positions and actions under S", exchange},
      {"modular order relations", order_relations},
      {"Lax consistency and unitarity", lax_consistency},
      {"symplectic embedding and symplectic f0", symplectic_maps},
      {"moment-map identity", moment_identity},
      {"involution, conservation and periodicity of the actions", integrability},
      {"polytope images", polytope},
      {"anti-symplectic involution R", involution},
      {"spectral exchange on the double", spectral_precursor},
      {"n=2 hand oracles", hand_oracles},
  };
  std::printf("worker threads: %d\n", worker_threads());
  int failures = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    Criterion c{static_cast<int>(i + 1), entries[i].title};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      entries[i].body(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("unexpected exception: ") + e.what());
    }
    std::printf("%s criterion %d: %s (%.1f s)\n", c.pass ? "PASS" : "FAIL", c.id, c.title.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
    failures += !c.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(entries.size()) - failures, entries.size());
  return failures == 0 ? 0 : 1;
}
