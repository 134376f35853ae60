#pragma once

// Randomized verification campaigns. Trials are independent and seeded by
// (campaign seed, check name, trial index), so the OpenMP runner and the
// serial reference runner produce identical outcome vectors.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rsdual/rng.hpp"
#include "rsdual/rs3b.hpp"

namespace rsd {

struct Tolerances {
  double exact = 1e-12;
  double algebraic = kTolAlgebraic;
  double solve = 1e-8;
  double fd = 1e-6;
  double constraint = 1e-10;
  double roundtrip = 1e-8;
  double patch = kTolPatch;
  double ode = 1e-9;
  double jacobian_step = 1e-6;

  static const std::vector<std::string>& names();
  /// Slot for a named tolerance, or nullptr.
  double* find(const std::string& name);
  const double* find(const std::string& name) const;
};

struct CampaignConfig {
  int n = 3;
  double y = 0.3;
  double lambda = 1.0;
  std::uint64_t seed = 1;
  int trials = 200;
  Tolerances tol;
  // command-specific
  std::string generator = "H";
  double t_final = 10.0;
  std::string word = "S";

  Coupling coupling() const { return Coupling::make(n, y, lambda); }
};

struct TrialOutcome {
  double residual = 0.0;
  bool skipped = false;
  bool failed = false;  // unexpected exception
  std::string note;
};

using TrialFn = std::function<TrialOutcome(Rng&)>;

/// Runs `trials` trials; outcome i only depends on (seed, i).
std::vector<TrialOutcome> run_trials_serial(int trials, std::uint64_t seed, const TrialFn& fn);
std::vector<TrialOutcome> run_trials_parallel(int trials, std::uint64_t seed, const TrialFn& fn);

/// Number of worker threads the parallel runner will use.
int worker_threads();

struct CheckRecord {
  std::string name;
  std::string anchor;
  int trials = 0;
  int skips = 0;
  double max_residual = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// Pass iff no trial failed, at least one trial ran, every residual is
/// ≤ threshold and the skip fraction is ≤ max_skip_rate.
CheckRecord summarize(const std::string& name, const std::string& anchor, double threshold,
                      const std::vector<TrialOutcome>& outcomes, double max_skip_rate = 0.2);

std::uint64_t name_hash(const std::string& s);

}  // namespace rsd
