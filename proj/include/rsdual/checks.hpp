#pragma once

// The named invariant battery. Each check is a randomized trial function plus
// a pass threshold derived from the configured tolerances; check names are
// "<module>.<invariant>".

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rsdual/campaign.hpp"

namespace rsd {

struct CheckSpec {
  std::string name;
  std::string anchor;  // the identity under test
  std::function<double(const Tolerances&)> threshold;
  std::function<TrialOutcome(const CampaignConfig&, Rng&)> trial;
  int cost = 1;  // expensive checks run trials / cost trials (at least one)
  double max_skip_rate = 0.2;
};

const std::vector<CheckSpec>& all_checks();
const CheckSpec& find_check(const std::string& name);

/// Check names run by each command.
std::vector<std::string> verify_battery();
std::vector<std::string> duality_battery();
std::vector<std::string> spectra_battery();
std::vector<std::string> flow_battery();

enum class Execution { Serial, Parallel };

std::vector<TrialOutcome> run_check_trials(const CheckSpec& spec, const CampaignConfig& cfg,
                                           int trials, Execution exec = Execution::Parallel);

/// Runs the check with cfg.trials / cost trials unless `trials` is given;
/// `threshold` overrides the configured one.
CheckRecord run_check(const CheckSpec& spec, const CampaignConfig& cfg,
                      std::optional<int> trials = std::nullopt,
                      std::optional<double> threshold = std::nullopt,
                      Execution exec = Execution::Parallel);

/// Uniformly distributed interior point of the Weyl alcove.
RVector random_alcove(int n, Rng& rng);

/// SL(2,Z) image of a word over {S, T} in application order, or nullopt if the
/// word contains other letters.
std::optional<std::array<long, 4>> word_matrix(const std::string& word);

/// Fraction of the polytope covered by the convex hull of sampled points
/// (n = 2 and n = 3 only).
std::optional<double> polytope_coverage(const Coupling& c, const std::vector<RVector>& samples);

}  // namespace rsd
