#include "rsdual/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rsdual/errors.hpp"

namespace rsd {

namespace {

TrialOutcome guarded(const TrialFn& fn, std::uint64_t seed, std::uint64_t index) {
  Rng rng = Rng::for_trial(seed, index);
  try {
    return fn(rng);
  } catch (const Error& e) {
    TrialOutcome out;
    if (e.kind() == ErrorKind::PatchBoundary || e.kind() == ErrorKind::BoundaryApproach) {
      out.skipped = true;
    } else {
      out.failed = true;
      out.residual = std::numeric_limits<double>::infinity();
    }
    out.note = e.what();
    return out;
  } catch (const std::exception& e) {
    TrialOutcome out;
    out.failed = true;
    out.residual = std::numeric_limits<double>::infinity();
    out.note = e.what();
    return out;
  }
}

}  // namespace

std::vector<TrialOutcome> run_trials_serial(int trials, std::uint64_t seed, const TrialFn& fn) {
  std::vector<TrialOutcome> out(static_cast<std::size_t>(std::max(trials, 0)));
  for (int i = 0; i < trials; ++i)
    out[static_cast<std::size_t>(i)] = guarded(fn, seed, static_cast<std::uint64_t>(i));
  return out;
}

std::vector<TrialOutcome> run_trials_parallel(int trials, std::uint64_t seed, const TrialFn& fn) {
  std::vector<TrialOutcome> out(static_cast<std::size_t>(std::max(trials, 0)));
#pragma omp parallel for schedule(dynamic, 4)
  for (int i = 0; i < trials; ++i)
    out[static_cast<std::size_t>(i)] = guarded(fn, seed, static_cast<std::uint64_t>(i));
  return out;
}

int worker_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

CheckRecord summarize(const std::string& name, const std::string& anchor, double threshold,
                      const std::vector<TrialOutcome>& outcomes, double max_skip_rate) {
  CheckRecord rec{name, anchor, static_cast<int>(outcomes.size()), 0, 0.0, threshold, false};
  bool failed = false;
  for (const auto& o : outcomes) {
    if (o.skipped) {
      ++rec.skips;
      continue;
    }
    failed = failed || o.failed || std::isnan(o.residual);
    rec.max_residual = std::max(rec.max_residual, o.residual);
  }
  const int ran = rec.trials - rec.skips;
  const double skip_rate = rec.trials > 0 ? static_cast<double>(rec.skips) / rec.trials : 1.0;
  rec.pass = !failed && ran > 0 && rec.max_residual <= threshold && skip_rate <= max_skip_rate;
  return rec;
}

const std::vector<std::string>& Tolerances::names() {
  static const std::vector<std::string> kNames = {"exact", "algebraic", "solve", "fd", "constraint",
                                                  "roundtrip", "patch", "ode", "jacobian_step"};
  return kNames;
}

double* Tolerances::find(const std::string& name) {
  return const_cast<double*>(static_cast<const Tolerances*>(this)->find(name));
}

const double* Tolerances::find(const std::string& name) const {
  if (name == "exact") return &exact;
  if (name == "algebraic") return &algebraic;
  if (name == "solve") return &solve;
  if (name == "fd") return &fd;
  if (name == "constraint") return &constraint;
  if (name == "roundtrip") return &roundtrip;
  if (name == "patch") return &patch;
  if (name == "ode") return &ode;
  if (name == "jacobian_step") return &jacobian_step;
  return nullptr;
}

std::uint64_t name_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (const unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace rsd
