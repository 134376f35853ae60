#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <set>

#include "json.hpp"
#include "rsdual/checks.hpp"
#include "rsdual/report.hpp"

using namespace rsd;
using doctest::Approx;

TEST_CASE("serial and parallel runners agree bit for bit") {
  CampaignConfig cfg;
  cfg.seed = 99;
  for (const char* name : {"double.moment_map_identity", "duality.exchange_positions", "rs3b.lax_unitarity"}) {
    const CheckSpec& spec = find_check(name);
    const auto s = run_check_trials(spec, cfg, 24, Execution::Serial);
    const auto p = run_check_trials(spec, cfg, 24, Execution::Parallel);
    REQUIRE(s.size() == p.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(s[i].residual == p[i].residual);
      CHECK(s[i].skipped == p[i].skipped);
      CHECK(s[i].failed == p[i].failed);
    }
  }
  CHECK(worker_threads() >= 1);
}

TEST_CASE("trial streams depend only on seed and index") {
  auto fn = [](Rng& rng) { return TrialOutcome{rng.uniform(), false, false, {}}; };
  const auto a = run_trials_parallel(50, 5, fn);
  const auto b = run_trials_serial(50, 5, fn);
  const auto c = run_trials_serial(50, 6, fn);
  for (int i = 0; i < 50; ++i) CHECK(a[i].residual == b[i].residual);
  CHECK(a[0].residual != c[0].residual);
}

TEST_CASE("runner classifies exceptions") {
  auto fn = [](Rng& rng) -> TrialOutcome {
    const auto k = rng.bits() % 3;
    if (k == 0) throw Error(ErrorKind::PatchBoundary, "edge");
    if (k == 1) throw Error(ErrorKind::DomainError, "bad");
    return {0.5, false, false, {}};
  };
  int skipped = 0, failed = 0;
  for (const auto& o : run_trials_serial(60, 3, fn)) {
    skipped += o.skipped;
    failed += o.failed;
    if (o.failed) CHECK(std::isinf(o.residual));
  }
  CHECK(skipped > 0);
  CHECK(failed > 0);
}

TEST_CASE("summaries") {
  std::vector<TrialOutcome> ok(10, TrialOutcome{1e-9, false, false, {}});
  CheckRecord r = summarize("x", "anchor", 1e-8, ok);
  CHECK(r.pass);
  CHECK(r.trials == 10);
  CHECK(r.skips == 0);
  CHECK(r.max_residual == 1e-9);

  CHECK_FALSE(summarize("x", "a", 1e-10, ok).pass);

  auto skipped = ok;
  for (int i = 0; i < 3; ++i) skipped[i].skipped = true;
  CHECK_FALSE(summarize("x", "a", 1e-8, skipped).pass);
  CHECK(summarize("x", "a", 1e-8, skipped, 0.5).pass);

  auto failed = ok;
  failed[4].failed = true;
  failed[4].residual = std::numeric_limits<double>::infinity();
  CHECK_FALSE(summarize("x", "a", 1e-8, failed).pass);

  auto nan = ok;
  nan[2].residual = std::nan("");
  CHECK_FALSE(summarize("x", "a", 1e-8, nan).pass);

  std::vector<TrialOutcome> all_skipped(4, TrialOutcome{0.0, true, false, {}});
  CHECK_FALSE(summarize("x", "a", 1.0, all_skipped, 1.0).pass);
  CHECK_FALSE(summarize("x", "a", 1.0, {}).pass);
}

TEST_CASE("tolerance lookup") {
  Tolerances t;
  CHECK(t.names().size() == 9);
  for (const auto& name : Tolerances::names()) CHECK(t.find(name) != nullptr);
  CHECK(t.find("nope") == nullptr);
  *t.find("roundtrip") = 1e-5;
  CHECK(t.roundtrip == 1e-5);
  CHECK(*t.find("jacobian_step") == 1e-6);
  CHECK(t.ode == 1e-9);
}

TEST_CASE("check registry") {
  std::set<std::string> seen;
  for (const CheckSpec& spec : all_checks()) {
    CHECK(seen.insert(spec.name).second);
    CHECK(spec.name.find('.') != std::string::npos);
    CHECK_FALSE(spec.anchor.empty());
    CHECK(spec.cost >= 1);
    CHECK(spec.threshold(Tolerances{}) >= 0.0);
  }
  for (const auto& battery : {verify_battery(), duality_battery(), spectra_battery(), flow_battery()})
    for (const auto& name : battery) CHECK_NOTHROW(find_check(name));
  CHECK_THROWS_AS(find_check("linalg.nothing"), Error);
}

TEST_CASE("run_check honours overrides") {
  CampaignConfig cfg;
  cfg.n = 2;
  cfg.y = 0.5;
  const CheckSpec& spec = find_check("rs3b.lax_unitarity");
  const CheckRecord r = run_check(spec, cfg, 17, 0.25);
  CHECK(r.trials == 17);
  CHECK(r.threshold == 0.25);
  CHECK(r.pass);
  cfg.trials = 30;
  CHECK(run_check(spec, cfg).trials == 30);
  CHECK(run_check(find_check("flows.energy_conservation"), cfg).trials == 3);
}

TEST_CASE("SL(2,Z) words") {
  using M = std::array<long, 4>;
  CHECK(word_matrix("") == M{1, 0, 0, 1});
  CHECK(word_matrix("S") == M{0, -1, 1, 0});
  CHECK(word_matrix("T") == M{1, 1, 0, 1});
  CHECK(word_matrix("SS") == M{-1, 0, 0, -1});
  CHECK(word_matrix("SSSS") == M{1, 0, 0, 1});
  CHECK(word_matrix("STSTST") == M{-1, 0, 0, -1});
  CHECK(word_matrix("TSTSTS") == M{-1, 0, 0, -1});
  // T then S: S·T
  CHECK(word_matrix("TS") == M{0, -1, 1, 1});
  CHECK_FALSE(word_matrix("SR").has_value());
}

TEST_CASE("random alcove points") {
  Rng rng(31);
  for (int n : {2, 3, 5}) {
    RVector mean = RVector::Zero(n - 1);
    const int count = 20000;
    for (int i = 0; i < count; ++i) {
      const RVector xi = random_alcove(n, rng);
      CHECK(xi.minCoeff() > 0.0);
      CHECK(xi.sum() < kPi);
      mean += xi;
    }
    mean /= count;
    for (int k = 0; k < n - 1; ++k) CHECK(mean(k) == Approx(kPi / n).epsilon(0.02));
  }
}

TEST_CASE("polytope coverage") {
  const Coupling c2 = Coupling::make(2, 0.4);
  RVector a(1), b(1), mid(1);
  a << 0.4;
  b << kPi - 0.4;
  mid << 1.0;
  CHECK(*polytope_coverage(c2, {a, b}) == Approx(1.0));
  CHECK(*polytope_coverage(c2, {a, mid}) == Approx(0.6 / (kPi - 0.8)));

  const Coupling c3 = Coupling::make(3, 0.3);
  RVector v1(2), v2(2), v3(2), inner(2);
  v1 << 0.3, 0.3;
  v2 << kPi - 0.6, 0.3;
  v3 << 0.3, kPi - 0.6;
  inner << 0.5, 0.5;
  CHECK(*polytope_coverage(c3, {v1, v2, v3, inner}) == Approx(1.0));
  CHECK(*polytope_coverage(c3, {v1, v2}) == Approx(0.0));

  CHECK_FALSE(polytope_coverage(Coupling::make(4, 0.1), {}).has_value());
}

TEST_CASE("JSON report") {
  Report r;
  r.command = "verify";
  r.config.trials = 5;
  r.checks.push_back({"a.b", "x = y", 5, 1, 1e-13, 1e-12, true});
  r.checks.push_back({"a.c", "z", 5, 0, std::numeric_limits<double>::infinity(), 1e-12, false});
  const std::string text = to_json(r);
  CHECK(text == to_json(r));
  CHECK(text.back() == '\n');
  CHECK_FALSE(r.all_pass());

  const auto j = nlohmann::ordered_json::parse(text);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"command", "config", "checks", "pass", "elapsed_s"});
  CHECK(j["checks"][1]["max_residual"].is_null());
  CHECK(j["checks"][0]["max_residual"].get<double>() == 1e-13);
  CHECK(j["elapsed_s"].is_null());
  CHECK(j["pass"] == false);
  CHECK(j["config"]["tolerances"]["roundtrip"].get<double>() == 1e-8);

  r.checks.pop_back();
  r.summary["steps"] = 12;
  r.elapsed_s = 0.5;
  const auto k = nlohmann::ordered_json::parse(to_json(r));
  CHECK(k["pass"] == true);
  CHECK(k["summary"]["steps"].get<double>() == 12);
  CHECK(k["elapsed_s"].get<double>() == 0.5);
}
