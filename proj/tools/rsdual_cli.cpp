// rsdual: randomized verification campaigns, flow runs and duality orbits.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "rsdual/checks.hpp"
#include "rsdual/duality.hpp"
#include "rsdual/flows.hpp"
#include "rsdual/report.hpp"

namespace fs = std::filesystem;
using namespace rsd;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Overrides {
  std::optional<int> n;
  std::optional<double> y;
  std::optional<double> lambda;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::map<std::string, double> tol;
  std::optional<std::string> generator;
  std::optional<double> t_final;
  std::optional<std::string> word;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T v{};
  if (!(in >> v) || !(in >> std::ws).eof())
    throw ConfigError("bad value '" + text + "' for '" + key + "'");
  return v;
}

void apply_pair(Overrides& o, std::string key, const std::string& value) {
  std::replace(key.begin(), key.end(), '_', '-');
  if (key == "n") o.n = parse_value<int>(key, value);
  else if (key == "y") o.y = parse_value<double>(key, value);
  else if (key == "lambda") o.lambda = parse_value<double>(key, value);
  else if (key == "seed") o.seed = parse_value<std::uint64_t>(key, value);
  else if (key == "trials") o.trials = parse_value<int>(key, value);
  else if (key == "generator") o.generator = value;
  else if (key == "t") o.t_final = parse_value<double>(key, value);
  else if (key == "word") o.word = value;
  else if (key.rfind("tol-", 0) == 0) o.tol[key.substr(4)] = parse_value<double>(key, value);
  else throw ConfigError("unknown config key '" + key + "'");
}

Overrides read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  Overrides o;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    apply_pair(o, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return o;
}

template <typename T>
void take(std::optional<T>& dst, const std::optional<T>& src) {
  if (src) dst = src;
}

void merge(Overrides& base, const Overrides& top) {
  take(base.n, top.n);
  take(base.y, top.y);
  take(base.lambda, top.lambda);
  take(base.seed, top.seed);
  take(base.trials, top.trials);
  take(base.generator, top.generator);
  take(base.t_final, top.t_final);
  take(base.word, top.word);
  for (const auto& [k, v] : top.tol) base.tol[k] = v;
}

CampaignConfig build_config(const Overrides& o) {
  CampaignConfig cfg;
  if (o.n) cfg.n = *o.n;
  if (o.y) cfg.y = *o.y;
  if (o.lambda) cfg.lambda = *o.lambda;
  if (o.seed) cfg.seed = *o.seed;
  if (o.trials) cfg.trials = *o.trials;
  if (o.generator) cfg.generator = *o.generator;
  if (o.t_final) cfg.t_final = *o.t_final;
  if (o.word) cfg.word = *o.word;
  for (const auto& [name, v] : o.tol) {
    double* slot = cfg.tol.find(name);
    if (!slot) throw ConfigError("unknown tolerance '" + name + "'");
    if (!(v > 0.0)) throw ConfigError("tolerance '" + name + "' must be positive");
    *slot = v;
  }

  try {
    (void)cfg.coupling();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  if (cfg.trials < 1) throw ConfigError("trials must be at least 1");
  if (!std::isfinite(cfg.t_final) || cfg.t_final == 0.0)
    throw ConfigError("t must be finite and nonzero");
  if (cfg.word.empty() || cfg.word.find_first_not_of("STR") != std::string::npos)
    throw ConfigError("word must be a nonempty string over S, T, R");
  try {
    const Generator g = generator_by_name(cfg.generator);
    const auto digits = cfg.generator.find_first_of("0123456789");
    if (digits != std::string::npos && std::stoi(cfg.generator.substr(digits)) > cfg.n - 1)
      throw ConfigError("generator index out of range for n = " + std::to_string(cfg.n));
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

std::vector<CheckRecord> run_battery(const std::vector<std::string>& names,
                                     const CampaignConfig& cfg, Execution exec) {
  std::vector<CheckRecord> out;
  for (const auto& name : names) {
    CheckRecord rec = run_check(find_check(name), cfg, std::nullopt, std::nullopt, exec);
    std::cerr << (rec.pass ? "PASS " : "FAIL ") << rec.name << "  max_residual=" << rec.max_residual
              << "  threshold=" << rec.threshold << "  skips=" << rec.skips << "/" << rec.trials
              << "\n";
    out.push_back(std::move(rec));
  }
  return out;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

void write_vectors_csv(std::ostream& os, const std::vector<std::pair<std::string, int>>& columns,
                       const std::vector<std::vector<RVector>>& rows) {
  bool first = true;
  for (const auto& [prefix, count] : columns)
    for (int k = 1; k <= count; ++k) {
      os << (first ? "" : ",") << prefix << "_" << k;
      first = false;
    }
  os << '\n' << std::setprecision(17);
  for (const auto& row : rows) {
    first = true;
    for (const auto& v : row)
      for (Eigen::Index k = 0; k < v.size(); ++k) {
        os << (first ? "" : ",") << v(k);
        first = false;
      }
    os << '\n';
  }
}

ProjectivePoint artifact_point(const CampaignConfig& cfg, const std::string& what, int index) {
  Rng rng = Rng::for_trial(cfg.seed ^ name_hash(what), static_cast<std::uint64_t>(index));
  return sample_projective_point(cfg.coupling(), rng);
}

void cmd_flow(const CampaignConfig& cfg, Report& rep, std::string& csv) {
  const Coupling c = cfg.coupling();
  Rng rng = Rng::for_trial(cfg.seed ^ name_hash("flow.initial"), 0);
  const LocalPoint p0 = sample_local_point(c, rng, 1e-2);
  FlowOptions opt;
  opt.tol_ode = cfg.tol.ode;
  const Generator g = generator_by_name(cfg.generator);
  const Trajectory tr = integrate_flow(c, g, p0, cfg.t_final, opt);
  std::ostringstream os;
  write_trajectory_csv(os, tr);
  csv = os.str();

  const double h0 = hamiltonian(c, p0);
  const RVector i0 = alcove_coordinates(lax_local(c, p0)).xi;
  const double g0 = g.value(c, p0);
  double drift = 0.0, cons = 0.0, gen = 0.0;
  for (const auto& s : tr.samples) {
    drift = std::max(drift, std::abs(hamiltonian(c, s.point) - h0));
    cons = std::max(cons, (alcove_coordinates(lax_local(c, s.point)).xi - i0).cwiseAbs().maxCoeff());
    gen = std::max(gen, std::abs(g.value(c, s.point) - g0));
  }
  rep.summary["steps"] = static_cast<double>(tr.steps);
  rep.summary["rejected_steps"] = static_cast<double>(tr.rejected);
  rep.summary["t_reached"] = tr.samples.back().t;
  rep.summary["boundary_approach"] = tr.status == FlowStatus::BoundaryApproach ? 1.0 : 0.0;
  rep.summary["generator_drift"] = gen;
  rep.summary["energy_drift"] = drift;
  rep.summary["action_drift"] = cons;
}

void cmd_spectra(const CampaignConfig& cfg, Report& rep, std::string& csv) {
  const Coupling c = cfg.coupling();
  std::vector<std::vector<RVector>> rows(static_cast<std::size_t>(cfg.trials));
#pragma omp parallel for schedule(static)
  for (int i = 0; i < cfg.trials; ++i) {
    const ProjectivePoint q = artifact_point(cfg, "spectra.sample", i);
    rows[static_cast<std::size_t>(i)] = {position_map(c, q), action_map(c, q)};
  }
  std::ostringstream os;
  write_vectors_csv(os, {{"J", c.n - 1}, {"I", c.n - 1}}, rows);
  csv = os.str();

  std::vector<RVector> js, is;
  for (const auto& r : rows) {
    js.push_back(r[0]);
    is.push_back(r[1]);
  }
  if (const auto cov = polytope_coverage(c, js)) rep.summary["coverage_J"] = *cov;
  if (const auto cov = polytope_coverage(c, is)) rep.summary["coverage_I"] = *cov;
}

void cmd_mcg(const CampaignConfig& cfg, Report& rep, std::string& csv) {
  const Coupling c = cfg.coupling();
  const int count = std::min(cfg.trials, 1000);
  std::vector<std::vector<RVector>> rows(static_cast<std::size_t>(count));
  int skipped = 0;
  for (int i = 0; i < count; ++i) {
    const ProjectivePoint q = artifact_point(cfg, "mcg.orbit", i);
    try {
      const ProjectivePoint w = apply_word(c, cfg.word, q);
      rows[static_cast<std::size_t>(i)] = {position_map(c, q), action_map(c, q),
                                           position_map(c, w), action_map(c, w)};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::PatchBoundary) throw;
      ++skipped;
    }
  }
  std::erase_if(rows, [](const auto& r) { return r.empty(); });
  std::ostringstream os;
  const int m = c.n - 1;
  write_vectors_csv(os, {{"J", m}, {"I", m}, {"J_image", m}, {"I_image", m}}, rows);
  csv = os.str();
  rep.summary["orbit_skips"] = skipped;
  if (const auto mat = word_matrix(cfg.word)) {
    rep.summary["sl2z_a"] = static_cast<double>((*mat)[0]);
    rep.summary["sl2z_b"] = static_cast<double>((*mat)[1]);
    rep.summary["sl2z_c"] = static_cast<double>((*mat)[2]);
    rep.summary["sl2z_d"] = static_cast<double>((*mat)[3]);
  }
}

std::vector<std::string> mcg_battery(const CampaignConfig& cfg) {
  std::vector<std::string> names{"mcg.word_symplectic", "mcg.word_preserves_polytope"};
  if (const auto m = word_matrix(cfg.word)) {
    const bool central = (*m)[1] == 0 && (*m)[2] == 0 && (*m)[0] == (*m)[3];
    if (central) names.push_back("mcg.word_relation");
  }
  return names;
}

int run(const std::string& command, const CampaignConfig& cfg, const std::string& out_dir,
        bool timing, bool serial) {
  const auto start = std::chrono::steady_clock::now();
  const Execution exec = serial ? Execution::Serial : Execution::Parallel;
  Report rep;
  rep.command = command;
  rep.config = cfg;
  std::string csv, csv_name;

  if (command == "verify") {
    rep.checks = run_battery(verify_battery(), cfg, exec);
  } else if (command == "duality") {
    rep.checks = run_battery(duality_battery(), cfg, exec);
  } else if (command == "flow") {
    cmd_flow(cfg, rep, csv);
    csv_name = "trajectory.csv";
    rep.checks = run_battery(flow_battery(), cfg, exec);
  } else if (command == "spectra") {
    cmd_spectra(cfg, rep, csv);
    csv_name = "spectra.csv";
    rep.checks = run_battery(spectra_battery(), cfg, exec);
  } else if (command == "mcg") {
    cmd_mcg(cfg, rep, csv);
    csv_name = "orbit.csv";
    rep.checks = run_battery(mcg_battery(cfg), cfg, exec);
  }

  if (timing)
    rep.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::string json = to_json(rep);
  std::cout << json;
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / (command + ".json"), json);
    if (!csv_name.empty()) write_file(fs::path(out_dir) / csv_name, csv);
  }
  return rep.all_pass() ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized verification workbench for the compactified RS III_b system"};
  app.require_subcommand(1);

  Overrides flags;
  std::string config_file;
  std::string out_dir;
  bool timing = false;
  bool serial = false;
  std::map<std::string, double> tol_flags;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--n", flags.n, "Number of particles (n >= 2)");
    sub->add_option("--y", flags.y, "Coupling, 0 < |y| < pi/n");
    sub->add_option("--lambda", flags.lambda, "Symplectic scale (> 0)");
    sub->add_option("--seed", flags.seed, "Campaign seed");
    sub->add_option("--trials", flags.trials, "Trials per check");
    sub->add_option("--config", config_file, "Flat key=value config file; flags override it");
    sub->add_option("--out", out_dir, "Directory for the JSON report and CSV artifacts");
    sub->add_flag("--timing", timing, "Record wall time in the report");
    sub->add_flag("--serial", serial, "Use the serial reference runner");
    for (const auto& name : Tolerances::names()) {
      std::string flag = "--tol-" + name;
      std::replace(flag.begin(), flag.end(), '_', '-');
      sub->add_option_function<double>(
          flag, [&tol_flags, name](const double& v) { tol_flags[name] = v; },
          "Override the '" + name + "' tolerance");
    }
  };

  auto* verify = app.add_subcommand("verify", "Run the full invariant battery");
  auto* duality = app.add_subcommand("duality", "Exchange identities and order relations");
  auto* flow = app.add_subcommand("flow", "Integrate a Hamiltonian flow and write its trajectory");
  auto* spectra = app.add_subcommand("spectra", "Sample position and action maps");
  auto* mcg = app.add_subcommand("mcg", "Apply a word in S, T, R to random points");
  for (auto* sub : {verify, duality, flow, spectra, mcg}) add_common(sub);
  flow->add_option("--generator", flags.generator, "H, xi<k>, theta<k> or I<k>");
  flow->add_option("--t", flags.t_final, "Final time (either sign)");
  mcg->add_option("--word", flags.word, "Letters applied left to right");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  CampaignConfig cfg;
  try {
    Overrides merged = config_file.empty() ? Overrides{} : read_config_file(config_file);
    flags.tol = tol_flags;
    merge(merged, flags);
    cfg = build_config(merged);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    return run(command, cfg, out_dir, timing, serial);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
