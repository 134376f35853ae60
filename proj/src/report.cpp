#include "rsdual/report.hpp"

#include <cmath>

#include "json.hpp"

namespace rsd {

namespace {

using Json = nlohmann::ordered_json;

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string to_json(const Report& r) {
  Json tol = Json::object();
  for (const auto& name : Tolerances::names()) tol[name] = *r.config.tol.find(name);

  Json cfg = Json::object();
  cfg["n"] = r.config.n;
  cfg["y"] = r.config.y;
  cfg["lambda"] = r.config.lambda;
  cfg["seed"] = r.config.seed;
  cfg["trials"] = r.config.trials;
  if (r.command == "flow") {
    cfg["generator"] = r.config.generator;
    cfg["t"] = r.config.t_final;
  }
  if (r.command == "mcg") cfg["word"] = r.config.word;
  cfg["tolerances"] = tol;

  Json checks = Json::array();
  for (const auto& c : r.checks) {
    Json rec = Json::object();
    rec["name"] = c.name;
    rec["anchor"] = c.anchor;
    rec["trials"] = c.trials;
    rec["skips"] = c.skips;
    rec["max_residual"] = number(c.max_residual);
    rec["threshold"] = c.threshold;
    rec["pass"] = c.pass;
    checks.push_back(rec);
  }

  Json doc = Json::object();
  doc["command"] = r.command;
  doc["config"] = cfg;
  doc["checks"] = checks;
  if (!r.summary.empty()) {
    Json s = Json::object();
    for (const auto& [k, v] : r.summary) s[k] = number(v);
    doc["summary"] = s;
  }
  doc["pass"] = r.all_pass();
  doc["elapsed_s"] = r.elapsed_s ? Json(*r.elapsed_s) : Json(nullptr);
  return doc.dump(2) + "\n";
}

}  // namespace rsd
