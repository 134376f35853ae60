#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rsdual/campaign.hpp"

namespace rsd {

struct Report {
  std::string command;
  CampaignConfig config;
  std::vector<CheckRecord> checks;
  std::map<std::string, double> summary;  // command-specific scalars
  std::optional<double> elapsed_s;        // null unless timing was requested

  bool all_pass() const;
};

/// JSON document with stable key order; non-finite residuals become null.
std::string to_json(const Report& r);

}  // namespace rsd
