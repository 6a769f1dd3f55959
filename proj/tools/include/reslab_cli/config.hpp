#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "reslab/evolution.hpp"

namespace reslab::cli {

struct ConfigIssue {
  std::string pointer;  // JSON pointer, "" for the document root
  std::string message;
};

struct ValidatedConfig {
  SimConfig config;
  std::vector<ConfigIssue> errors;
  std::vector<ConfigIssue> warnings;  // non-fatal: (M, N) outside the regime the estimates cover
  bool ok() const { return errors.empty(); }
};

/// Checks types and every SimConfig invariant; collects all problems instead
/// of stopping at the first. Missing keys take the SimConfig defaults.
ValidatedConfig config_validate(const nlohmann::json& doc);

nlohmann::json config_to_json(const SimConfig& config);

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::vector<ConfigIssue> issues = {})
      : std::runtime_error(what), issues_(std::move(issues)) {}
  const std::vector<ConfigIssue>& issues() const { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

/// Reads and validates a config file. Throws ConfigError for a missing or
/// unreadable file, bad JSON, or validation errors.
ValidatedConfig load_config(const std::string& path);

}  // namespace reslab::cli
