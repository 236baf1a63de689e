#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nodsis/integrator.hpp"
#include "nodsis/model.hpp"
#include "nodsis/network.hpp"

namespace nodsis::cli {

enum class Command { simulate, equilibria, bifurcate, basin, network };

std::string_view to_string(Command c);
Command command_from_string(std::string_view name);

/// Sign imposed on the random initial opinions of a network run.
enum class SignChoice { neg, pos, random };

std::string_view to_string(SignChoice s);
SignChoice sign_choice_from_string(std::string_view name);

struct ModelBlock {
  double beta = 0.75;
  double delta = 0.3;
  double kp = 0.7;
  double kx = 0.3;
  double u0 = 0.7;
  double taux = 1.0;

  ModelParams to_params() const { return ModelParams(beta, delta, kp, kx, u0, taux); }
  friend bool operator==(const ModelBlock&, const ModelBlock&) = default;
};

struct SweepBlock {
  std::string parameter = "beta_bar";
  double start = 0.01;
  double stop = 0.99;
  std::size_t points = 400;

  friend bool operator==(const SweepBlock&, const SweepBlock&) = default;
};

struct NetworkBlock {
  /// Edge-list files; when empty the built-in graphs named by `graphs` are used.
  std::string contact;
  std::string communication;
  /// Built-in graph pair: "fig4-coop" or "fig4-ant".
  std::string graphs = "fig4-coop";
  SignChoice x0_sign = SignChoice::random;
  UrgencyReading reading;

  friend bool operator==(const NetworkBlock&, const NetworkBlock&) = default;
};

/// Fully resolved experiment description.
///
/// Resolution order: built-in defaults, then the preset, then the config file,
/// then command-line flags.
struct ExperimentConfig {
  Command command = Command::simulate;
  std::string preset;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
  std::string format = "csv";
  ModelBlock model;
  IntegrationConfig integration;
  std::optional<double> p0;
  std::optional<double> x0;
  std::size_t samples = 12;
  SweepBlock sweep;
  NetworkBlock network;

  /// Throws ConfigError on inconsistent values or missing graph files.
  void validate() const;
};

bool equivalent(const ExperimentConfig& a, const ExperimentConfig& b);

/// One `key = value` line of a config file, tagged with its section.
struct ConfigEntry {
  std::string section;
  std::string key;
  std::string value;
  int line;
};

/// Splits config text into entries. Throws ConfigError with the line number on
/// malformed lines.
std::vector<ConfigEntry> parse_config_entries(std::string_view text);

/// Applies entries to `cfg`; unknown sections or keys are rejected.
void apply_entries(ExperimentConfig& cfg, const std::vector<ConfigEntry>& entries);

/// Parses a complete config text (including `preset`, which is applied before
/// the other entries) on top of the defaults.
ExperimentConfig parse_config_text(std::string_view text);

/// Config text that parse_config_text maps back to an equivalent config.
std::string serialize_config(const ExperimentConfig& cfg);

struct PresetInfo {
  std::string name;
  std::string summary;
  /// Choices the preset makes beyond the model constants (initial conditions, graphs).
  std::string repo_choices;
};

const std::vector<PresetInfo>& presets();

/// Overwrites the fields a preset fixes. Throws ConfigError on unknown names.
void apply_preset(ExperimentConfig& cfg, std::string_view name);

/// "%.17g" formatting used for every number in the CSV payload.
std::string format_number(double v);

}  // namespace nodsis::cli
