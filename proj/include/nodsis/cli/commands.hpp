#pragma once

#include <exception>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "nodsis/cli/config.hpp"
#include "nodsis/network.hpp"

namespace nodsis::cli {

inline constexpr const char* kToolName = "nodsis";
inline constexpr const char* kToolVersion = "0.1.0";

struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct ResultEnvelope {
  /// Ordered key/value metadata (tool, version, seed, prng, wall clock, ...).
  std::vector<std::pair<std::string, std::string>> metadata;
  ExperimentConfig config;
  std::vector<Table> payload;

  /// Throws std::out_of_range when no table has that name.
  const Table& table(const std::string& name) const;
};

ResultEnvelope run_simulate(const ExperimentConfig& cfg);
ResultEnvelope run_equilibria(const ExperimentConfig& cfg);
ResultEnvelope run_bifurcate(const ExperimentConfig& cfg);
ResultEnvelope run_basin(const ExperimentConfig& cfg);
ResultEnvelope run_network(const ExperimentConfig& cfg);

/// Validates the config and dispatches on cfg.command.
ResultEnvelope run(const ExperimentConfig& cfg);

struct GraphPair {
  SquareMatrix contact;
  SquareMatrix communication;
};

/// Built-in 5-node graphs of the fig4-coop / fig4-ant presets.
GraphPair builtin_graphs(const std::string& name);

/// Payload tables: for each table a `# <name>` line, a header row and data rows.
void write_payload(std::ostream& out, const ResultEnvelope& env);

/// Key/value envelope: a [metadata] block followed by the resolved config.
void write_envelope(std::ostream& out, const ResultEnvelope& env);

std::string payload_text(const ResultEnvelope& env);

/// 0 success, 2 config error, 3 numerical-invariance violation, 4 non-convergence.
int exit_code_for(const std::exception& e);

}  // namespace nodsis::cli
