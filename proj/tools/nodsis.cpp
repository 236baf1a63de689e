#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nodsis/cli/commands.hpp"
#include "nodsis/cli/config.hpp"
#include "nodsis/errors.hpp"

namespace {

using nodsis::cli::ExperimentConfig;

struct Overrides {
  std::string preset;
  std::string config_file;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> format;
  std::optional<double> beta, delta, kp, kx, u0, taux, dt, tend, p0, x0;
  std::optional<std::size_t> samples;
  std::optional<std::string> x0_sign, contact, communication;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw nodsis::ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ExperimentConfig resolve(nodsis::cli::Command command, const Overrides& o) {
  ExperimentConfig cfg;
  if (!o.preset.empty()) nodsis::cli::apply_preset(cfg, o.preset);
  if (!o.config_file.empty()) {
    const auto entries = nodsis::cli::parse_config_entries(read_file(o.config_file));
    for (const auto& e : entries) {
      const bool top = e.section.empty() || e.section == "run";
      if (top && e.key == "preset" && !e.value.empty() && o.preset.empty()) {
        nodsis::cli::apply_preset(cfg, e.value);
      }
    }
    nodsis::cli::apply_entries(cfg, entries);
  }
  cfg.command = command;
  if (!o.preset.empty()) cfg.preset = o.preset;

  auto set = [](auto& dst, const auto& src) {
    if (src) dst = *src;
  };
  set(cfg.out, o.out);
  set(cfg.seed, o.seed);
  set(cfg.format, o.format);
  set(cfg.model.beta, o.beta);
  set(cfg.model.delta, o.delta);
  set(cfg.model.kp, o.kp);
  set(cfg.model.kx, o.kx);
  set(cfg.model.u0, o.u0);
  set(cfg.model.taux, o.taux);
  set(cfg.integration.dt, o.dt);
  set(cfg.integration.t_end, o.tend);
  set(cfg.samples, o.samples);
  set(cfg.network.contact, o.contact);
  set(cfg.network.communication, o.communication);
  if (o.p0) cfg.p0 = o.p0;
  if (o.x0) cfg.x0 = o.x0;
  if (o.x0_sign) cfg.network.x0_sign = nodsis::cli::sign_choice_from_string(*o.x0_sign);
  return cfg;
}

void list_presets() {
  for (const auto& p : nodsis::cli::presets()) {
    std::cout << p.name << "\n  " << p.summary << "\n  repo choice: " << p.repo_choices << "\n";
  }
}

int execute(const ExperimentConfig& cfg) {
  const auto env = nodsis::cli::run(cfg);
  if (cfg.out.empty()) {
    nodsis::cli::write_envelope(std::cout, env);
    std::cout << '\n';
    nodsis::cli::write_payload(std::cout, env);
    return 0;
  }
  std::ofstream payload(cfg.out);
  std::ofstream meta(cfg.out + ".meta");
  if (!payload || !meta) throw nodsis::ConfigError("cannot write output file: " + cfg.out);
  nodsis::cli::write_payload(payload, env);
  nodsis::cli::write_envelope(meta, env);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NOD-SIS opinion/epidemic model experiments", "nodsis"};
  app.set_version_flag("--version", std::string(nodsis::cli::kToolVersion));
  app.require_subcommand(0, 1);

  bool show_presets = false;
  app.add_flag("--list-presets", show_presets, "Print the built-in presets and exit");

  Overrides o;
  auto attach = [&o](CLI::App* sub) {
    sub->add_option("--preset", o.preset, "fig1a, fig1b, fig2, fig3, fig4-coop, fig4-ant");
    sub->add_option("--config", o.config_file, "Config file (format in README.md)")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Payload CSV path; the envelope goes to PATH.meta");
    sub->add_option("--seed", o.seed, "PRNG seed for random initial conditions");
    sub->add_option("--format", o.format, "Output format (csv)");
    sub->add_option("--beta", o.beta, "Normalized infection rate");
    sub->add_option("--delta", o.delta, "Recovery rate");
    sub->add_option("--kp", o.kp, "Urgency weight on infection level");
    sub->add_option("--kx", o.kx, "Peer-pressure weight");
    sub->add_option("--u0", o.u0, "Baseline urgency");
    sub->add_option("--taux", o.taux, "Opinion time scale");
    sub->add_option("--dt", o.dt, "RK4 step");
    sub->add_option("--tend", o.tend, "Final time");
    sub->add_option("--p0", o.p0, "Initial infection (with --x0)");
    sub->add_option("--x0", o.x0, "Initial opinion (with --p0)");
    sub->add_option("--samples", o.samples, "Random initial conditions (simulate, basin)");
    sub->add_option("--x0-sign", o.x0_sign, "neg, pos or random (network)");
    sub->add_option("--contact", o.contact, "Contact graph edge list (network)");
    sub->add_option("--communication", o.communication, "Communication graph edge list");
  };

  using nodsis::cli::Command;
  const std::pair<Command, const char*> commands[] = {
      {Command::simulate, "Integrate trajectories"},
      {Command::equilibria, "List equilibria, stability and regime"},
      {Command::bifurcate, "Parameter sweep bifurcation diagram"},
      {Command::basin, "Classify random initial conditions by limit"},
      {Command::network, "Networked model with consensus report"},
  };
  std::vector<std::pair<Command, CLI::App*>> subs;
  for (const auto& [cmd, help] : commands) {
    CLI::App* sub = app.add_subcommand(std::string(nodsis::cli::to_string(cmd)), help);
    attach(sub);
    subs.emplace_back(cmd, sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (show_presets) {
    list_presets();
    return 0;
  }

  for (const auto& [cmd, sub] : subs) {
    if (!sub->parsed()) continue;
    try {
      return execute(resolve(cmd, o));
    } catch (const std::exception& e) {
      std::cerr << "nodsis: " << e.what() << '\n';
      return nodsis::cli::exit_code_for(e);
    }
  }
  std::cerr << app.help();
  return 2;
}
