#include "nodsis/cli/config.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "nodsis/errors.hpp"

namespace nodsis::cli {

std::string_view to_string(Command c) {
  switch (c) {
    case Command::simulate: return "simulate";
    case Command::equilibria: return "equilibria";
    case Command::bifurcate: return "bifurcate";
    case Command::basin: return "basin";
    case Command::network: return "network";
  }
  return "?";
}

Command command_from_string(std::string_view name) {
  for (auto c : {Command::simulate, Command::equilibria, Command::bifurcate, Command::basin,
                 Command::network}) {
    if (to_string(c) == name) return c;
  }
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

std::string_view to_string(SignChoice s) {
  switch (s) {
    case SignChoice::neg: return "neg";
    case SignChoice::pos: return "pos";
    case SignChoice::random: return "random";
  }
  return "?";
}

SignChoice sign_choice_from_string(std::string_view name) {
  if (name == "neg") return SignChoice::neg;
  if (name == "pos") return SignChoice::pos;
  if (name == "random") return SignChoice::random;
  throw ConfigError("x0_sign must be neg, pos or random (got '" + std::string(name) + "')");
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

// Shortest text that parses back to the same double.
std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad_value(const ConfigEntry& e, const std::string& why) {
  std::ostringstream msg;
  msg << "config line " << e.line << ": [" << (e.section.empty() ? "top" : e.section) << "] "
      << e.key << ": " << why;
  throw ConfigError(msg.str());
}

double to_double(const ConfigEntry& e) {
  const char* begin = e.value.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE) bad_value(e, "expected a number");
  return v;
}

unsigned long long to_unsigned(const ConfigEntry& e) {
  const char* begin = e.value.c_str();
  char* end = nullptr;
  errno = 0;
  if (!e.value.empty() && e.value[0] == '-') bad_value(e, "expected a non-negative integer");
  const unsigned long long v = std::strtoull(begin, &end, 10);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    bad_value(e, "expected a non-negative integer");
  }
  return v;
}

bool to_bool(const ConfigEntry& e) {
  if (e.value == "true" || e.value == "1") return true;
  if (e.value == "false" || e.value == "0") return false;
  bad_value(e, "expected true or false");
}

}  // namespace

std::vector<ConfigEntry> parse_config_entries(std::string_view text) {
  std::vector<ConfigEntry> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("config line " + std::to_string(line_no) + ": unterminated section");
      }
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    ConfigEntry e{section, trim(std::string_view(line).substr(0, eq)),
                  trim(std::string_view(line).substr(eq + 1)), line_no};
    if (e.key.empty()) {
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    }
    out.push_back(std::move(e));
  }
  return out;
}

void apply_entries(ExperimentConfig& cfg, const std::vector<ConfigEntry>& entries) {
  for (const ConfigEntry& e : entries) {
    const std::string& s = e.section;
    const std::string& k = e.key;
    if (s == "metadata") continue;
    if (s.empty() || s == "run") {
      if (k == "command") {
        try {
          cfg.command = command_from_string(e.value);
        } catch (const ConfigError&) {
          bad_value(e, "unknown command '" + e.value + "'");
        }
      } else if (k == "preset") {
        cfg.preset = e.value;
      } else if (k == "seed") {
        cfg.seed = to_unsigned(e);
      } else if (k == "out") {
        cfg.out = e.value;
      } else if (k == "format") {
        cfg.format = e.value;
      } else {
        bad_value(e, "unknown key");
      }
    } else if (s == "model") {
      if (k == "beta") cfg.model.beta = to_double(e);
      else if (k == "delta") cfg.model.delta = to_double(e);
      else if (k == "kp") cfg.model.kp = to_double(e);
      else if (k == "kx") cfg.model.kx = to_double(e);
      else if (k == "u0") cfg.model.u0 = to_double(e);
      else if (k == "taux") cfg.model.taux = to_double(e);
      else bad_value(e, "unknown key");
    } else if (s == "integration") {
      if (k == "dt") cfg.integration.dt = to_double(e);
      else if (k == "tend") cfg.integration.t_end = to_double(e);
      else if (k == "tol") cfg.integration.convergence_tol = to_double(e);
      else if (k == "stride") cfg.integration.record_stride = static_cast<int>(to_unsigned(e));
      else bad_value(e, "unknown key");
    } else if (s == "initial") {
      if (k == "p0") cfg.p0 = to_double(e);
      else if (k == "x0") cfg.x0 = to_double(e);
      else if (k == "samples") cfg.samples = to_unsigned(e);
      else bad_value(e, "unknown key");
    } else if (s == "sweep") {
      if (k == "parameter") cfg.sweep.parameter = e.value;
      else if (k == "start") cfg.sweep.start = to_double(e);
      else if (k == "stop") cfg.sweep.stop = to_double(e);
      else if (k == "points") cfg.sweep.points = to_unsigned(e);
      else bad_value(e, "unknown key");
    } else if (s == "network") {
      if (k == "contact") cfg.network.contact = e.value;
      else if (k == "communication") cfg.network.communication = e.value;
      else if (k == "graphs") cfg.network.graphs = e.value;
      else if (k == "x0_sign") {
        try {
          cfg.network.x0_sign = sign_choice_from_string(e.value);
        } catch (const ConfigError& err) {
          bad_value(e, err.what());
        }
      } else if (k == "degree_from_communication") {
        cfg.network.reading.degree_from_communication = to_bool(e);
      } else if (k == "peer_pressure_from_neighbors") {
        cfg.network.reading.peer_pressure_from_neighbors = to_bool(e);
      } else {
        bad_value(e, "unknown key");
      }
    } else {
      bad_value(e, "unknown section");
    }
  }
}

ExperimentConfig parse_config_text(std::string_view text) {
  const auto entries = parse_config_entries(text);
  ExperimentConfig cfg;
  for (const ConfigEntry& e : entries) {
    const bool top = e.section.empty() || e.section == "run";
    if (top && e.key == "preset" && !e.value.empty()) apply_preset(cfg, e.value);
  }
  apply_entries(cfg, entries);
  return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream o;
  o << "[run]\n";
  o << "command = " << to_string(cfg.command) << '\n';
  if (!cfg.preset.empty()) o << "preset = " << cfg.preset << '\n';
  o << "seed = " << cfg.seed << '\n';
  if (!cfg.out.empty()) o << "out = " << cfg.out << '\n';
  o << "format = " << cfg.format << '\n';

  o << "\n[model]\n";
  o << "beta = " << shortest(cfg.model.beta) << '\n';
  o << "delta = " << shortest(cfg.model.delta) << '\n';
  o << "kp = " << shortest(cfg.model.kp) << '\n';
  o << "kx = " << shortest(cfg.model.kx) << '\n';
  o << "u0 = " << shortest(cfg.model.u0) << '\n';
  o << "taux = " << shortest(cfg.model.taux) << '\n';

  o << "\n[integration]\n";
  o << "dt = " << shortest(cfg.integration.dt) << '\n';
  o << "tend = " << shortest(cfg.integration.t_end) << '\n';
  o << "tol = " << shortest(cfg.integration.convergence_tol) << '\n';
  o << "stride = " << cfg.integration.record_stride << '\n';

  o << "\n[initial]\n";
  if (cfg.p0) o << "p0 = " << shortest(*cfg.p0) << '\n';
  if (cfg.x0) o << "x0 = " << shortest(*cfg.x0) << '\n';
  o << "samples = " << cfg.samples << '\n';

  o << "\n[sweep]\n";
  o << "parameter = " << cfg.sweep.parameter << '\n';
  o << "start = " << shortest(cfg.sweep.start) << '\n';
  o << "stop = " << shortest(cfg.sweep.stop) << '\n';
  o << "points = " << cfg.sweep.points << '\n';

  o << "\n[network]\n";
  if (!cfg.network.contact.empty()) o << "contact = " << cfg.network.contact << '\n';
  if (!cfg.network.communication.empty()) {
    o << "communication = " << cfg.network.communication << '\n';
  }
  o << "graphs = " << cfg.network.graphs << '\n';
  o << "x0_sign = " << to_string(cfg.network.x0_sign) << '\n';
  o << "degree_from_communication = "
    << (cfg.network.reading.degree_from_communication ? "true" : "false") << '\n';
  o << "peer_pressure_from_neighbors = "
    << (cfg.network.reading.peer_pressure_from_neighbors ? "true" : "false") << '\n';
  return o.str();
}

bool equivalent(const ExperimentConfig& a, const ExperimentConfig& b) {
  auto same_integration = [](const IntegrationConfig& x, const IntegrationConfig& y) {
    return x.dt == y.dt && x.t_end == y.t_end && x.convergence_tol == y.convergence_tol &&
           x.record_stride == y.record_stride;
  };
  return a.command == b.command && a.preset == b.preset && a.seed == b.seed && a.out == b.out &&
         a.format == b.format && a.model == b.model &&
         same_integration(a.integration, b.integration) && a.p0 == b.p0 && a.x0 == b.x0 &&
         a.samples == b.samples && a.sweep == b.sweep && a.network == b.network;
}

void ExperimentConfig::validate() const {
  if (format != "csv") throw ConfigError("unsupported --format '" + format + "' (only csv)");
  try {
    (void)model.to_params();
    integration.validate();
    (void)param_from_string(sweep.parameter);
    if (p0 || x0) {
      if (!p0 || !x0) throw ConfigError("p0 and x0 must be given together");
      (void)State(*p0, *x0);
    }
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  if (sweep.points == 0) throw ConfigError("sweep points must be >= 1");
  if (sweep.points > 1 && !(sweep.stop > sweep.start)) {
    throw ConfigError("sweep stop must exceed start");
  }
  if (network.contact.empty() != network.communication.empty()) {
    throw ConfigError("network contact and communication files must be given together");
  }
  for (const std::string& path : {network.contact, network.communication}) {
    if (!path.empty() && !std::filesystem::exists(path)) {
      throw ConfigError("graph file not found: " + path);
    }
  }
  if (network.contact.empty() && network.graphs != "fig4-coop" && network.graphs != "fig4-ant") {
    throw ConfigError("unknown built-in graphs '" + network.graphs + "'");
  }
}

}  // namespace nodsis::cli
