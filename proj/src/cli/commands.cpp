#include "nodsis/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "nodsis/bifurcation.hpp"
#include "nodsis/equilibria.hpp"
#include "nodsis/errors.hpp"
#include "nodsis/integrator.hpp"

namespace nodsis::cli {

const Table& ResultEnvelope::table(const std::string& name) const {
  for (const Table& t : payload) {
    if (t.name == name) return t;
  }
  throw std::out_of_range("no payload table named '" + name + "'");
}

namespace {

using Row = std::vector<std::string>;

std::string num(double v) { return format_number(v); }
std::string flag(bool b) { return b ? "true" : "false"; }

ResultEnvelope start_envelope(const ExperimentConfig& cfg) {
  ResultEnvelope env;
  env.config = cfg;
  env.metadata = {{"tool", kToolName},
                  {"version", kToolVersion},
                  {"command", std::string(to_string(cfg.command))},
                  {"preset", cfg.preset.empty() ? "none" : cfg.preset},
                  {"seed", std::to_string(cfg.seed)},
                  {"prng", std::string(kPrngName)}};
  return env;
}

Table trajectory_table(const std::string& name, const Trajectory& traj) {
  Table t{name, {"t", "p", "x"}, {}};
  t.rows.reserve(traj.times.size());
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    t.rows.push_back({num(traj.times[i]), num(traj.states[i].p()), num(traj.states[i].x())});
  }
  return t;
}

std::string limit_name(const Trajectory& traj) {
  if (!traj.converged) return "none";
  if (traj.limit) return std::string(to_string(traj.limit->cls));
  return "anomaly";
}

std::vector<State> initial_states(const ExperimentConfig& cfg) {
  if (cfg.p0 && cfg.x0) return {State(*cfg.p0, *cfg.x0)};
  std::vector<State> out;
  for (std::size_t i = 0; i < cfg.samples; ++i) out.push_back(random_interior_state(cfg.seed, i));
  return out;
}

}  // namespace

ResultEnvelope run_simulate(const ExperimentConfig& cfg) {
  ResultEnvelope env = start_envelope(cfg);
  const ModelParams params = cfg.model.to_params();
  const std::vector<Equilibrium> known = find_equilibria(params);
  const std::vector<State> starts = initial_states(cfg);

  Table summary{"summary",
                {"run", "p0", "x0", "converged", "limit_class", "p_final", "x_final",
                 "max_excursion", "sign_invariance"},
                {}};
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const Trajectory traj = integrate(starts[i], params, cfg.integration, known);
    env.payload.push_back(trajectory_table("trajectory " + std::to_string(i), traj));
    std::string sign = "n/a";
    if (starts[i].x() != 0.0) {
      sign = check_sign_invariance(traj) == SignInvariance::holds ? "holds" : "violated";
    }
    summary.rows.push_back({std::to_string(i), num(starts[i].p()), num(starts[i].x()),
                            flag(traj.converged), limit_name(traj), num(traj.final_state().p()),
                            num(traj.final_state().x()), num(traj.max_excursion), sign});
  }
  env.payload.insert(env.payload.begin(), std::move(summary));
  return env;
}

ResultEnvelope run_equilibria(const ExperimentConfig& cfg) {
  ResultEnvelope env = start_envelope(cfg);
  const ModelParams params = cfg.model.to_params();

  Table eq_table{"equilibria",
                 {"class", "p", "x", "eig1_re", "eig1_im", "eig2_re", "eig2_im", "stability",
                  "residual"},
                 {}};
  for (const Equilibrium& e : find_equilibria(params)) {
    eq_table.rows.push_back({std::string(to_string(e.cls)), num(e.state.p()), num(e.state.x()),
                             num(e.eigenvalues[0].real()), num(e.eigenvalues[0].imag()),
                             num(e.eigenvalues[1].real()), num(e.eigenvalues[1].imag()),
                             std::string(to_string(e.stability)), num(e.residual)});
  }

  std::string regime_label = "UNDEFINED";
  std::string beta_star_text;
  std::string beta0_text;
  std::string warning;
  try {
    beta_star_text = num(beta_star(params));
  } catch (const RegimeError&) {
  }
  try {
    const RegimeReport report = regime(params);
    regime_label = std::string(to_string(report.regime));
    if (report.thresholds.beta_0) beta0_text = num(*report.thresholds.beta_0);
  } catch (const AssumptionViolation& e) {
    warning = std::string("assumption violated: ") + e.what();
  } catch (const RegimeError& e) {
    warning = std::string("near bifurcation: ") + e.what();
  }
  if (beta0_text.empty() && params.weak_peer_pressure() && params.u0() < 1.0 &&
      params.k_p() > 0.0) {
    if (auto b0 = find_beta0(params)) beta0_text = num(*b0);
  }

  Table regime_table{"regime",
                     {"regime", "delta", "beta_star", "beta_0", "assumption1", "warning"},
                     {{regime_label, num(params.delta()), beta_star_text, beta0_text,
                       flag(params.assumption1_holds()), warning}}};
  env.payload.push_back(std::move(eq_table));
  env.payload.push_back(std::move(regime_table));
  if (!warning.empty()) env.metadata.emplace_back("warning", warning);
  return env;
}

ResultEnvelope run_bifurcate(const ExperimentConfig& cfg) {
  ResultEnvelope env = start_envelope(cfg);
  SweepConfig sweep_cfg{param_from_string(cfg.sweep.parameter),
                        uniform_grid(cfg.sweep.start, cfg.sweep.stop, cfg.sweep.points),
                        cfg.model.to_params()};
  const DiagramTables tables = export_diagram(sweep(sweep_cfg));

  Table points{"branches", {"parameter", "class", "branch", "p", "x", "stability"}, {}};
  for (const PointRecord& r : tables.points) {
    points.rows.push_back({num(r.parameter), std::string(to_string(r.cls)),
                           std::to_string(r.branch), num(r.p), num(r.x),
                           std::string(to_string(r.stability))});
  }
  Table events{"events", {"parameter", "type", "classes"}, {}};
  for (const EventRecord& r : tables.events) {
    std::string classes;
    for (EquilibriumClass c : r.classes) {
      if (!classes.empty()) classes += '|';
      classes += to_string(c);
    }
    events.rows.push_back({num(r.parameter), std::string(to_string(r.type)), classes});
  }
  env.payload.push_back(std::move(points));
  env.payload.push_back(std::move(events));
  return env;
}

ResultEnvelope run_basin(const ExperimentConfig& cfg) {
  ResultEnvelope env = start_envelope(cfg);
  const auto samples =
      basin_experiment(cfg.model.to_params(), cfg.samples, cfg.seed, cfg.integration);
  Table t{"samples",
          {"index", "seed", "p0", "x0", "converged", "limit_class", "p_final", "x_final"},
          {}};
  for (const BasinSample& s : samples) {
    t.rows.push_back({std::to_string(s.index), std::to_string(s.seed), num(s.initial.p()),
                      num(s.initial.x()), flag(s.converged),
                      s.limit_class ? std::string(to_string(*s.limit_class)) : "none",
                      num(s.final_state.p()), num(s.final_state.x())});
  }
  env.payload.push_back(std::move(t));
  return env;
}

GraphPair builtin_graphs(const std::string& name) {
  const std::size_t n = 5;
  SquareMatrix contact = SquareMatrix::identity(n);
  auto link = [](SquareMatrix& m, std::size_t j, std::size_t k, double w) {
    m(j, k) = w;
    m(k, j) = w;
  };
  for (auto [j, k] : {std::pair<std::size_t, std::size_t>{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0},
                      {1, 3}}) {
    link(contact, j, k, 1.0);
  }
  SquareMatrix comm = SquareMatrix::identity(n);
  link(comm, 0, 1, 1.0);
  link(comm, 0, 2, 1.0);
  link(comm, 1, 2, 1.0);
  link(comm, 3, 4, 1.0);
  if (name == "fig4-coop") {
    link(comm, 2, 3, 1.0);
  } else if (name == "fig4-ant") {
    link(comm, 2, 3, -1.0);
  } else {
    throw ConfigError("unknown built-in graphs '" + name + "'");
  }
  return GraphPair{std::move(contact), std::move(comm)};
}

ResultEnvelope run_network(const ExperimentConfig& cfg) {
  ResultEnvelope env = start_envelope(cfg);
  GraphPair graphs = cfg.network.contact.empty()
                         ? builtin_graphs(cfg.network.graphs)
                         : GraphPair{load_edge_list(cfg.network.contact, GraphKind::contact),
                                     load_edge_list(cfg.network.communication,
                                                    GraphKind::communication)};
  const std::size_t n = graphs.contact.size();
  if (graphs.communication.size() != n) {
    throw ConfigError("contact and communication graphs have different node counts");
  }
  const ModelParams params = cfg.model.to_params();
  NetworkModel model = [&] {
    try {
      return NetworkModel(std::move(graphs.contact), std::move(graphs.communication),
                          std::vector<double>(n, params.delta()), params, cfg.network.reading);
    } catch (const ParameterError& e) {
      throw ConfigError(e.what());
    }
  }();

  NetworkState s0;
  for (std::size_t j = 0; j < n; ++j) {
    const State draw = random_interior_state(cfg.seed, j);
    double x = draw.x();
    if (cfg.network.x0_sign == SignChoice::neg) x = -std::abs(x);
    if (cfg.network.x0_sign == SignChoice::pos) x = std::abs(x);
    s0.p.push_back(cfg.p0 ? *cfg.p0 : draw.p());
    s0.x.push_back(cfg.x0 ? *cfg.x0 : x);
  }

  const NetworkTrajectory traj = network_integrate(s0, model, cfg.integration);
  const SisTrajectory base = network_sis_baseline(s0.p, model, cfg.integration);

  Row header{"t"};
  for (std::size_t j = 0; j < n; ++j) header.push_back("p_" + std::to_string(j));
  for (std::size_t j = 0; j < n; ++j) header.push_back("x_" + std::to_string(j));
  Table traj_table{"trajectory", header, {}};
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    Row row{num(traj.times[i])};
    for (double p : traj.states[i].p) row.push_back(num(p));
    for (double x : traj.states[i].x) row.push_back(num(x));
    traj_table.rows.push_back(std::move(row));
  }

  Row base_header{"t"};
  for (std::size_t j = 0; j < n; ++j) base_header.push_back("p_" + std::to_string(j));
  Table base_table{"baseline", base_header, {}};
  for (std::size_t i = 0; i < base.times.size(); ++i) {
    Row row{num(base.times[i])};
    for (double p : base.p[i]) row.push_back(num(p));
    base_table.rows.push_back(std::move(row));
  }

  const ConsensusReport report = consensus_report(traj, model, cfg.integration);
  Table report_table{"report", {"node", "x_final", "sign", "p_final", "p_baseline", "difference"},
                     {}};
  for (std::size_t j = 0; j < n; ++j) {
    report_table.rows.push_back({std::to_string(j), num(traj.final_state().x[j]),
                                 std::to_string(report.sign_pattern[j]),
                                 num(traj.final_state().p[j]), num(report.baseline[j]),
                                 num(report.infection_vs_baseline[j])});
  }
  Table summary{"summary",
                {"outcome", "converged", "max_excursion"},
                {{std::string(to_string(report.outcome)), flag(traj.converged),
                  num(traj.max_excursion)}}};

  env.payload.push_back(std::move(summary));
  env.payload.push_back(std::move(report_table));
  env.payload.push_back(std::move(traj_table));
  env.payload.push_back(std::move(base_table));
  return env;
}

ResultEnvelope run(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  ResultEnvelope env;
  switch (cfg.command) {
    case Command::simulate: env = run_simulate(cfg); break;
    case Command::equilibria: env = run_equilibria(cfg); break;
    case Command::bifurcate: env = run_bifurcate(cfg); break;
    case Command::basin: env = run_basin(cfg); break;
    case Command::network: env = run_network(cfg); break;
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t0;
  env.metadata.emplace_back("wall_clock_seconds", format_number(elapsed.count()));
  return env;
}

void write_payload(std::ostream& out, const ResultEnvelope& env) {
  auto write_row = [&](const Row& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  };
  for (const Table& t : env.payload) {
    out << "# " << t.name << '\n';
    write_row(t.header);
    for (const Row& r : t.rows) write_row(r);
  }
}

std::string payload_text(const ResultEnvelope& env) {
  std::ostringstream o;
  write_payload(o, env);
  return o.str();
}

void write_envelope(std::ostream& out, const ResultEnvelope& env) {
  out << "[metadata]\n";
  for (const auto& [key, value] : env.metadata) out << key << " = " << value << '\n';
  out << "\n# resolved config (re-runnable with --config)\n";
  out << serialize_config(env.config);
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParameterError*>(&e)) return 2;
  if (dynamic_cast<const InvarianceViolation*>(&e)) return 3;
  if (dynamic_cast<const NonConvergence*>(&e)) return 4;
  return 1;
}

}  // namespace nodsis::cli
