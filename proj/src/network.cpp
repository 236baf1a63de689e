#include "nodsis/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "nodsis/detail/rk4.hpp"
#include "nodsis/errors.hpp"

namespace nodsis {

SquareMatrix::SquareMatrix(std::size_t n, std::vector<double> row_major)
    : n_(n), data_(std::move(row_major)) {
  if (data_.size() != n * n) throw ParameterError("SquareMatrix: data size is not n*n");
}

SquareMatrix SquareMatrix::identity(std::size_t n) {
  SquareMatrix m(n);
  for (std::size_t j = 0; j < n; ++j) m(j, j) = 1.0;
  return m;
}

bool SquareMatrix::symmetric() const {
  for (std::size_t j = 0; j < n_; ++j) {
    for (std::size_t k = j + 1; k < n_; ++k) {
      if ((*this)(j, k) != (*this)(k, j)) return false;
    }
  }
  return true;
}

bool SquareMatrix::connected() const {
  if (n_ == 0) return false;
  std::vector<bool> seen(n_, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t j = stack.back();
    stack.pop_back();
    for (std::size_t k = 0; k < n_; ++k) {
      if (!seen[k] && (*this)(j, k) != 0.0) {
        seen[k] = true;
        ++reached;
        stack.push_back(k);
      }
    }
  }
  return reached == n_;
}

SquareMatrix SquareMatrix::permuted(const std::vector<std::size_t>& perm) const {
  SquareMatrix out(n_);
  for (std::size_t j = 0; j < n_; ++j) {
    for (std::size_t k = 0; k < n_; ++k) out(perm[j], perm[k]) = (*this)(j, k);
  }
  return out;
}

namespace {

void check_graph(const SquareMatrix& m, std::size_t n, const char* name, bool nonnegative) {
  auto fail = [&](const std::string& why) {
    throw ParameterError(std::string("network: ") + name + " graph " + why);
  };
  if (m.size() != n) fail("has the wrong size");
  if (!m.symmetric()) fail("is not symmetric");
  for (std::size_t j = 0; j < n; ++j) {
    if (m(j, j) != 1.0) fail("must have unit self-loops (a_jj = 1)");
    for (std::size_t k = 0; k < n; ++k) {
      if (!std::isfinite(m(j, k))) fail("has a non-finite weight");
      if (nonnegative && m(j, k) < 0.0) fail("has a negative weight");
    }
  }
  if (!m.connected()) fail("is not connected");
}

}  // namespace

NetworkModel::NetworkModel(SquareMatrix contact, SquareMatrix communication,
                           std::vector<double> deltas, ModelParams params, UrgencyReading reading)
    : contact_(std::move(contact)),
      communication_(std::move(communication)),
      deltas_(std::move(deltas)),
      params_(params),
      reading_(reading) {
  const std::size_t n = contact_.size();
  if (n == 0) throw ParameterError("network: at least one node is required");
  check_graph(contact_, n, "contact", true);
  check_graph(communication_, n, "communication", false);
  if (deltas_.size() != n) throw ParameterError("network: need one recovery rate per node");
  for (double d : deltas_) {
    if (!(d > 0.0) || !std::isfinite(d)) throw ParameterError("network: recovery rates must be > 0");
  }
  degree_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      d += reading_.degree_from_communication ? std::abs(communication_(j, k)) : contact_(j, k);
    }
    if (!(d > 0.0)) throw ParameterError("network: node degree must be positive");
    degree_[j] = d;
  }
}

NetworkModel NetworkModel::permuted(const std::vector<std::size_t>& perm) const {
  std::vector<double> deltas(deltas_.size());
  for (std::size_t j = 0; j < deltas_.size(); ++j) deltas[perm[j]] = deltas_[j];
  return NetworkModel(contact_.permuted(perm), communication_.permuted(perm), std::move(deltas),
                      params_, reading_);
}

void NetworkState::validate(std::size_t n) const {
  if (p.size() != n || x.size() != n) {
    throw ParameterError("network state: expected " + std::to_string(n) + " nodes");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (!State::in_region(p[j], x[j])) {
      throw ParameterError("network state: node " + std::to_string(j) +
                           " outside [0,1] x [-1,1]");
    }
  }
}

namespace {

/// Field over the packed state [p_0 .. p_{n-1}, x_0 .. x_{n-1}].
void packed_field(const std::vector<double>& s, std::vector<double>& out, const NetworkModel& m) {
  const std::size_t n = m.size();
  const ModelParams& prm = m.params();
  const SquareMatrix& a = m.contact();
  const SquareMatrix& ah = m.communication();
  const double* p = s.data();
  const double* x = s.data() + n;

  for (std::size_t j = 0; j < n; ++j) {
    double contact_pressure = 0.0;
    double info_infection = 0.0;
    double row_sum = 0.0;
    double social_opinion = 0.0;
    double neighbor_sq = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      contact_pressure += a(j, k) * p[k];
      info_infection += std::abs(ah(j, k)) * p[k];
      row_sum += ah(j, k);
      social_opinion += ah(j, k) * x[k];
      neighbor_sq += ah(j, k) * x[k] * x[k];
    }
    const double peer = m.reading().peer_pressure_from_neighbors
                            ? prm.k_x() * neighbor_sq
                            : prm.k_x() * x[j] * x[j] * row_sum;
    const double u = prm.k_p() * (info_infection / m.degree(j)) + peer + prm.u0();

    out[j] = prm.beta_bar() * (1.0 + x[j]) * (1.0 - p[j]) * contact_pressure -
             m.deltas()[j] * p[j];
    out[n + j] = (-x[j] + std::tanh(u * social_opinion)) / prm.tau_x();
  }
}

std::vector<double> pack(const NetworkState& s) {
  std::vector<double> v(s.p);
  v.insert(v.end(), s.x.begin(), s.x.end());
  return v;
}

NetworkState unpack(const std::vector<double>& v, std::size_t n) {
  return NetworkState{std::vector<double>(v.begin(), v.begin() + static_cast<long>(n)),
                      std::vector<double>(v.begin() + static_cast<long>(n), v.end())};
}

}  // namespace

NetworkDerivative network_vector_field(const NetworkState& s, const NetworkModel& m) {
  s.validate(m.size());
  std::vector<double> out(2 * m.size());
  packed_field(pack(s), out, m);
  const std::size_t n = m.size();
  return NetworkDerivative{std::vector<double>(out.begin(), out.begin() + static_cast<long>(n)),
                           std::vector<double>(out.begin() + static_cast<long>(n), out.end())};
}

NetworkTrajectory network_integrate(const NetworkState& s0, const NetworkModel& m,
                                    const IntegrationConfig& cfg) {
  const std::size_t n = m.size();
  s0.validate(n);
  auto field = [&](const std::vector<double>& s, std::vector<double>& out) {
    packed_field(s, out, m);
  };
  auto bounds = [n](std::size_t i) {
    return i < n ? detail::Bounds{0.0, 1.0} : detail::Bounds{-1.0, 1.0};
  };
  auto raw = detail::run_rk4(pack(s0), field, bounds, cfg);

  NetworkTrajectory traj;
  traj.times = std::move(raw.times);
  traj.states.reserve(raw.states.size());
  for (const auto& v : raw.states) traj.states.push_back(unpack(v, n));
  traj.converged = raw.converged;
  traj.max_excursion = raw.max_excursion;
  return traj;
}

SisTrajectory network_sis_baseline(const std::vector<double>& p0, const NetworkModel& m,
                                   const IntegrationConfig& cfg) {
  const std::size_t n = m.size();
  if (p0.size() != n) throw ParameterError("network_sis_baseline: wrong number of nodes");
  for (double p : p0) {
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("network_sis_baseline: p0 outside [0,1]");
  }
  const double beta = m.params().beta_bar();
  auto field = [&](const std::vector<double>& p, std::vector<double>& out) {
    for (std::size_t j = 0; j < n; ++j) {
      double pressure = 0.0;
      for (std::size_t k = 0; k < n; ++k) pressure += m.contact()(j, k) * p[k];
      out[j] = beta * (1.0 - p[j]) * pressure - m.deltas()[j] * p[j];
    }
  };
  auto bounds = [](std::size_t) { return detail::Bounds{0.0, 1.0}; };
  auto raw = detail::run_rk4(p0, field, bounds, cfg);
  return SisTrajectory{std::move(raw.times), std::move(raw.states), raw.converged,
                       raw.max_excursion};
}

std::string_view to_string(ConsensusOutcome o) {
  switch (o) {
    case ConsensusOutcome::AGREEMENT_AVERSE: return "AGREEMENT_AVERSE";
    case ConsensusOutcome::AGREEMENT_SEEKING: return "AGREEMENT_SEEKING";
    case ConsensusOutcome::DISSENSUS: return "DISSENSUS";
    case ConsensusOutcome::NEUTRAL: return "NEUTRAL";
  }
  return "?";
}

ConsensusReport consensus_report(const NetworkTrajectory& traj, const NetworkModel& m,
                                 const IntegrationConfig& cfg) {
  if (!traj.converged) throw NonConvergence("consensus_report: trajectory did not converge");
  const SisTrajectory base = network_sis_baseline(traj.states.front().p, m, cfg);
  if (!base.converged) throw NonConvergence("consensus_report: SIS baseline did not converge");

  const NetworkState& last = traj.final_state();
  ConsensusReport r;
  bool any_neg = false;
  bool any_pos = false;
  for (std::size_t j = 0; j < m.size(); ++j) {
    const double x = last.x[j];
    const int sign = std::abs(x) < 1e-8 ? 0 : (x > 0.0 ? 1 : -1);
    any_neg = any_neg || sign < 0;
    any_pos = any_pos || sign > 0;
    r.sign_pattern.push_back(sign);
    r.baseline.push_back(base.steady_state()[j]);
    r.infection_vs_baseline.push_back(last.p[j] - base.steady_state()[j]);
  }
  if (any_neg && any_pos) {
    r.outcome = ConsensusOutcome::DISSENSUS;
  } else if (any_neg) {
    r.outcome = ConsensusOutcome::AGREEMENT_AVERSE;
  } else if (any_pos) {
    r.outcome = ConsensusOutcome::AGREEMENT_SEEKING;
  } else {
    r.outcome = ConsensusOutcome::NEUTRAL;
  }
  return r;
}

SquareMatrix parse_edge_list(std::string_view text, GraphKind kind) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  std::size_t n = 0;
  bool have_header = false;
  std::map<std::pair<std::size_t, std::size_t>, double> weights;

  auto fail = [&](const std::string& why) {
    throw ConfigError("edge list line " + std::to_string(line_no) + ": " + why);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;

    if (!have_header) {
      if (first.rfind("n=", 0) != 0) fail("expected header 'n=<count>'");
      try {
        std::size_t used = 0;
        const long long count = std::stoll(first.substr(2), &used);
        if (used != first.size() - 2 || count <= 0) fail("invalid node count");
        n = static_cast<std::size_t>(count);
      } catch (const std::logic_error&) {
        fail("invalid node count");
      }
      have_header = true;
      continue;
    }

    long long j = 0;
    long long k = 0;
    double w = 0.0;
    std::istringstream edge(line);
    std::string extra;
    if (!(edge >> j >> k >> w) || (edge >> extra)) fail("expected 'j k w'");
    if (j < 0 || k < 0 || static_cast<std::size_t>(j) >= n || static_cast<std::size_t>(k) >= n) {
      fail("node id out of range");
    }
    if (!std::isfinite(w)) fail("weight is not finite");
    if (kind == GraphKind::contact && w < 0.0) fail("contact weights must be non-negative");
    const auto a = static_cast<std::size_t>(std::min(j, k));
    const auto b = static_cast<std::size_t>(std::max(j, k));
    auto [it, inserted] = weights.emplace(std::pair{a, b}, w);
    if (!inserted && it->second != w) fail("conflicting weights for the same pair");
  }
  if (!have_header) throw ConfigError("edge list: missing header 'n=<count>'");

  SquareMatrix m = SquareMatrix::identity(n);
  for (const auto& [key, w] : weights) {
    m(key.first, key.second) = w;
    m(key.second, key.first) = w;
  }
  return m;
}

SquareMatrix load_edge_list(const std::filesystem::path& path, GraphKind kind) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open graph file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_edge_list(buf.str(), kind);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace nodsis
