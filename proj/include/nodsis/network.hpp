#pragma once

#include <cstddef>
#include <filesystem>
#include <string_view>
#include <vector>

#include "nodsis/integrator.hpp"
#include "nodsis/model.hpp"

namespace nodsis {

/// Dense square matrix, row-major.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}
  SquareMatrix(std::size_t n, std::vector<double> row_major);

  static SquareMatrix identity(std::size_t n);

  std::size_t size() const { return n_; }
  double operator()(std::size_t j, std::size_t k) const { return data_[j * n_ + k]; }
  double& operator()(std::size_t j, std::size_t k) { return data_[j * n_ + k]; }

  bool symmetric() const;
  /// Connectivity of the graph with an edge wherever the entry is non-zero.
  bool connected() const;
  /// Same matrix with rows and columns relabelled: out(perm[j], perm[k]) = in(j, k).
  SquareMatrix permuted(const std::vector<std::size_t>& perm) const;

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

/// How the opinion urgency of each subpopulation is assembled.
///
/// By default the infection term is normalized by the contact degree
/// sum_k a_jk and the peer-pressure term is k_x x_j^2 sum_k ahat_jk. The two
/// switches normalize by the communication degree sum_k |ahat_jk| instead, and
/// use k_x sum_k ahat_jk x_k^2.
struct UrgencyReading {
  bool degree_from_communication = false;
  bool peer_pressure_from_neighbors = false;

  friend bool operator==(const UrgencyReading&, const UrgencyReading&) = default;
};

/// N coupled subpopulations.
///
/// Invariants (checked on construction, ParameterError otherwise): contact and
/// communication matrices are n x n, symmetric, connected, with unit diagonal;
/// contact entries are non-negative; every contact degree is positive; one
/// positive recovery rate per node. The scalar delta in `params` is unused.
class NetworkModel {
 public:
  NetworkModel(SquareMatrix contact, SquareMatrix communication, std::vector<double> deltas,
               ModelParams params, UrgencyReading reading = {});

  std::size_t size() const { return contact_.size(); }
  const SquareMatrix& contact() const { return contact_; }
  const SquareMatrix& communication() const { return communication_; }
  const std::vector<double>& deltas() const { return deltas_; }
  const ModelParams& params() const { return params_; }
  const UrgencyReading& reading() const { return reading_; }
  /// Normalizer of the infection term in node j's urgency.
  double degree(std::size_t j) const { return degree_[j]; }

  NetworkModel permuted(const std::vector<std::size_t>& perm) const;

 private:
  SquareMatrix contact_;
  SquareMatrix communication_;
  std::vector<double> deltas_;
  ModelParams params_;
  UrgencyReading reading_;
  std::vector<double> degree_;
};

struct NetworkState {
  std::vector<double> p;
  std::vector<double> x;

  /// Throws ParameterError unless sizes match n and every node is in the region.
  void validate(std::size_t n) const;
};

struct NetworkDerivative {
  std::vector<double> dp;
  std::vector<double> dx;
};

NetworkDerivative network_vector_field(const NetworkState& s, const NetworkModel& m);

struct NetworkTrajectory {
  std::vector<double> times;
  std::vector<NetworkState> states;
  bool converged = false;
  double max_excursion = 0.0;

  const NetworkState& final_state() const { return states.back(); }
};

/// RK4 with clamping and convergence detection over the 2n-dimensional state,
/// with the same semantics as the scalar integrate().
NetworkTrajectory network_integrate(const NetworkState& s0, const NetworkModel& m,
                                    const IntegrationConfig& cfg = {});

struct SisTrajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> p;
  bool converged = false;
  double max_excursion = 0.0;

  const std::vector<double>& steady_state() const { return p.back(); }
};

/// Standard network SIS (opinions frozen at zero).
SisTrajectory network_sis_baseline(const std::vector<double>& p0, const NetworkModel& m,
                                   const IntegrationConfig& cfg = {});

enum class ConsensusOutcome { AGREEMENT_AVERSE, AGREEMENT_SEEKING, DISSENSUS, NEUTRAL };

std::string_view to_string(ConsensusOutcome o);

struct ConsensusReport {
  /// -1, 0 or +1 per node (|x| < 1e-8 counts as 0).
  std::vector<int> sign_pattern;
  ConsensusOutcome outcome;
  /// Steady-state p_j minus the network SIS steady state from the same p(0).
  std::vector<double> infection_vs_baseline;
  std::vector<double> baseline;
};

/// Classifies the steady-state opinion pattern and compares infection with the
/// network SIS baseline run from the trajectory's initial infection levels.
/// Throws NonConvergence when either run has not converged.
ConsensusReport consensus_report(const NetworkTrajectory& traj, const NetworkModel& m,
                                 const IntegrationConfig& cfg = {});

enum class GraphKind { contact, communication };

/// Parses the edge-list format:
///
///   n=<count>
///   j k w        (0-indexed node ids, signed weight; '#' starts a comment)
///
/// Each line sets both (j,k) and (k,j). Diagonal entries default to 1 unless a
/// `j j w` line overrides them. A pair listed twice with different weights is
/// rejected, as are negative weights in contact graphs.
SquareMatrix parse_edge_list(std::string_view text, GraphKind kind);
SquareMatrix load_edge_list(const std::filesystem::path& path, GraphKind kind);

}  // namespace nodsis
