#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "nodsis/equilibria.hpp"
#include "nodsis/model.hpp"

namespace nodsis {

/// Drift beyond the region that is clamped silently (and recorded).
inline constexpr double kClampTol = 1e-6;
/// Radius for matching a converged state to a known equilibrium.
inline constexpr double kMatchRadius = 1e-4;

struct IntegrationConfig {
  double dt = 0.01;
  double t_end = 500.0;
  double convergence_tol = 1e-10;
  int record_stride = 10;

  /// Throws ParameterError on non-positive dt, t_end, tolerance or stride.
  void validate() const;
  long long total_steps() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  bool converged = false;
  /// Set when the converged state matched a known equilibrium.
  std::optional<Equilibrium> limit;
  /// Converged but no equilibrium within kMatchRadius.
  bool anomaly = false;
  double max_excursion = 0.0;

  const State& final_state() const { return states.back(); }
};

/// Fixed-step RK4 on the scalar model.
///
/// After each step coordinates outside [0,1] x [-1,1] by at most 1e-6 are
/// clamped back and the excursion is recorded; larger excursions throw
/// InvarianceViolation. Stops early once the max-norm of the field drops below
/// cfg.convergence_tol and matches the final state against find_equilibria.
Trajectory integrate(const State& s0, const ModelParams& params,
                     const IntegrationConfig& cfg = {});

/// Variant that matches the limit against a precomputed equilibrium list.
Trajectory integrate(const State& s0, const ModelParams& params, const IntegrationConfig& cfg,
                     const std::vector<Equilibrium>& known);

enum class SignInvariance { holds, violated };

/// Checks that x(t) keeps the sign of x(0) at every recorded sample. Samples
/// with |x| < 1e-12 are ignored unless a later sample flips sign. Throws
/// RegimeError (not applicable) when x(0) = 0.
SignInvariance check_sign_invariance(const Trajectory& traj);

/// Name of the generator used for random initial conditions.
inline constexpr std::string_view kPrngName = "mt19937_64/seed_seq(seed,index)";
inline constexpr std::uint64_t kDefaultSeed = 42;

/// Deterministic uniform draw from the interior of the trapping region for
/// sample `index` of an experiment seeded with `seed`.
State random_interior_state(std::uint64_t seed, std::uint64_t index);

struct BasinSample {
  std::size_t index;
  State initial;
  State final_state;
  bool converged;
  /// Class of the matched limit; empty when not converged or unmatched.
  std::optional<EquilibriumClass> limit_class;
  std::uint64_t seed;
};

/// Integrates n_samples seeded random initial conditions and records where
/// each one ends up. Non-convergent samples are kept with an empty class.
std::vector<BasinSample> basin_experiment(const ModelParams& params, std::size_t n_samples,
                                          std::uint64_t seed = kDefaultSeed,
                                          const IntegrationConfig& cfg = {});

}  // namespace nodsis
