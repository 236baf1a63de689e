#include "nodsis/integrator.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "nodsis/detail/rk4.hpp"
#include "nodsis/errors.hpp"

namespace nodsis {

void IntegrationConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("integration: dt must be > 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw ParameterError("integration: t_end must be > 0");
  }
  if (!(convergence_tol > 0.0)) {
    throw ParameterError("integration: convergence_tol must be > 0");
  }
  if (record_stride <= 0) throw ParameterError("integration: record_stride must be >= 1");
}

long long IntegrationConfig::total_steps() const {
  return static_cast<long long>(std::llround(t_end / dt));
}

namespace {

std::optional<Equilibrium> nearest_within(const State& s, const std::vector<Equilibrium>& known,
                                          double radius) {
  std::optional<Equilibrium> best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const Equilibrium& e : known) {
    const double d = std::hypot(e.state.p() - s.p(), e.state.x() - s.x());
    if (d <= radius && d < best_dist) {
      best = e;
      best_dist = d;
    }
  }
  return best;
}

}  // namespace

Trajectory integrate(const State& s0, const ModelParams& params, const IntegrationConfig& cfg,
                     const std::vector<Equilibrium>& known) {
  auto field = [&](const std::array<double, 2>& s, std::array<double, 2>& out) {
    const Derivative d = nodsis_vector_field(s[0], s[1], params);
    out[0] = d.dp;
    out[1] = d.dx;
  };
  auto bounds = [](std::size_t i) {
    return i == 0 ? detail::Bounds{0.0, 1.0} : detail::Bounds{-1.0, 1.0};
  };
  auto raw = detail::run_rk4(std::array<double, 2>{s0.p(), s0.x()}, field, bounds, cfg);

  Trajectory traj;
  traj.times = std::move(raw.times);
  traj.states.reserve(raw.states.size());
  for (const auto& s : raw.states) traj.states.emplace_back(s[0], s[1]);
  traj.converged = raw.converged;
  traj.max_excursion = raw.max_excursion;
  if (traj.converged) {
    traj.limit = nearest_within(traj.final_state(), known, kMatchRadius);
    traj.anomaly = !traj.limit.has_value();
  }
  return traj;
}

Trajectory integrate(const State& s0, const ModelParams& params, const IntegrationConfig& cfg) {
  return integrate(s0, params, cfg, find_equilibria(params));
}

SignInvariance check_sign_invariance(const Trajectory& traj) {
  if (traj.states.empty() || traj.states.front().x() == 0.0) {
    throw RegimeError("sign invariance not applicable: x(0) = 0 lies on the invariant line");
  }
  const bool positive = traj.states.front().x() > 0.0;
  for (const State& s : traj.states) {
    if (std::abs(s.x()) < 1e-12) continue;
    if ((s.x() > 0.0) != positive) return SignInvariance::violated;
  }
  return SignInvariance::holds;
}

State random_interior_state(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  // 53 random bits, offset by half an ulp so both ends of (0,1) are excluded.
  auto open_unit = [&] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
  const double p = open_unit();
  const double x = 2.0 * open_unit() - 1.0;
  return State(p, x);
}

std::vector<BasinSample> basin_experiment(const ModelParams& params, std::size_t n_samples,
                                          std::uint64_t seed, const IntegrationConfig& cfg) {
  const std::vector<Equilibrium> known = find_equilibria(params);
  std::vector<BasinSample> out;
  out.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const State s0 = random_interior_state(seed, i);
    const Trajectory traj = integrate(s0, params, cfg, known);
    std::optional<EquilibriumClass> cls;
    if (traj.limit) cls = traj.limit->cls;
    out.push_back(BasinSample{i, s0, traj.final_state(), traj.converged, cls, seed});
  }
  return out;
}

}  // namespace nodsis
