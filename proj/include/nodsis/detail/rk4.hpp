#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <vector>

#include "nodsis/errors.hpp"
#include "nodsis/integrator.hpp"

namespace nodsis::detail {

/// Box constraint of one state coordinate.
struct Bounds {
  double lo;
  double hi;
};

template <class Vec>
struct RawRun {
  std::vector<double> times;
  std::vector<Vec> states;
  bool converged = false;
  double max_excursion = 0.0;
};

template <class Vec>
double max_abs(const Vec& v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}

/// Classic RK4 with per-step clamping into a box.
///
/// `field(const Vec&, Vec&)` writes the derivative; `bounds(i)` gives the box of
/// coordinate i. The scalar and networked integrators share this loop so that a
/// single-node network reproduces the scalar run exactly.
template <class Vec, class Field, class BoundsFn>
RawRun<Vec> run_rk4(Vec s, Field&& field, BoundsFn&& bounds, const IntegrationConfig& cfg) {
  cfg.validate();
  RawRun<Vec> run;
  const std::size_t n = s.size();
  const long long steps = cfg.total_steps();
  const double dt = cfg.dt;
  const double half = 0.5 * dt;

  Vec k1 = s, k2 = s, k3 = s, k4 = s, tmp = s;
  run.times.push_back(0.0);
  run.states.push_back(s);

  long long step = 0;
  for (;; ++step) {
    field(s, k1);
    if (max_abs(k1) < cfg.convergence_tol) {
      run.converged = true;
      break;
    }
    if (step == steps) break;

    for (std::size_t i = 0; i < n; ++i) tmp[i] = s[i] + half * k1[i];
    field(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = s[i] + half * k2[i];
    field(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = s[i] + dt * k3[i];
    field(tmp, k4);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    for (std::size_t i = 0; i < n; ++i) {
      const Bounds b = bounds(i);
      const double excursion = std::max(b.lo - s[i], s[i] - b.hi);
      if (excursion > 0.0) {
        run.max_excursion = std::max(run.max_excursion, excursion);
        if (excursion > kClampTol) {
          std::ostringstream msg;
          msg << "state left the trapping region by " << excursion << " at t = "
              << static_cast<double>(step + 1) * dt << " (coordinate " << i << "); reduce dt";
          throw InvarianceViolation(msg.str());
        }
        s[i] = std::clamp(s[i], b.lo, b.hi);
      }
    }

    if ((step + 1) % cfg.record_stride == 0) {
      run.times.push_back(static_cast<double>(step + 1) * dt);
      run.states.push_back(s);
    }
  }

  const double t_final = static_cast<double>(step) * dt;
  if (run.times.back() < t_final) {
    run.times.push_back(t_final);
    run.states.push_back(s);
  }
  return run;
}

}  // namespace nodsis::detail
