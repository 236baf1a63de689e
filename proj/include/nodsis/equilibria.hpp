#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "nodsis/model.hpp"

namespace nodsis {

/// IIFE/IEE: indifferent (x = 0) infection-free / endemic.
/// OEE/OIFE: opinionated endemic / infection-free.
enum class EquilibriumClass { IIFE, IEE, OEE_PLUS, OEE_MINUS, OIFE_PLUS, OIFE_MINUS };

enum class Stability { stable, unstable, marginal };

std::string_view to_string(EquilibriumClass cls);
EquilibriumClass equilibrium_class_from_string(std::string_view name);
std::string_view to_string(Stability s);

/// Tolerance used when deciding that p or x "is zero".
inline constexpr double kZeroTol = 1e-8;
/// Real parts inside (-kMarginalBand, kMarginalBand) count as marginal.
inline constexpr double kMarginalBand = 1e-9;
inline constexpr double kResidualTol = 1e-10;

struct Equilibrium {
  State state;
  EquilibriumClass cls;
  Eigenvalues eigenvalues;
  Stability stability;
  /// Max-norm of the vector field at `state`.
  double residual;

  double leading_real_part() const { return eigenvalues[0].real(); }
};

/// Stability verdict from eigenvalue real parts.
Stability stability_from_eigenvalues(const Eigenvalues& ev);

/// Linearization verdict for a located equilibrium. Throws NotAnEquilibrium
/// when the stored residual is not below 1e-10.
Stability classify_stability(const Equilibrium& eq);

/// Builds an Equilibrium at `s`: Jacobian eigenvalues, verdict and residual.
Equilibrium make_equilibrium(const State& s, EquilibriumClass cls, const ModelParams& params);

/// Second transcritical threshold delta k_p / (k_p + u0 - 1). Throws
/// RegimeError when the denominator is not positive.
double beta_star(const ModelParams& params);

/// Every equilibrium of the scalar model inside the trapping region, sorted by
/// x then p.
///
/// IIFE always; IEE when beta_bar > delta; OIFE at the roots of f1; OEE at the
/// roots of f2 whose p-coordinate lies in [0,1]. Roots come from a 4096-point
/// sign-change scan refined by bisection. When f2 has exactly two admissible
/// roots the larger one is OEE_PLUS and the smaller OEE_MINUS, even if both
/// share a sign (this happens between the fold and beta_star); otherwise OEE
/// and OIFE are labelled by the sign of x.
std::vector<Equilibrium> find_equilibria(const ModelParams& params);

/// Opinions of the opinionated infection-free equilibria (roots of f1). Empty
/// when k_p = 0 (use find_equilibria, which handles that case).
std::vector<double> oife_opinions(const ModelParams& params);

/// Opinions of the opinionated endemic equilibria (roots of f2 with p in [0,1]).
std::vector<double> oee_opinions(const ModelParams& params);

/// min over x of f2 at the given constants (4096-point grid + golden section).
double f2_minimum(const ModelParams& params);

/// Fold value of beta_bar at which f2 first acquires roots.
///
/// Requires k_x < 1/3, u0 < 1 and k_p > 0 (RegimeError otherwise). Bisects on
/// the sign of f2_minimum over (delta, beta_star), or (delta, 1] when
/// beta_star is undefined. Returns nullopt when the minimum does not cross zero.
std::optional<double> find_beta0(const ModelParams& params);

enum class Regime { PRE_TRANSCRITICAL, SIS_LIKE, COEXISTENCE, BISTABLE_OPINIONATED };

std::string_view to_string(Regime r);

struct Thresholds {
  double delta;
  double beta_star;
  std::optional<double> beta_0;
};

struct RegimeReport {
  Regime regime;
  Thresholds thresholds;
  std::vector<Equilibrium> equilibria;
};

/// Parameter regime of the weak-peer-pressure analysis.
///
/// Throws AssumptionViolation unless u0 < 1, k_p + u0 > 1 and k_x < 1/3, and
/// RegimeError when any equilibrium is marginal (query at a bifurcation value).
RegimeReport regime(const ModelParams& params);

struct InfectionOrdering {
  double p_minus;
  double p_ee;
  double p_plus;
  double x_minus;
  double x_plus;
};

/// Endemic infection levels of OEE-, the SIS endemic state and OEE+.
/// Requires the BISTABLE_OPINIONATED regime (RegimeError otherwise).
InfectionOrdering infection_ordering(const ModelParams& params);

}  // namespace nodsis
