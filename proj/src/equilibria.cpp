#include "nodsis/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "nodsis/errors.hpp"
#include "nodsis/roots.hpp"

namespace nodsis {

std::string_view to_string(EquilibriumClass cls) {
  switch (cls) {
    case EquilibriumClass::IIFE: return "IIFE";
    case EquilibriumClass::IEE: return "IEE";
    case EquilibriumClass::OEE_PLUS: return "OEE_PLUS";
    case EquilibriumClass::OEE_MINUS: return "OEE_MINUS";
    case EquilibriumClass::OIFE_PLUS: return "OIFE_PLUS";
    case EquilibriumClass::OIFE_MINUS: return "OIFE_MINUS";
  }
  return "?";
}

EquilibriumClass equilibrium_class_from_string(std::string_view name) {
  for (auto cls : {EquilibriumClass::IIFE, EquilibriumClass::IEE, EquilibriumClass::OEE_PLUS,
                   EquilibriumClass::OEE_MINUS, EquilibriumClass::OIFE_PLUS,
                   EquilibriumClass::OIFE_MINUS}) {
    if (to_string(cls) == name) return cls;
  }
  throw ParameterError("unknown equilibrium class '" + std::string(name) + "'");
}

std::string_view to_string(Stability s) {
  switch (s) {
    case Stability::stable: return "stable";
    case Stability::unstable: return "unstable";
    case Stability::marginal: return "marginal";
  }
  return "?";
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::PRE_TRANSCRITICAL: return "PRE_TRANSCRITICAL";
    case Regime::SIS_LIKE: return "SIS_LIKE";
    case Regime::COEXISTENCE: return "COEXISTENCE";
    case Regime::BISTABLE_OPINIONATED: return "BISTABLE_OPINIONATED";
  }
  return "?";
}

Stability stability_from_eigenvalues(const Eigenvalues& ev) {
  const double r0 = ev[0].real();
  const double r1 = ev[1].real();
  if (r0 < -kMarginalBand && r1 < -kMarginalBand) return Stability::stable;
  if (r0 > kMarginalBand || r1 > kMarginalBand) return Stability::unstable;
  return Stability::marginal;
}

Stability classify_stability(const Equilibrium& eq) {
  if (!(eq.residual < kResidualTol)) {
    std::ostringstream msg;
    msg << "classify_stability: residual " << eq.residual << " at (" << eq.state.p() << ", "
        << eq.state.x() << ") is not below " << kResidualTol;
    throw NotAnEquilibrium(msg.str());
  }
  return stability_from_eigenvalues(eq.eigenvalues);
}

Equilibrium make_equilibrium(const State& s, EquilibriumClass cls, const ModelParams& params) {
  const Eigenvalues ev = analytic_jacobian(s, params).eigenvalues();
  return Equilibrium{s, cls, ev, stability_from_eigenvalues(ev),
                     nodsis_vector_field(s, params).max_norm()};
}

double beta_star(const ModelParams& params) {
  const double denom = params.k_p() + params.u0() - 1.0;
  if (!(denom > 0.0)) {
    std::ostringstream msg;
    msg << "beta_star undefined: k_p + u0 - 1 = " << denom << " is not positive";
    throw RegimeError(msg.str());
  }
  return params.delta() * (params.k_p() / denom);
}

namespace {

constexpr double kLo = -1.0 + 2.0 * kNullclineEdge;
constexpr double kHi = 1.0 - 2.0 * kNullclineEdge;
constexpr double kFeasibleSlack = 1e-12;

/// Opinion-nullcline residual that stays meaningful when k_p = 0:
/// arctanh(x)/x - k_x x^2 - u0 - k_p p.
double opinion_balance(double x, double p, const ModelParams& params) {
  return arctanh_ratio(x) - params.k_x() * x * x - params.u0() - params.k_p() * p;
}

double endemic_p(double x, const ModelParams& params) {
  return 1.0 - params.delta() / (params.beta_bar() * (1.0 + x));
}

/// Clamps p into [0,1] when within slack; nullopt when clearly outside.
std::optional<double> feasible_p(double p) {
  if (p < -kFeasibleSlack || p > 1.0 + kFeasibleSlack) return std::nullopt;
  return std::clamp(p, 0.0, 1.0);
}

EquilibriumClass oife_class(double x) {
  return x > 0.0 ? EquilibriumClass::OIFE_PLUS : EquilibriumClass::OIFE_MINUS;
}

EquilibriumClass oee_class_by_sign(double x) {
  return x > 0.0 ? EquilibriumClass::OEE_PLUS : EquilibriumClass::OEE_MINUS;
}

struct Candidate {
  double p;
  double x;
  EquilibriumClass cls;
};

std::vector<double> opinion_roots(const roots::ScalarFn& fn) {
  return roots::scan_roots(fn, kLo, kHi);
}

}  // namespace

std::vector<double> oife_opinions(const ModelParams& params) {
  if (params.k_p() == 0.0) return {};
  return opinion_roots([&](double x) { return f1(x, params); });
}

std::vector<double> oee_opinions(const ModelParams& params) {
  std::vector<double> xs;
  if (params.k_p() == 0.0) {
    for (double x : opinion_roots([&](double x) { return opinion_balance(x, 0.0, params); })) {
      if (feasible_p(endemic_p(x, params))) xs.push_back(x);
    }
    return xs;
  }
  for (double x : opinion_roots([&](double x) { return f2(x, params); })) {
    if (feasible_p(endemic_p(x, params))) xs.push_back(x);
  }
  return xs;
}

std::vector<Equilibrium> find_equilibria(const ModelParams& params) {
  std::vector<Candidate> candidates;
  candidates.push_back({0.0, 0.0, EquilibriumClass::IIFE});

  if (params.beta_bar() > params.delta()) {
    const double p_iee = (params.beta_bar() - params.delta()) / params.beta_bar();
    if (p_iee > kZeroTol) candidates.push_back({p_iee, 0.0, EquilibriumClass::IEE});
  }

  // With k_p = 0 the opinion nullcline no longer depends on p, so its roots
  // give infection-free and endemic equilibria at the same opinion levels.
  const std::vector<double> oife_x =
      params.k_p() == 0.0
          ? opinion_roots([&](double x) { return opinion_balance(x, 0.0, params); })
          : oife_opinions(params);
  for (double x : oife_x) {
    if (std::abs(x) > kZeroTol) candidates.push_back({0.0, x, oife_class(x)});
  }

  const std::vector<double> oee_x = oee_opinions(params);
  for (double x : oee_x) {
    const double p = *feasible_p(endemic_p(x, params));
    if (p <= kZeroTol || std::abs(x) <= kZeroTol) continue;
    EquilibriumClass cls = oee_class_by_sign(x);
    if (oee_x.size() == 2) {
      cls = x == oee_x.back() ? EquilibriumClass::OEE_PLUS : EquilibriumClass::OEE_MINUS;
    }
    candidates.push_back({p, x, cls});
  }

  std::vector<Equilibrium> out;
  for (const Candidate& c : candidates) {
    const bool duplicate = std::any_of(out.begin(), out.end(), [&](const Equilibrium& e) {
      return std::hypot(e.state.p() - c.p, e.state.x() - c.x) <= kZeroTol;
    });
    if (!duplicate) out.push_back(make_equilibrium(State(c.p, c.x), c.cls, params));
  }
  std::sort(out.begin(), out.end(), [](const Equilibrium& a, const Equilibrium& b) {
    if (a.state.x() != b.state.x()) return a.state.x() < b.state.x();
    return a.state.p() < b.state.p();
  });
  return out;
}

double f2_minimum(const ModelParams& params) {
  return roots::grid_minimize([&](double x) { return f2(x, params); }, kLo, kHi).value;
}

std::optional<double> find_beta0(const ModelParams& params) {
  if (!params.weak_peer_pressure()) {
    throw RegimeError("find_beta0 requires k_x < 1/3 (convex f2)");
  }
  if (!(params.u0() < 1.0)) throw AssumptionViolation("find_beta0 requires u0 < 1");
  if (params.k_p() == 0.0) throw RegimeError("find_beta0 requires k_p > 0");

  const double lo = params.delta();
  const double hi =
      params.k_p() + params.u0() > 1.0 ? beta_star(params) : std::max(1.0, params.delta());
  if (!(hi > lo)) return std::nullopt;

  auto min_f2 = [&](double beta) { return f2_minimum(params.with(Param::beta_bar, beta)); };
  const double g_lo = min_f2(lo);
  const double g_hi = min_f2(hi);
  if (!(g_lo > 0.0) || !(g_hi <= 0.0)) return std::nullopt;
  return roots::bisect(min_f2, lo, hi, 1e-10);
}

RegimeReport regime(const ModelParams& params) {
  if (!params.assumption1_holds()) {
    std::ostringstream msg;
    msg << "regime analysis needs u0 < 1 and k_p + u0 > 1 (u0 = " << params.u0()
        << ", k_p + u0 = " << params.k_p() + params.u0() << ")";
    throw AssumptionViolation(msg.str());
  }
  if (!params.weak_peer_pressure()) {
    throw AssumptionViolation("regime labels require weak peer pressure k_x < 1/3");
  }

  RegimeReport report{Regime::PRE_TRANSCRITICAL,
                      Thresholds{params.delta(), beta_star(params), find_beta0(params)},
                      find_equilibria(params)};

  for (const Equilibrium& e : report.equilibria) {
    if (e.stability == Stability::marginal) {
      std::ostringstream msg;
      msg << "regime query too close to a bifurcation: " << to_string(e.cls)
          << " is marginally stable at beta_bar = " << params.beta_bar();
      throw RegimeError(msg.str());
    }
  }

  const auto n_oee = std::count_if(report.equilibria.begin(), report.equilibria.end(),
                                   [](const Equilibrium& e) {
                                     return e.cls == EquilibriumClass::OEE_PLUS ||
                                            e.cls == EquilibriumClass::OEE_MINUS;
                                   });
  const double beta = params.beta_bar();
  if (beta < params.delta()) {
    report.regime = Regime::PRE_TRANSCRITICAL;
  } else if (n_oee == 0) {
    report.regime = Regime::SIS_LIKE;
  } else if (n_oee == 2) {
    report.regime = beta < report.thresholds.beta_star ? Regime::COEXISTENCE
                                                       : Regime::BISTABLE_OPINIONATED;
  } else {
    throw RegimeError("regime query too close to the fold: f2 has a single admissible root");
  }
  return report;
}

InfectionOrdering infection_ordering(const ModelParams& params) {
  const RegimeReport report = regime(params);
  if (report.regime != Regime::BISTABLE_OPINIONATED) {
    throw RegimeError(std::string("infection_ordering requires BISTABLE_OPINIONATED, got ") +
                      std::string(to_string(report.regime)));
  }
  InfectionOrdering out{};
  for (const Equilibrium& e : report.equilibria) {
    if (e.cls == EquilibriumClass::OEE_PLUS) out.x_plus = e.state.x();
    if (e.cls == EquilibriumClass::OEE_MINUS) out.x_minus = e.state.x();
  }
  out.p_ee = (params.beta_bar() - params.delta()) / params.beta_bar();
  out.p_plus = endemic_p(out.x_plus, params);
  out.p_minus = endemic_p(out.x_minus, params);

  auto sign = [](double v) { return (v > 0.0) - (v < 0.0); };
  if (sign(out.p_plus - out.p_ee) != sign(out.x_plus) ||
      sign(out.p_minus - out.p_ee) != sign(out.x_minus)) {
    throw Error("infection_ordering: sign(p - p_EE) disagrees with sign(x)");
  }
  return out;
}

}  // namespace nodsis
