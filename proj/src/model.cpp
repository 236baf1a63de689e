#include "nodsis/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nodsis/errors.hpp"

namespace nodsis {

std::string_view to_string(Param which) {
  switch (which) {
    case Param::beta_bar: return "beta_bar";
    case Param::delta: return "delta";
    case Param::k_p: return "k_p";
    case Param::k_x: return "k_x";
    case Param::u0: return "u0";
    case Param::tau_x: return "tau_x";
  }
  return "?";
}

Param param_from_string(std::string_view name) {
  if (name == "beta_bar" || name == "beta") return Param::beta_bar;
  if (name == "delta") return Param::delta;
  if (name == "k_p" || name == "kp") return Param::k_p;
  if (name == "k_x" || name == "kx") return Param::k_x;
  if (name == "u0") return Param::u0;
  if (name == "tau_x" || name == "taux") return Param::tau_x;
  throw ParameterError("unknown model parameter '" + std::string(name) + "'");
}

namespace {

void require(bool ok, const char* what, double value) {
  if (!ok) {
    std::ostringstream msg;
    msg << "invalid model parameter: " << what << " (got " << value << ")";
    throw ParameterError(msg.str());
  }
}

}  // namespace

ModelParams::ModelParams(double beta_bar, double delta, double k_p, double k_x,
                         double u0, double tau_x)
    : beta_bar_(beta_bar), delta_(delta), k_p_(k_p), k_x_(k_x), u0_(u0), tau_x_(tau_x) {
  require(std::isfinite(beta_bar) && beta_bar > 0.0, "beta_bar > 0", beta_bar);
  require(std::isfinite(delta) && delta > 0.0, "delta > 0", delta);
  require(std::isfinite(tau_x) && tau_x > 0.0, "tau_x > 0", tau_x);
  require(std::isfinite(k_p) && k_p >= 0.0, "k_p >= 0", k_p);
  require(std::isfinite(k_x) && k_x >= 0.0, "k_x >= 0", k_x);
  require(std::isfinite(u0) && u0 >= 0.0, "u0 >= 0", u0);
}

double ModelParams::get(Param which) const {
  switch (which) {
    case Param::beta_bar: return beta_bar_;
    case Param::delta: return delta_;
    case Param::k_p: return k_p_;
    case Param::k_x: return k_x_;
    case Param::u0: return u0_;
    case Param::tau_x: return tau_x_;
  }
  return 0.0;
}

ModelParams ModelParams::with(Param which, double value) const {
  ModelParams out = *this;
  switch (which) {
    case Param::beta_bar: out.beta_bar_ = value; break;
    case Param::delta: out.delta_ = value; break;
    case Param::k_p: out.k_p_ = value; break;
    case Param::k_x: out.k_x_ = value; break;
    case Param::u0: out.u0_ = value; break;
    case Param::tau_x: out.tau_x_ = value; break;
  }
  return ModelParams(out.beta_bar_, out.delta_, out.k_p_, out.k_x_, out.u0_, out.tau_x_);
}

bool State::in_region(double p, double x) {
  return p >= 0.0 && p <= 1.0 && x >= -1.0 && x <= 1.0;
}

State::State(double p, double x) : p_(p), x_(x) {
  if (!in_region(p, x)) {
    std::ostringstream msg;
    msg << "state (" << p << ", " << x << ") outside [0,1] x [-1,1]";
    throw ParameterError(msg.str());
  }
}

double Derivative::max_norm() const { return std::max(std::abs(dp), std::abs(dx)); }

Eigenvalues Jacobian2x2::eigenvalues() const {
  const double half_trace = 0.5 * trace();
  // (j11 - j22)^2 / 4 + j12 j21 avoids cancellation in half_trace^2 - det.
  const double half_gap = 0.5 * (j11 - j22);
  const double disc = half_gap * half_gap + j12 * j21;
  if (disc >= 0.0) {
    const double r = std::sqrt(disc);
    return {std::complex<double>(half_trace + r, 0.0),
            std::complex<double>(half_trace - r, 0.0)};
  }
  const double im = std::sqrt(-disc);
  return {std::complex<double>(half_trace, im), std::complex<double>(half_trace, -im)};
}

double urgency(double p, double x, const ModelParams& params) {
  return params.k_p() * p + params.k_x() * x * x + params.u0();
}

Derivative nodsis_vector_field(double p, double x, const ModelParams& params) {
  Derivative d;
  d.dp = params.beta_bar() * (1.0 + x) * (1.0 - p) * p - params.delta() * p;
  d.dx = (-x + std::tanh(urgency(p, x, params) * x)) / params.tau_x();
  return d;
}

Derivative nodsis_vector_field(const State& s, const ModelParams& params) {
  return nodsis_vector_field(s.p(), s.x(), params);
}

double sis_vector_field(double p, const ModelParams& params, double alpha) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("sis_vector_field: p outside [0,1]");
  if (!(alpha > 0.0)) throw ParameterError("sis_vector_field: alpha must be positive");
  return params.beta_bar() * alpha * (1.0 - p) * p - params.delta() * p;
}

double arctanh_ratio(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 + x2 / 3.0 + x2 * x2 / 5.0;
  }
  return std::atanh(x) / x;
}

namespace {

void check_nullcline_domain(double x, const char* fn) {
  if (!(std::abs(x) < 1.0 - kNullclineEdge)) {
    std::ostringstream msg;
    msg << fn << ": x = " << x << " outside (-1 + 1e-9, 1 - 1e-9)";
    throw DomainError(msg.str());
  }
}

}  // namespace

double f1(double x, const ModelParams& params) {
  check_nullcline_domain(x, "f1");
  if (params.k_p() == 0.0) throw ParameterError("f1: k_p = 0 makes the nullcline degenerate");
  return (arctanh_ratio(x) - params.k_x() * x * x - params.u0()) / params.k_p();
}

double f2(double x, const ModelParams& params) {
  check_nullcline_domain(x, "f2");
  return f1(x, params) + params.delta() / (params.beta_bar() * (1.0 + x)) - 1.0;
}

double sech2(double y) {
  const double t = std::tanh(y);
  return 1.0 - t * t;
}

Jacobian2x2 analytic_jacobian(const State& s, const ModelParams& params) {
  const double p = s.p();
  const double x = s.x();
  const double u = urgency(p, x, params);
  const double sh = sech2(u * x);
  const double inv_tau = 1.0 / params.tau_x();
  Jacobian2x2 j;
  j.j11 = params.beta_bar() * (1.0 + x) * (1.0 - 2.0 * p) - params.delta();
  j.j12 = params.beta_bar() * (1.0 - p) * p;
  j.j21 = inv_tau * params.k_p() * x * sh;
  j.j22 = inv_tau * (-1.0 + (2.0 * params.k_x() * x * x + u) * sh);
  return j;
}

}  // namespace nodsis
