#pragma once

#include <array>
#include <complex>
#include <string>
#include <string_view>

namespace nodsis {

/// Names of the scalar model constants, used by parameter sweeps and the CLI.
enum class Param { beta_bar, delta, k_p, k_x, u0, tau_x };

std::string_view to_string(Param which);
/// Accepts the canonical names plus the short CLI aliases (beta, kp, kx, taux).
Param param_from_string(std::string_view name);

/// Constants of the scalar opinion-epidemic model.
///
/// Validated on construction: beta_bar, delta, tau_x > 0 and k_p, k_x, u0 >= 0.
/// The threshold condition u0 < 1 and k_p + u0 > 1 is not enforced; it is exposed through
/// assumption1_holds() so that analysis routines can refuse to run outside it.
class ModelParams {
 public:
  ModelParams(double beta_bar, double delta, double k_p, double k_x, double u0,
              double tau_x = 1.0);

  double beta_bar() const { return beta_bar_; }
  double delta() const { return delta_; }
  double k_p() const { return k_p_; }
  double k_x() const { return k_x_; }
  double u0() const { return u0_; }
  double tau_x() const { return tau_x_; }

  double get(Param which) const;
  /// Copy with one constant replaced (re-validated).
  ModelParams with(Param which, double value) const;

  bool assumption1_holds() const { return u0_ < 1.0 && k_p_ + u0_ > 1.0; }
  /// Weak peer pressure: the nullcline f1 is convex.
  bool weak_peer_pressure() const { return k_x_ < 1.0 / 3.0; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double beta_bar_;
  double delta_;
  double k_p_;
  double k_x_;
  double u0_;
  double tau_x_;
};

/// A point (p, x) of the trapping region [0,1] x [-1,1].
class State {
 public:
  State(double p, double x);

  double p() const { return p_; }
  double x() const { return x_; }

  static bool in_region(double p, double x);

  friend bool operator==(const State&, const State&) = default;

 private:
  double p_;
  double x_;
};

struct Derivative {
  double dp = 0.0;
  double dx = 0.0;

  double max_norm() const;
};

using Eigenvalues = std::array<std::complex<double>, 2>;

struct Jacobian2x2 {
  double j11 = 0.0;
  double j12 = 0.0;
  double j21 = 0.0;
  double j22 = 0.0;

  double trace() const { return j11 + j22; }
  double determinant() const { return j11 * j22 - j12 * j21; }
  /// Roots of the characteristic polynomial, ordered by decreasing real part.
  Eigenvalues eigenvalues() const;
};

/// Net urgency k_p p + k_x x^2 + u0.
double urgency(double p, double x, const ModelParams& params);

/// Right-hand side of the coupled infection / opinion dynamics.
Derivative nodsis_vector_field(const State& s, const ModelParams& params);

/// Same field evaluated on raw coordinates; used by integrators whose
/// intermediate stages may sit marginally outside the region.
Derivative nodsis_vector_field(double p, double x, const ModelParams& params);

/// Opinion-free SIS baseline beta_bar * alpha * (1 - p) p - delta p.
double sis_vector_field(double p, const ModelParams& params, double alpha = 1.0);

/// Half-width of the excluded band at x = +-1 for f1 and f2.
inline constexpr double kNullclineEdge = 1e-9;

/// arctanh(x) / x with its removable singularity at 0 filled in.
double arctanh_ratio(double x);

/// p-coordinate of the opinion nullcline. Throws DomainError outside
/// (-1 + 1e-9, 1 - 1e-9) and ParameterError when k_p = 0.
double f1(double x, const ModelParams& params);

/// f1 minus the endemic p-nullcline; roots are the opinions of opinionated
/// endemic equilibria.
double f2(double x, const ModelParams& params);

/// Closed-form Jacobian of nodsis_vector_field.
Jacobian2x2 analytic_jacobian(const State& s, const ModelParams& params);

/// 1 - tanh(y)^2, finite for all y.
double sech2(double y);

}  // namespace nodsis
