#include "catch_amalgamated.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "nodsis/errors.hpp"
#include "nodsis/model.hpp"
#include "oracles.hpp"

using namespace nodsis;
using Catch::Approx;

namespace {

ModelParams fig2(double beta = 0.75, double u0 = 0.7) {
  return ModelParams(beta, 0.3, 0.7, 0.3, u0, 1.0);
}

}  // namespace

TEST_CASE("params reject invalid constants", "[model]") {
  CHECK_THROWS_AS(ModelParams(0.0, 0.3, 0.7, 0.3, 0.7), ParameterError);
  CHECK_THROWS_AS(ModelParams(0.5, -0.3, 0.7, 0.3, 0.7), ParameterError);
  CHECK_THROWS_AS(ModelParams(0.5, 0.3, -0.1, 0.3, 0.7), ParameterError);
  CHECK_THROWS_AS(ModelParams(0.5, 0.3, 0.7, -0.3, 0.7), ParameterError);
  CHECK_THROWS_AS(ModelParams(0.5, 0.3, 0.7, 0.3, -0.7), ParameterError);
  CHECK_THROWS_AS(ModelParams(0.5, 0.3, 0.7, 0.3, 0.7, 0.0), ParameterError);
  CHECK_THROWS_AS(ModelParams(std::nan(""), 0.3, 0.7, 0.3, 0.7), ParameterError);
  CHECK_NOTHROW(ModelParams(0.5, 0.3, 0.0, 0.0, 0.0));
}

TEST_CASE("assumption 1 is reported, not enforced", "[model]") {
  CHECK(fig2().assumption1_holds());
  CHECK_FALSE(fig2(0.75, 0.2).assumption1_holds());
  CHECK_FALSE(ModelParams(0.5, 0.3, 0.7, 0.3, 1.2).assumption1_holds());
  CHECK(fig2().weak_peer_pressure());
  CHECK_FALSE(ModelParams(0.75, 0.3, 0.7, 0.7, 0.9).weak_peer_pressure());
}

TEST_CASE("with() replaces one constant and revalidates", "[model]") {
  const ModelParams p = fig2();
  const ModelParams q = p.with(Param::u0, 0.2);
  CHECK(q.u0() == 0.2);
  CHECK(q.beta_bar() == p.beta_bar());
  CHECK_THROWS_AS(p.with(Param::delta, 0.0), ParameterError);
  CHECK(param_from_string("beta") == Param::beta_bar);
  CHECK(param_from_string("k_x") == Param::k_x);
  CHECK_THROWS_AS(param_from_string("gamma"), ParameterError);
}

TEST_CASE("state must lie in the unit region", "[model]") {
  CHECK_NOTHROW(State(0.0, -1.0));
  CHECK_NOTHROW(State(1.0, 1.0));
  CHECK_THROWS_AS(State(-1e-12, 0.0), ParameterError);
  CHECK_THROWS_AS(State(0.5, 1.0000001), ParameterError);
  CHECK_THROWS_AS(State(std::nan(""), 0.0), ParameterError);
}

TEST_CASE("urgency examples", "[model]") {
  const ModelParams m = fig2();
  CHECK(urgency(0.0, 0.0, m) == Approx(0.7).margin(1e-15));
  CHECK(urgency(1.0, 0.0, m) == Approx(1.4).margin(1e-15));
  CHECK(urgency(0.5, -0.5, m) == Approx(1.125).margin(1e-15));
}

TEST_CASE("vector field examples", "[model]") {
  const Derivative at_origin = nodsis_vector_field(State(0, 0), fig2());
  CHECK(at_origin.dp == 0.0);
  CHECK(at_origin.dx == 0.0);

  const ModelParams low = fig2(0.36);
  const Derivative at_iee = nodsis_vector_field(State(1.0 - 0.3 / 0.36, 0.0), low);
  CHECK(std::abs(at_iee.dp) < 1e-16);
  CHECK(at_iee.dx == 0.0);
  CHECK(1.0 - 0.3 / 0.36 == Approx(1.0 / 6.0).margin(1e-15));

  const Derivative d = nodsis_vector_field(State(0.5, 1.0), fig2());
  CHECK(d.dp == Approx(0.225).margin(1e-15));
  CHECK(d.dx == Approx(-1.0 + std::tanh(1.35)).margin(1e-15));
  CHECK(d.dx == Approx(-0.12595).margin(5e-5));

  // Independent copy of the field agrees on random points.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> up(0.0, 1.0), ux(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double p = up(rng), x = ux(rng);
    const auto ref = oracle::field(p, x, fig2());
    const Derivative got = nodsis_vector_field(p, x, fig2());
    CHECK(got.dp == Approx(ref[0]).margin(1e-15));
    CHECK(got.dx == Approx(ref[1]).margin(1e-15));
  }
}

TEST_CASE("sis field vanishes at its equilibria", "[model]") {
  const ModelParams m = fig2();
  CHECK(sis_vector_field(0.0, m) == 0.0);
  CHECK(std::abs(sis_vector_field(0.6, m)) < 1e-16);
  CHECK(std::abs(sis_vector_field(1.0 - 0.3 / 0.5, fig2(0.5))) < 1e-16);
  CHECK(sis_vector_field(0.5, m, 2.0) == Approx(0.75 * 2 * 0.25 - 0.15));
  CHECK_THROWS_AS(sis_vector_field(0.5, m, 0.0), ParameterError);
  CHECK_THROWS_AS(sis_vector_field(1.5, m), ParameterError);
}

TEST_CASE("boundary behaviour of the field keeps the region invariant", "[model][property]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.01, 0.99), up(0.0, 1.0), ux(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const ModelParams m(u(rng), u(rng), u(rng), u(rng), u(rng), 0.5 + u(rng));
    for (int i = 0; i <= 100; ++i) {
      const double s = i / 100.0;
      CHECK(nodsis_vector_field(0.0, -1.0 + 2 * s, m).dp == 0.0);
      CHECK(nodsis_vector_field(1.0, -1.0 + 2 * s, m).dp <= 0.0);
      CHECK(nodsis_vector_field(s, -1.0, m).dx >= 0.0);
      CHECK(nodsis_vector_field(s, 1.0, m).dx <= 0.0);
      const Derivative d = nodsis_vector_field(up(rng), ux(rng), m);
      CHECK(std::isfinite(d.dp));
      CHECK(std::isfinite(d.dx));
    }
  }
}

TEST_CASE("f1 and f2 values at the origin", "[model][nullcline]") {
  CHECK(f1(0.0, fig2()) == Approx(3.0 / 7.0).margin(1e-15));
  CHECK(f1(0.0, fig2(0.75, 0.2)) == Approx(8.0 / 7.0).margin(1e-15));
  CHECK(f2(0.0, fig2()) == Approx(0.3 / 0.7 + 0.3 / 0.75 - 1.0).margin(1e-15));
}

TEST_CASE("arctanh ratio is continuous across the series cutoff", "[model][nullcline]") {
  for (double x : {1e-4 * (1 - 1e-12), 1e-4, 1e-4 * (1 + 1e-12), 5e-5, 1e-8, 0.0}) {
    const double ref = x == 0.0 ? 1.0 : std::atanh(x) / x;
    CHECK(arctanh_ratio(x) == Approx(ref).epsilon(1e-15));
    CHECK(arctanh_ratio(-x) == arctanh_ratio(x));
  }
  // The nullcline agrees with the direct formula away from 0.
  for (double x = -0.99; x <= 0.99; x += 0.01) {
    CHECK(f1(x, fig2()) == Approx(oracle::nullcline_p(x, fig2())).margin(1e-13));
  }
}

TEST_CASE("nullclines reject the domain edge and k_p = 0", "[model][nullcline]") {
  CHECK_THROWS_AS(f1(1.0, fig2()), DomainError);
  CHECK_THROWS_AS(f1(-1.0, fig2()), DomainError);
  CHECK_THROWS_AS(f1(1.0 - 1e-10, fig2()), DomainError);
  CHECK_THROWS_AS(f2(-1.0, fig2()), DomainError);
  CHECK_THROWS_AS(f2(std::nan(""), fig2()), DomainError);
  CHECK_NOTHROW(f1(1.0 - 2e-9, fig2()));
  CHECK_THROWS_AS(f1(0.3, ModelParams(0.5, 0.3, 0.0, 0.3, 0.7)), ParameterError);
}

TEST_CASE("f2 sign changes match a grid scan", "[model][nullcline]") {
  const double lo = -1.0 + 2e-9, hi = 1.0 - 2e-9;
  const auto bistable =
      oracle::grid_roots([](double x) { return f2(x, fig2()); }, lo, hi, 20000);
  REQUIRE(bistable.size() == 2);
  CHECK(bistable[0] < 0.0);
  CHECK(bistable[1] > 0.0);

  const ModelParams sis(0.25, 0.3, 0.7, 0.3, 0.2);
  CHECK(oracle::grid_roots([&](double x) { return f2(x, sis); }, lo, hi, 20000).empty());
}

TEST_CASE("strong peer pressure gives two symmetric f1 root pairs", "[model][nullcline]") {
  const ModelParams fig3(0.75, 0.3, 0.7, 0.7, 0.9);
  const auto roots =
      oracle::grid_roots([&](double x) { return f1(x, fig3); }, -1.0 + 2e-9, 1.0 - 2e-9, 20000);
  REQUIRE(roots.size() == 4);
  CHECK(roots[0] == Approx(-roots[3]).margin(1e-10));
  CHECK(roots[1] == Approx(-roots[2]).margin(1e-10));
  CHECK(roots[0] == Approx(-0.73449).margin(1e-5));
  CHECK(roots[1] == Approx(-0.62214).margin(1e-5));
}

TEST_CASE("f1 is even, convex and positive under weak peer pressure", "[model][property]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int tested = 0;
  while (tested < 25) {
    const double kp = u(rng), kx = u(rng) / 3.0, u0 = u(rng);
    if (kp <= 0.0 || kx <= 0.0 || u0 <= 0.0 || !(kp + u0 > 1.0)) continue;
    ++tested;
    const ModelParams m(0.5, 0.3, kp, kx, u0);
    const int n = 10000;
    const double h = (2.0 - 4e-6) / n;
    double min_f1 = 1e300, min_dd1 = 1e300, min_dd2 = 1e300;
    for (int i = 1; i < n; ++i) {
      const double x = -1.0 + 2e-6 + i * h;
      const double a = f1(x - h, m), b = f1(x, m), c = f1(x + h, m);
      min_f1 = std::min(min_f1, b);
      min_dd1 = std::min(min_dd1, a - 2 * b + c);
      min_dd2 = std::min(min_dd2, f2(x - h, m) - 2 * f2(x, m) + f2(x + h, m));
      REQUIRE(std::abs(f1(x, m) - f1(-x, m)) < 1e-12);
    }
    CHECK(min_f1 > 0.0);
    CHECK(min_dd1 >= -1e-9);
    CHECK(min_dd2 >= -1e-9);
  }
}

TEST_CASE("jacobian examples", "[model][jacobian]") {
  const Jacobian2x2 j0 = analytic_jacobian(State(0, 0), fig2(0.36));
  CHECK(j0.j11 == Approx(0.06).margin(1e-15));
  CHECK(j0.j12 == 0.0);
  CHECK(j0.j21 == 0.0);
  CHECK(j0.j22 == Approx(-0.3).margin(1e-15));

  const ModelParams m = fig2(0.75);
  const double p = 1.0 - 0.3 / 0.75;
  const Jacobian2x2 je = analytic_jacobian(State(p, 0), m);
  CHECK(je.j21 == 0.0);
  CHECK(je.j22 == Approx((0.7 - 1.0) + 0.7 * p).margin(1e-15));
  CHECK(je.j11 == Approx(0.3 - 0.75).margin(1e-15));
}

TEST_CASE("jacobian matches central differences on a grid", "[model][jacobian][property]") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int set = 0; set < 5; ++set) {
    const ModelParams m(u(rng), u(rng), u(rng), u(rng), u(rng), 0.5 + u(rng));
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      for (int k = 0; k < 50; ++k) {
        const double p = i / 49.0, x = -1.0 + 2.0 * k / 49.0;
        const Jacobian2x2 j = analytic_jacobian(State(p, x), m);
        const auto fd = oracle::fd_jacobian(p, x, m);
        worst = std::max({worst, std::abs(j.j11 - fd[0]), std::abs(j.j12 - fd[1]),
                          std::abs(j.j21 - fd[2]), std::abs(j.j22 - fd[3])});
      }
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("eigenvalues satisfy the characteristic polynomial", "[model][jacobian][property]") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> up(0.0, 1.0), ux(-1.0, 1.0);
  const ModelParams m(0.8, 0.2, 0.6, 0.25, 0.6, 2.0);
  for (int i = 0; i < 500; ++i) {
    const Jacobian2x2 j = analytic_jacobian(State(up(rng), ux(rng)), m);
    const Eigenvalues ev = j.eigenvalues();
    const double scale = std::max({1.0, std::abs(j.trace()), std::abs(j.determinant())});
    for (const auto& l : ev) {
      const std::complex<double> char_poly = l * l - j.trace() * l + j.determinant();
      CHECK(std::abs(char_poly) / scale < 1e-9);
    }
    CHECK(ev[0].real() >= ev[1].real());
  }
}

TEST_CASE("cooperative in the nonnegative-opinion quadrant", "[model][jacobian][property]") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int set = 0; set < 10; ++set) {
    const ModelParams m(u(rng), u(rng), u(rng), u(rng), u(rng));
    for (int i = 0; i <= 40; ++i) {
      for (int k = 0; k <= 40; ++k) {
        const Jacobian2x2 j = analytic_jacobian(State(i / 40.0, k / 40.0), m);
        CHECK(j.j12 >= 0.0);
        CHECK(j.j21 >= 0.0);
      }
    }
  }
}

TEST_CASE("sech2 is stable for large arguments", "[model]") {
  CHECK(sech2(0.0) == 1.0);
  CHECK(sech2(800.0) == 0.0);
  CHECK(sech2(-800.0) == 0.0);
  CHECK(sech2(1.3) == Approx(1.0 / (std::cosh(1.3) * std::cosh(1.3))).epsilon(1e-14));
}
