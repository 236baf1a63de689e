#include "nodsis/roots.hpp"

#include <algorithm>
#include <cmath>

namespace nodsis::roots {

double bisect(const ScalarFn& f, double lo, double hi, double width) {
  double f_lo = f(lo);
  if (f_lo == 0.0) return lo;
  if (f(hi) == 0.0) return hi;
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> scan_roots(const ScalarFn& f, double lo, double hi,
                               const ScanOptions& opts) {
  const int n = std::max(opts.grid_points, 2);
  const double step = (hi - lo) / (n - 1);
  auto grid = [&](int i) { return i == n - 1 ? hi : lo + step * i; };

  std::vector<double> found;
  double x_prev = grid(0);
  double f_prev = f(x_prev);
  if (f_prev == 0.0) found.push_back(x_prev);
  for (int i = 1; i < n; ++i) {
    const double x = grid(i);
    const double fx = f(x);
    if (fx == 0.0) {
      found.push_back(x);
    } else if (f_prev != 0.0 && (fx < 0.0) != (f_prev < 0.0)) {
      found.push_back(bisect(f, x_prev, x, opts.bisection_width));
    }
    x_prev = x;
    f_prev = fx;
  }

  std::sort(found.begin(), found.end());
  std::vector<double> unique;
  for (double r : found) {
    if (unique.empty() || r - unique.back() > opts.dedup_tol) unique.push_back(r);
  }
  return unique;
}

Minimum golden_section(const ScalarFn& f, double lo, double hi, double tol) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    if (c <= a || d >= b) break;
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

Minimum grid_minimize(const ScalarFn& f, double lo, double hi, int grid_points, double tol) {
  const int n = std::max(grid_points, 3);
  const double step = (hi - lo) / (n - 1);
  auto grid = [&](int i) { return i == n - 1 ? hi : lo + step * i; };

  int best = 0;
  double best_value = f(grid(0));
  for (int i = 1; i < n; ++i) {
    const double v = f(grid(i));
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double a = grid(std::max(best - 1, 0));
  const double b = grid(std::min(best + 1, n - 1));
  Minimum refined = golden_section(f, a, b, tol);
  if (refined.value < best_value) return refined;
  return {grid(best), best_value};
}

}  // namespace nodsis::roots
