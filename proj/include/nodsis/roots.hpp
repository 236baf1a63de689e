#pragma once

#include <functional>
#include <vector>

namespace nodsis::roots {

using ScalarFn = std::function<double(double)>;

struct ScanOptions {
  int grid_points = 4096;
  double bisection_width = 1e-13;
  double dedup_tol = 1e-8;
};

/// Bisection on [lo, hi] where f(lo) and f(hi) have opposite signs (or one is
/// zero). Stops when the bracket is narrower than `width` or stops shrinking.
double bisect(const ScalarFn& f, double lo, double hi, double width);

/// All sign changes of f on a uniform grid over [lo, hi], each refined by
/// bisection; exact grid zeros are kept. Sorted ascending, deduplicated.
std::vector<double> scan_roots(const ScalarFn& f, double lo, double hi,
                               const ScanOptions& opts = {});

struct Minimum {
  double x;
  double value;
};

/// Global minimum of f on [lo, hi]: best point of a uniform grid, refined by
/// golden-section search over its two neighbouring cells.
Minimum grid_minimize(const ScalarFn& f, double lo, double hi, int grid_points = 4096,
                      double tol = 1e-12);

/// Golden-section search for a local minimum on [lo, hi].
Minimum golden_section(const ScalarFn& f, double lo, double hi, double tol);

}  // namespace nodsis::roots
