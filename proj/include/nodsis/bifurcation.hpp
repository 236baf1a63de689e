#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "nodsis/equilibria.hpp"
#include "nodsis/model.hpp"

namespace nodsis {

struct SweepConfig {
  Param parameter = Param::beta_bar;
  /// Strictly increasing grid of values for `parameter`.
  std::vector<double> values;
  ModelParams base;

  /// Throws ParameterError if the grid is empty, not strictly increasing, or
  /// any grid value makes the constants invalid.
  void validate() const;
};

/// n uniformly spaced points over [lo, hi] (n = 1 gives {lo}).
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

/// Default sweep grid: 400 points over [0.01, 0.99].
std::vector<double> default_grid();

/// Jump allowed between consecutive points of one branch, in (p, x).
inline constexpr double kBranchJumpTol = 0.05;

struct BranchPoint {
  double parameter;
  double p;
  double x;
  Stability stability;
  double leading_real_part;
};

struct Branch {
  int id;
  EquilibriumClass cls;
  /// Index into SweepConfig::values of the first point.
  std::size_t first_index;
  std::vector<BranchPoint> points;

  std::size_t last_index() const { return first_index + points.size() - 1; }
};

enum class BifurcationType { transcritical, fold };

std::string_view to_string(BifurcationType t);

struct BifurcationEvent {
  /// Refined location (bisection to 1e-8 inside the detecting grid cell).
  double parameter;
  BifurcationType type;
  std::vector<EquilibriumClass> classes;
  /// Grid cell [values[cell], values[cell + 1]] where the event was detected.
  std::size_t cell;
};

struct BifurcationDiagram {
  Param parameter = Param::beta_bar;
  std::vector<double> grid;
  std::vector<Branch> branches;
  std::vector<BifurcationEvent> events;
};

/// Equilibrium branches over a one-parameter grid.
///
/// Equilibria are linked into branches by class and nearest-neighbour
/// continuity (jump <= 0.05 per grid step). A transcritical event is a stability
/// flip on one branch paired, within the same cell and location, with a flip or
/// a birth/death of another branch; points with marginal stability are skipped
/// when looking for flips. A fold is a group of branches born (or dying)
/// together on one side of x = 0, ignoring classes that die and are reborn in
/// the same cell. Throws BranchLinkError when the nearest-neighbour assignment
/// is not unique.
BifurcationDiagram sweep(const SweepConfig& cfg);

struct PointRecord {
  double parameter;
  EquilibriumClass cls;
  int branch;
  double p;
  double x;
  Stability stability;
};

struct EventRecord {
  double parameter;
  BifurcationType type;
  std::vector<EquilibriumClass> classes;
};

struct DiagramTables {
  std::vector<PointRecord> points;
  std::vector<EventRecord> events;
};

/// Flattens a diagram; points ordered by class, branch, then parameter and
/// events by parameter.
DiagramTables export_diagram(const BifurcationDiagram& d);

}  // namespace nodsis
