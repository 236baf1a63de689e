#include "nodsis/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "nodsis/errors.hpp"
#include "nodsis/roots.hpp"

namespace nodsis {

std::string_view to_string(BifurcationType t) {
  return t == BifurcationType::transcritical ? "transcritical" : "fold";
}

void SweepConfig::validate() const {
  if (values.empty()) throw ParameterError("sweep: empty parameter grid");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) {
      throw ParameterError("sweep: parameter grid must be strictly increasing");
    }
  }
  for (double v : values) (void)base.with(parameter, v);
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  std::vector<double> out;
  if (n == 0) return out;
  if (n == 1) return {lo};
  out.reserve(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) out.push_back(lo + step * static_cast<double>(i));
  out.push_back(hi);
  return out;
}

std::vector<double> default_grid() { return uniform_grid(0.01, 0.99, 400); }

namespace {

constexpr double kRefineTol = 1e-8;

double distance(const BranchPoint& a, const BranchPoint& b) {
  return std::hypot(a.p - b.p, a.x - b.x);
}

BranchPoint to_point(double value, const Equilibrium& e) {
  return BranchPoint{value, e.state.p(), e.state.x(), e.stability, e.leading_real_part()};
}

bool has_index(const Branch& b, std::size_t i) {
  return i >= b.first_index && i <= b.last_index();
}

const BranchPoint& at(const Branch& b, std::size_t i) { return b.points[i - b.first_index]; }

bool is_oee(EquilibriumClass c) {
  return c == EquilibriumClass::OEE_PLUS || c == EquilibriumClass::OEE_MINUS;
}

/// Links equilibria at successive grid values into branches.
std::vector<Branch> link_branches(const SweepConfig& cfg,
                                  const std::vector<std::vector<Equilibrium>>& per_value) {
  std::vector<Branch> branches;
  std::vector<std::size_t> active;

  for (std::size_t i = 0; i < per_value.size(); ++i) {
    const double value = cfg.values[i];
    const auto& eqs = per_value[i];

    struct Pair {
      double dist;
      std::size_t branch;
      std::size_t eq;
    };
    std::vector<Pair> pairs;
    for (std::size_t b : active) {
      const BranchPoint& last = branches[b].points.back();
      for (std::size_t e = 0; e < eqs.size(); ++e) {
        if (eqs[e].cls != branches[b].cls) continue;
        const double d = distance(last, to_point(value, eqs[e]));
        if (d <= kBranchJumpTol) pairs.push_back({d, b, e});
      }
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const Pair& a, const Pair& b) { return a.dist < b.dist; });

    std::vector<bool> eq_used(eqs.size(), false);
    std::map<std::size_t, bool> branch_used;
    std::vector<std::size_t> next_active;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const Pair& pr = pairs[k];
      if (eq_used[pr.eq] || branch_used[pr.branch]) continue;
      // A tie with another still-open pairing sharing this branch or point
      // means the assignment is not determined by distance.
      for (std::size_t m = k + 1; m < pairs.size() && pairs[m].dist - pr.dist < 1e-12; ++m) {
        const Pair& other = pairs[m];
        if (eq_used[other.eq] || branch_used[other.branch]) continue;
        if ((other.branch == pr.branch) != (other.eq == pr.eq)) {
          std::ostringstream msg;
          msg << "branch linking ambiguous in grid cell [" << cfg.values[i - 1] << ", " << value
              << "] for class " << to_string(branches[pr.branch].cls);
          throw BranchLinkError(msg.str());
        }
      }
      eq_used[pr.eq] = true;
      branch_used[pr.branch] = true;
      branches[pr.branch].points.push_back(to_point(value, eqs[pr.eq]));
      next_active.push_back(pr.branch);
    }
    for (std::size_t e = 0; e < eqs.size(); ++e) {
      if (eq_used[e]) continue;
      branches.push_back(Branch{static_cast<int>(branches.size()), eqs[e].cls, i,
                                {to_point(value, eqs[e])}});
      next_active.push_back(branches.size() - 1);
    }
    active = std::move(next_active);
  }
  return branches;
}

/// Leading eigenvalue real part of the equilibrium of class `cls` nearest to
/// `near` at parameter value `value`, if one exists within the jump tolerance.
std::optional<double> leading_part_near(const SweepConfig& cfg, double value,
                                        EquilibriumClass cls, double p, double x) {
  const ModelParams params = cfg.base.with(cfg.parameter, value);
  std::optional<double> best;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const Equilibrium& e : find_equilibria(params)) {
    if (e.cls != cls) continue;
    const double d = std::hypot(e.state.p() - p, e.state.x() - x);
    if (d <= kBranchJumpTol && d < best_dist) {
      best_dist = d;
      best = e.leading_real_part();
    }
  }
  return best;
}

/// Bisects on the sign of the leading real part between branch indices lo and hi.
double refine_flip(const SweepConfig& cfg, const Branch& b, std::size_t lo_idx, std::size_t hi_idx) {
  const BranchPoint& lo_pt = at(b, lo_idx);
  const BranchPoint& hi_pt = at(b, hi_idx);
  double lo = lo_pt.parameter;
  double hi = hi_pt.parameter;
  const bool lo_negative = lo_pt.leading_real_part < 0.0;
  while (hi - lo > kRefineTol) {
    const double mid = 0.5 * (lo + hi);
    const double w = (mid - lo_pt.parameter) / (hi_pt.parameter - lo_pt.parameter);
    const auto lead = leading_part_near(cfg, mid, b.cls, lo_pt.p + w * (hi_pt.p - lo_pt.p),
                                        lo_pt.x + w * (hi_pt.x - lo_pt.x));
    if (!lead) break;
    if ((*lead < 0.0) == lo_negative) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double refine_fold(const SweepConfig& cfg, const std::vector<EquilibriumClass>& classes,
                   std::size_t cell) {
  const double a = cfg.values[cell];
  const double b = cfg.values[cell + 1];
  if (cfg.base.with(cfg.parameter, a).k_p() == 0.0 ||
      cfg.base.with(cfg.parameter, b).k_p() == 0.0) {
    return 0.5 * (a + b);
  }
  const bool endemic = std::any_of(classes.begin(), classes.end(), is_oee);
  auto g = [&](double v) {
    const ModelParams params = cfg.base.with(cfg.parameter, v);
    auto fn = [&](double x) { return endemic ? f2(x, params) : f1(x, params); };
    return roots::grid_minimize(fn, -1.0 + 2.0 * kNullclineEdge, 1.0 - 2.0 * kNullclineEdge).value;
  };
  const double ga = g(a);
  const double gb = g(b);
  if ((ga < 0.0) == (gb < 0.0)) return 0.5 * (a + b);
  return roots::bisect(g, a, b, kRefineTol);
}

struct Flip {
  std::size_t branch;
  // Consecutive non-marginal indices whose stability differs; marginal points
  // (a grid value sitting on the bifurcation) may lie between them.
  std::size_t lo;
  std::size_t hi;
};

std::vector<Flip> find_flips(const std::vector<Branch>& branches) {
  std::vector<Flip> flips;
  for (std::size_t k = 0; k < branches.size(); ++k) {
    const Branch& b = branches[k];
    std::optional<std::size_t> prev;
    for (std::size_t i = b.first_index; i <= b.last_index(); ++i) {
      if (at(b, i).stability == Stability::marginal) continue;
      if (prev && (at(b, *prev).leading_real_part < 0.0) != (at(b, i).leading_real_part < 0.0)) {
        flips.push_back({k, *prev, i});
      }
      prev = i;
    }
  }
  return flips;
}

std::vector<BifurcationEvent> detect_events(const SweepConfig& cfg,
                                            const std::vector<Branch>& branches) {
  std::vector<BifurcationEvent> events;
  const std::size_t n = cfg.values.size();
  if (n < 2) return events;

  std::vector<Flip> flips = find_flips(branches);
  std::vector<bool> flip_used(flips.size(), false);
  // A branch can take part in one birth and one death event.
  std::vector<bool> birth_used(branches.size(), false);
  std::vector<bool> death_used(branches.size(), false);

  auto close_at = [&](std::size_t a, std::size_t b, std::size_t idx) {
    return has_index(branches[a], idx) && has_index(branches[b], idx) &&
           distance(at(branches[a], idx), at(branches[b], idx)) <= kBranchJumpTol;
  };

  for (std::size_t fi = 0; fi < flips.size(); ++fi) {
    if (flip_used[fi]) continue;
    const Flip& f = flips[fi];
    std::optional<std::size_t> partner;
    for (std::size_t gi = 0; gi < flips.size() && !partner; ++gi) {
      const Flip& g = flips[gi];
      if (gi == fi || flip_used[gi] || g.branch == f.branch) continue;
      if (g.lo < f.hi && f.lo < g.hi && close_at(f.branch, g.branch, std::min(f.hi, g.hi))) {
        partner = g.branch;
        flip_used[gi] = true;
      }
    }
    for (std::size_t k = 0; k < branches.size() && !partner; ++k) {
      const Branch& b = branches[k];
      if (k == f.branch || birth_used[k] || b.first_index == 0) continue;
      if (b.first_index > f.lo && b.first_index <= f.hi && close_at(f.branch, k, b.first_index)) {
        partner = k;
        birth_used[k] = true;
      }
    }
    for (std::size_t k = 0; k < branches.size() && !partner; ++k) {
      const Branch& b = branches[k];
      if (k == f.branch || death_used[k] || b.last_index() + 1 == n) continue;
      if (b.last_index() >= f.lo && b.last_index() < f.hi && close_at(f.branch, k, b.last_index())) {
        partner = k;
        death_used[k] = true;
      }
    }
    if (!partner) continue;
    flip_used[fi] = true;
    events.push_back(BifurcationEvent{refine_flip(cfg, branches[f.branch], f.lo, f.hi),
                                      BifurcationType::transcritical,
                                      {branches[f.branch].cls, branches[*partner].cls},
                                      f.lo});
  }

  // Remaining births and deaths, grouped by cell and by the side of x = 0.
  for (std::size_t cell = 0; cell + 1 < n; ++cell) {
    for (int side : {-1, 1}) {
      auto group = [&](bool births) {
        std::vector<EquilibriumClass> classes;
        for (std::size_t k = 0; k < branches.size(); ++k) {
          const Branch& b = branches[k];
          const bool hit = births ? (b.first_index == cell + 1 && !birth_used[k])
                                  : (b.last_index() == cell && !death_used[k]);
          if (!hit) continue;
          const double x = at(b, births ? cell + 1 : cell).x;
          if ((x < 0.0 ? -1 : 1) == side) classes.push_back(b.cls);
        }
        std::sort(classes.begin(), classes.end());
        return classes;
      };
      // A class that both vanishes and reappears within one cell is a branch
      // that moved faster than the jump tolerance, not a change in the count.
      const auto all_born = group(true);
      const auto all_died = group(false);
      std::vector<EquilibriumClass> born, died;
      std::set_difference(all_born.begin(), all_born.end(), all_died.begin(), all_died.end(),
                          std::back_inserter(born));
      std::set_difference(all_died.begin(), all_died.end(), all_born.begin(), all_born.end(),
                          std::back_inserter(died));
      for (const auto* classes : {&born, &died}) {
        if (classes->size() >= 2) {
          events.push_back(BifurcationEvent{refine_fold(cfg, *classes, cell),
                                            BifurcationType::fold, *classes, cell});
        }
      }
    }
  }

  std::stable_sort(events.begin(), events.end(),
                   [](const BifurcationEvent& a, const BifurcationEvent& b) {
                     return a.parameter < b.parameter;
                   });
  return events;
}

}  // namespace

BifurcationDiagram sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<std::vector<Equilibrium>> per_value;
  per_value.reserve(cfg.values.size());
  for (double v : cfg.values) per_value.push_back(find_equilibria(cfg.base.with(cfg.parameter, v)));

  BifurcationDiagram d;
  d.parameter = cfg.parameter;
  d.grid = cfg.values;
  d.branches = link_branches(cfg, per_value);
  d.events = detect_events(cfg, d.branches);
  return d;
}

DiagramTables export_diagram(const BifurcationDiagram& d) {
  DiagramTables t;
  std::vector<const Branch*> order;
  for (const Branch& b : d.branches) order.push_back(&b);
  std::stable_sort(order.begin(), order.end(), [](const Branch* a, const Branch* b) {
    if (a->cls != b->cls) return a->cls < b->cls;
    return a->first_index < b->first_index;
  });
  for (const Branch* b : order) {
    for (const BranchPoint& pt : b->points) {
      t.points.push_back(PointRecord{pt.parameter, b->cls, b->id, pt.p, pt.x, pt.stability});
    }
  }
  for (const BifurcationEvent& e : d.events) {
    t.events.push_back(EventRecord{e.parameter, e.type, e.classes});
  }
  return t;
}

}  // namespace nodsis
