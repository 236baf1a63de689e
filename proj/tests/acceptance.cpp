// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nodsis/bifurcation.hpp"
#include "nodsis/cli/commands.hpp"
#include "nodsis/equilibria.hpp"
#include "nodsis/integrator.hpp"
#include "nodsis/network.hpp"
#include "oracles.hpp"

using namespace nodsis;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream log;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      log << " [failed: " << what << "]";
    }
  }
};

ModelParams fig1b(double beta) { return ModelParams(beta, 0.3, 0.7, 0.3, 0.7); }
ModelParams fig1a(double beta) { return ModelParams(beta, 0.3, 0.7, 0.3, 0.2); }
const ModelParams kFig3(0.75, 0.3, 0.7, 0.7, 0.9);
const ModelParams kFig4(0.5, 0.3, 0.5, 0.3, 0.7);


const Equilibrium* find_class(const std::vector<Equilibrium>& eqs, EquilibriumClass c) {
  for (const auto& e : eqs) {
    if (e.cls == c) return &e;
  }
  return nullptr;
}

std::vector<const BifurcationEvent*> events_of(const BifurcationDiagram& d, BifurcationType t) {
  std::vector<const BifurcationEvent*> out;
  for (const auto& e : d.events) {
    if (e.type == t) out.push_back(&e);
  }
  return out;
}

bool involves(const BifurcationEvent& e, EquilibriumClass c) {
  return std::find(e.classes.begin(), e.classes.end(), c) != e.classes.end();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void criterion1(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto lo = find_equilibria(fig1b(0.25));
  const Equilibrium* iife = find_class(lo, EquilibriumClass::IIFE);
  o.expect(iife && iife->stability == Stability::stable, "IIFE stable at 0.25");
  o.expect(!find_class(lo, EquilibriumClass::IEE), "IEE infeasible at 0.25");

  const auto hi = find_equilibria(fig1b(0.36));
  iife = find_class(hi, EquilibriumClass::IIFE);
  const Equilibrium* iee = find_class(hi, EquilibriumClass::IEE);
  o.expect(iife && iife->stability == Stability::unstable, "IIFE unstable at 0.36");
  o.expect(iee && iee->stability == Stability::stable, "IEE stable at 0.36");
  if (iee) {
    o.expect(std::abs(iee->state.p() - 1.0 / 6.0) < 1e-12, "IEE p = 1/6");
    o.log << " p_IEE=" << iee->state.p();
  }

  const auto d = sweep(SweepConfig{Param::beta_bar, default_grid(), fig1b(0.5)});
  const auto tc = events_of(d, BifurcationType::transcritical);
  const bool found = std::any_of(tc.begin(), tc.end(), [](const BifurcationEvent* e) {
    return std::abs(e->parameter - 0.3) <= 2.5e-3 && involves(*e, EquilibriumClass::IIFE) &&
           involves(*e, EquilibriumClass::IEE);
  });
  o.expect(found, "IIFE/IEE transcritical within 2.5e-3 of 0.3");
  if (!tc.empty()) o.log << " event=" << tc.front()->parameter;

  const double t = seconds_since(t0);
  o.expect(t < 5.0, "runtime < 5 s");
  o.log << " t=" << t << "s";
}

void criterion2(Outcome& o) {
  const double bs = beta_star(fig1b(0.5));
  o.expect(bs == 0.525, "beta_star == 0.525");
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", bs);
  o.log << " beta_star=" << buf;

  const auto d = sweep(SweepConfig{Param::beta_bar, default_grid(), fig1b(0.5)});
  const auto tc = events_of(d, BifurcationType::transcritical);
  const auto it = std::find_if(tc.begin(), tc.end(), [](const BifurcationEvent* e) {
    return involves(*e, EquilibriumClass::IEE) && involves(*e, EquilibriumClass::OEE_MINUS);
  });
  o.expect(it != tc.end(), "IEE/OEE- exchange detected");
  if (it != tc.end()) {
    o.expect(std::abs((*it)->parameter - 0.525) <= 2.5e-3, "exchange within 2.5e-3 of 0.525");
    o.log << " exchange=" << (*it)->parameter;
  }
  const auto folds = events_of(d, BifurcationType::fold);
  o.expect(folds.size() == 1, "exactly one fold");
  if (!folds.empty()) {
    const double b0 = folds.front()->parameter;
    o.expect(b0 > 0.36 && b0 < 0.44, "fold in (0.36, 0.44)");
    o.log << " fold=" << b0;
  }
}

void criterion3(Outcome& o) {
  std::size_t bad = 0;
  for (int i = 0; i < 200; ++i) {
    const double beta = (i + 0.5) / 200.0;
    for (const auto& e : find_equilibria(fig1a(beta))) {
      if (e.cls != EquilibriumClass::IIFE && e.cls != EquilibriumClass::IEE) ++bad;
    }
  }
  o.expect(bad == 0, "only IIFE/IEE on the 200-point grid");
  o.log << " opinionated=" << bad;

  const auto d = sweep(SweepConfig{Param::beta_bar, default_grid(), fig1a(0.5)});
  o.expect(d.branches.size() == 2, "2 branches");
  o.expect(d.events.size() == 1, "1 event");
  o.log << " branches=" << d.branches.size() << " events=" << d.events.size();
}

void criterion4(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const ModelParams m = fig1b(0.75);
  const auto eqs = find_equilibria(m);
  o.expect(eqs.size() == 4, "exactly 4 equilibria");
  for (const auto& e : eqs) {
    const bool opinionated =
        e.cls == EquilibriumClass::OEE_PLUS || e.cls == EquilibriumClass::OEE_MINUS;
    o.expect((e.stability == Stability::stable) == opinionated,
             std::string(to_string(e.cls)) + " stability");
  }
  for (auto c : {EquilibriumClass::IIFE, EquilibriumClass::IEE, EquilibriumClass::OEE_PLUS,
                 EquilibriumClass::OEE_MINUS}) {
    o.expect(find_class(eqs, c) != nullptr, std::string(to_string(c)) + " present");
  }

  const InfectionOrdering ord = infection_ordering(m);
  o.expect(ord.p_ee == 0.6, "p_EE == 0.6");
  o.expect(ord.p_minus < 0.6 && 0.6 < ord.p_plus, "p- < 0.6 < p+");
  o.log << " p-=" << ord.p_minus << " p+=" << ord.p_plus;

  std::size_t wrong = 0;
  for (const BasinSample& s : basin_experiment(m, 100, kDefaultSeed)) {
    const EquilibriumClass want =
        s.initial.x() > 0 ? EquilibriumClass::OEE_PLUS : EquilibriumClass::OEE_MINUS;
    if (!s.limit_class || *s.limit_class != want) ++wrong;
  }
  o.expect(wrong == 0, "zero basin misclassifications");
  o.log << " misclassified=" << wrong << "/100";

  const double t = seconds_since(t0);
  o.expect(t < 30.0, "runtime < 30 s");
  o.log << " t=" << t << "s";
}

void criterion5(Outcome& o) {
  const auto f = [](double x) { return oracle::nullcline_p(x, kFig3); };
  const double edge = 1.0 - 1e-6;
  const auto roots = oracle::grid_roots(f, -edge, edge, 20000);
  o.log << " f1 roots:";
  for (double r : roots) o.log << ' ' << r;

  // Roots come in mirror pairs; the outermost pair is +-x_r.
  bool mirrored = !roots.empty() && roots.size() % 2 == 0;
  for (std::size_t i = 0; mirrored && i < roots.size(); ++i) {
    mirrored = std::abs(roots[i] + roots[roots.size() - 1 - i]) < 1e-10;
  }
  o.expect(mirrored, "f1 roots symmetric under x -> -x");

  const auto eqs = find_equilibria(kFig3);
  std::vector<double> lib;
  for (const auto& e : eqs) {
    if (e.cls == EquilibriumClass::OIFE_PLUS || e.cls == EquilibriumClass::OIFE_MINUS) {
      lib.push_back(e.state.x());
    }
  }
  std::sort(lib.begin(), lib.end());
  bool agree = lib.size() == roots.size();
  for (std::size_t i = 0; agree && i < lib.size(); ++i) agree = std::abs(lib[i] - roots[i]) < 1e-9;
  o.expect(agree, "library OIFE opinions equal the oracle roots");

  if (!roots.empty()) {
    const double xr = roots.back();
    const auto neg = std::find_if(eqs.begin(), eqs.end(), [&](const Equilibrium& e) {
      return e.cls == EquilibriumClass::OIFE_MINUS && std::abs(e.state.x() + xr) < 1e-9;
    });
    o.expect(neg != eqs.end() && neg->stability == Stability::stable, "OIFE at -x_r stable");
    o.log << " x_r=" << xr;
  }

  std::size_t neg_runs = 0, pos_runs = 0, neg_bad = 0, pos_bad = 0;
  for (const BasinSample& s : basin_experiment(kFig3, 200, kDefaultSeed)) {
    if (s.initial.x() < 0 && neg_runs < 20) {
      ++neg_runs;
      if (!(s.final_state.p() < 1e-6)) ++neg_bad;
    } else if (s.initial.x() > 0 && pos_runs < 20) {
      ++pos_runs;
      if (!s.converged || !s.limit_class || !(s.final_state.p() > 0.6)) ++pos_bad;
    }
  }
  o.expect(neg_runs == 20 && pos_runs == 20, "20 runs of each sign");
  o.expect(neg_bad == 0, "x(0)<0 runs end with p < 1e-6");
  o.expect(pos_bad == 0, "x(0)>0 runs converge with p > 0.6");
  o.log << " failures(-)=" << neg_bad << " failures(+)=" << pos_bad;
}

void criterion6(Outcome& o) {
  double worst = 0.0;
  std::size_t runs = 0;
  for (double beta : {0.25, 0.36, 0.44, 0.75}) {
    for (std::uint64_t i = 0; i < 250; ++i) {
      const Trajectory t = integrate(random_interior_state(kDefaultSeed, i), fig1b(beta));
      worst = std::max(worst, t.max_excursion);
      ++runs;
    }
  }
  o.expect(runs == 1000, "1000 runs");
  o.expect(worst < 1e-6, "max_excursion < 1e-6");
  o.log << " runs=" << runs << " worst_excursion=" << worst;
}

void criterion7(Outcome& o) {
  const std::vector<std::pair<const char*, ModelParams>> sets{
      {"b=.25", fig1b(0.25)}, {"b=.36", fig1b(0.36)}, {"b=.44", fig1b(0.44)},
      {"b=.75", fig1b(0.75)}, {"u0=.2,b=.25", fig1a(0.25)}, {"u0=.2,b=.75", fig1a(0.75)},
      {"strong", kFig3}};
  for (const auto& [name, m] : sets) {
    const auto lib = find_equilibria(m);
    const auto ref = oracle::brute_force_equilibria(m, 2000);
    bool one_to_one = lib.size() == ref.size();
    for (const auto& e : lib) {
      const auto hits = std::count_if(ref.begin(), ref.end(), [&](const oracle::Point& q) {
        return std::hypot(q.p - e.state.p(), q.x - e.state.x()) < 1e-3;
      });
      one_to_one = one_to_one && hits == 1;
    }
    for (const auto& q : ref) {
      const auto hits = std::count_if(lib.begin(), lib.end(), [&](const Equilibrium& e) {
        return std::hypot(q.p - e.state.p(), q.x - e.state.x()) < 1e-3;
      });
      one_to_one = one_to_one && hits == 1;
    }
    o.expect(one_to_one, std::string("one-to-one match for ") + name);
    o.log << ' ' << name << ':' << lib.size() << '/' << ref.size();
  }
}

bool same_spectrum(Eigenvalues ev, double a, double b, double tol) {
  std::vector<double> want{a, b}, got{ev[0].real(), ev[1].real()};
  std::sort(want.begin(), want.end());
  std::sort(got.begin(), got.end());
  return std::abs(ev[0].imag()) < tol && std::abs(ev[1].imag()) < tol &&
         std::abs(want[0] - got[0]) < tol && std::abs(want[1] - got[1]) < tol;
}

void criterion8(Outcome& o) {
  std::mt19937_64 rng(kDefaultSeed);
  std::uniform_real_distribution<double> pos(0.05, 1.0), nonneg(0.0, 1.5), tau(0.5, 2.0);
  double worst = 0.0;
  for (int set = 0; set < 5; ++set) {
    const double beta = pos(rng), delta = pos(rng);
    const ModelParams m(beta, delta, nonneg(rng), nonneg(rng), nonneg(rng), tau(rng));
    for (int i = 0; i < 50; ++i) {
      for (int j = 0; j < 50; ++j) {
        const double p = i / 49.0, x = -1.0 + 2.0 * j / 49.0;
        const Jacobian2x2 J = analytic_jacobian(State(p, x), m);
        const auto fd = oracle::fd_jacobian(p, x, m);
        worst = std::max({worst, std::abs(J.j11 - fd[0]), std::abs(J.j12 - fd[1]),
                          std::abs(J.j21 - fd[2]), std::abs(J.j22 - fd[3])});
      }
    }
    const double tx = m.tau_x();
    const Equilibrium iife = make_equilibrium(State(0, 0), EquilibriumClass::IIFE, m);
    o.expect(same_spectrum(iife.eigenvalues, beta - delta, (m.u0() - 1.0) / tx, 1e-9),
             "IIFE eigenvalues, set " + std::to_string(set));
    if (beta > delta) {
      const Equilibrium iee = make_equilibrium(State(1.0 - delta / beta, 0), EquilibriumClass::IEE, m);
      o.expect(same_spectrum(iee.eigenvalues, delta - beta,
                             ((m.u0() - 1.0) + m.k_p() * (1.0 - delta / beta)) / tx, 1e-9),
               "IEE eigenvalues, set " + std::to_string(set));
    }
  }
  o.expect(worst < 1e-6, "finite-difference agreement to 1e-6");
  o.log << " worst_abs_diff=" << worst;
}

NetworkState network_start(std::uint64_t seed, int sign) {
  NetworkState s;
  for (std::size_t j = 0; j < 5; ++j) {
    const State r = random_interior_state(seed, j);
    s.p.push_back(r.p());
    s.x.push_back(sign == 0 ? r.x() : sign * std::abs(r.x()));
  }
  return s;
}

void criterion9(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto coop = cli::builtin_graphs("fig4-coop");
  const auto ant = cli::builtin_graphs("fig4-ant");
  const NetworkModel mc(coop.contact, coop.communication, std::vector<double>(5, 0.3), kFig4);
  const NetworkModel ma(ant.contact, ant.communication, std::vector<double>(5, 0.3), kFig4);

  for (int sign : {-1, 1}) {
    const NetworkTrajectory t = network_integrate(network_start(kDefaultSeed, sign), mc);
    const ConsensusReport r = consensus_report(t, mc);
    const auto want =
        sign < 0 ? ConsensusOutcome::AGREEMENT_AVERSE : ConsensusOutcome::AGREEMENT_SEEKING;
    o.expect(r.outcome == want, "cooperative outcome for sign " + std::to_string(sign));
    const bool signed_ok = std::all_of(r.infection_vs_baseline.begin(), r.infection_vs_baseline.end(),
                                       [&](double d) { return sign < 0 ? d < 0 : d > 0; });
    o.expect(signed_ok, "infection vs SIS baseline signs for sign " + std::to_string(sign));
    o.log << " coop(" << sign << ")=" << to_string(r.outcome);
  }

  const NetworkTrajectory t = network_integrate(network_start(kDefaultSeed, 0), ma);
  const ConsensusReport r = consensus_report(t, ma);
  o.expect(r.outcome == ConsensusOutcome::DISSENSUS, "antagonistic dissensus");
  double worst_averse = -1.0, best_seeking = 2.0;
  for (std::size_t j = 0; j < 5; ++j) {
    const double p = t.final_state().p[j];
    if (r.sign_pattern[j] < 0) worst_averse = std::max(worst_averse, p);
    if (r.sign_pattern[j] > 0) best_seeking = std::min(best_seeking, p);
  }
  o.expect(worst_averse < best_seeking, "averse nodes below seeking nodes");
  o.log << " ant=" << to_string(r.outcome) << " max_p_averse=" << worst_averse
        << " min_p_seeking=" << best_seeking;

  const double secs = seconds_since(t0);
  o.expect(secs < 20.0, "runtime < 20 s");
  o.log << " t=" << secs << "s";
}

void criterion10(Outcome& o) {
  const ModelParams m = fig1b(0.75);
  const NetworkModel one(SquareMatrix::identity(1), SquareMatrix::identity(1), {m.delta()}, m);
  IntegrationConfig cfg;
  cfg.record_stride = 1;
  const State s0(0.2, -0.4);
  const Trajectory a = integrate(s0, m, cfg);
  const NetworkTrajectory b = network_integrate(NetworkState{{s0.p()}, {s0.x()}}, one, cfg);
  o.expect(a.states.size() == b.states.size(), "same sample count");
  double worst = 0.0;
  for (std::size_t i = 0; i < std::min(a.states.size(), b.states.size()); ++i) {
    worst = std::max({worst, std::abs(a.times[i] - b.times[i]),
                      std::abs(a.states[i].p() - b.states[i].p[0]),
                      std::abs(a.states[i].x() - b.states[i].x[0])});
  }
  o.expect(worst <= 1e-12, "per-sample difference <= 1e-12");
  o.log << " samples=" << a.states.size() << " worst_diff=" << worst;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"transcritical at beta = delta", criterion1},
      {"second transcritical and fold", criterion2},
      {"SIS equivalence at small u0", criterion3},
      {"four-equilibria bistability", criterion4},
      {"opinionated eradication", criterion5},
      {"positive invariance", criterion6},
      {"brute-force oracle equivalence", criterion7},
      {"Jacobian correctness", criterion8},
      {"network outcomes", criterion9},
      {"single-node network reduction", criterion10},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.log << " [exception: " << e.what() << "]";
    }
    if (!o.ok) ++failed;
    std::printf("%s criterion %zu (%s):%s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.log.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
