#include <string>

#include "nodsis/cli/config.hpp"
#include "nodsis/errors.hpp"

namespace nodsis::cli {

const std::vector<PresetInfo>& presets() {
  static const std::vector<PresetInfo> list = {
      {"fig1a", "beta_bar sweep, u0=0.2, k_x=0.3, k_p=0.7, delta=0.3 (IIFE/IEE only)",
       "tau_x=1; sweep grid 400 points over [0.01, 0.99]"},
      {"fig1b", "beta_bar sweep, u0=0.7, k_x=0.3, k_p=0.7, delta=0.3 (two transcriticals, fold)",
       "tau_x=1; sweep grid 400 points over [0.01, 0.99]"},
      {"fig2", "delta=0.3, k_p=0.7, k_x=0.3, u0=0.7, tau_x=1; beta_bar=0.75 unless --beta",
       "12 initial conditions drawn uniformly from the interior of the region (seed 42)"},
      {"fig3", "delta=0.3, beta_bar=0.75, u0=0.9, k_p=0.7, k_x=0.7 (strong peer pressure)",
       "tau_x=1; 12 uniform random initial conditions (seed 42)"},
      {"fig4-coop", "5 subpopulations, cooperative communication; beta_bar=0.5, delta=0.3, "
                    "k_p=0.5, k_x=0.3, u0=0.7",
       "graphs: contact ring 0-1-2-3-4-0 plus chord 1-3; communication edges 0-1, 0-2, 1-2, "
       "2-3, 3-4 (all +1); tau_x=1; p(0) and |x(0)| uniform random, sign from --x0-sign"},
      {"fig4-ant", "5 subpopulations, antagonistic communication; same constants as fig4-coop",
       "graphs: contact as fig4-coop; communication camps {0,1,2} and {3,4} (+1 inside) joined "
       "by the antagonistic edge 2-3 (-1); tau_x=1; p(0), x(0) uniform random"},
  };
  return list;
}

void apply_preset(ExperimentConfig& cfg, std::string_view name) {
  cfg.preset = std::string(name);
  if (name == "fig1a" || name == "fig1b") {
    cfg.model = ModelBlock{0.75, 0.3, 0.7, 0.3, name == "fig1a" ? 0.2 : 0.7, 1.0};
    cfg.sweep = SweepBlock{};
  } else if (name == "fig2") {
    cfg.model = ModelBlock{0.75, 0.3, 0.7, 0.3, 0.7, 1.0};
    cfg.samples = 12;
    cfg.p0.reset();
    cfg.x0.reset();
  } else if (name == "fig3") {
    cfg.model = ModelBlock{0.75, 0.3, 0.7, 0.7, 0.9, 1.0};
    cfg.samples = 12;
    cfg.p0.reset();
    cfg.x0.reset();
  } else if (name == "fig4-coop" || name == "fig4-ant") {
    cfg.model = ModelBlock{0.5, 0.3, 0.5, 0.3, 0.7, 1.0};
    cfg.network.contact.clear();
    cfg.network.communication.clear();
    cfg.network.graphs = std::string(name);
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'");
  }
}

}  // namespace nodsis::cli
