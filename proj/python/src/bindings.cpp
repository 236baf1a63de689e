#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nodsis/bifurcation.hpp"
#include "nodsis/cli/commands.hpp"
#include "nodsis/cli/config.hpp"
#include "nodsis/equilibria.hpp"
#include "nodsis/errors.hpp"
#include "nodsis/integrator.hpp"
#include "nodsis/model.hpp"
#include "nodsis/network.hpp"

namespace py = pybind11;
using namespace nodsis;

namespace {

std::string str(std::string_view s) { return std::string(s); }

py::array_t<double> column(const std::vector<double>& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

SquareMatrix matrix_from(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) {
    throw ParameterError("adjacency matrix must be square");
  }
  const auto n = static_cast<std::size_t>(a.shape(0));
  return SquareMatrix(n, std::vector<double>(a.data(), a.data() + n * n));
}

py::array_t<double> matrix_to(const SquareMatrix& m) {
  const auto n = static_cast<py::ssize_t>(m.size());
  py::array_t<double> out({n, n});
  auto r = out.mutable_unchecked<2>();
  for (py::ssize_t j = 0; j < n; ++j) {
    for (py::ssize_t k = 0; k < n; ++k) {
      r(j, k) = m(static_cast<std::size_t>(j), static_cast<std::size_t>(k));
    }
  }
  return out;
}

IntegrationConfig make_integration(double dt, double t_end, double tol, int stride) {
  IntegrationConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.convergence_tol = tol;
  cfg.record_stride = stride;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Coupled opinion/epidemic (NOD-SIS) model: equilibria, integration, sweeps";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParameterError>(m, "ParameterError", error.ptr());
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  auto regime_error = py::register_exception<RegimeError>(m, "RegimeError", error.ptr());
  py::register_exception<AssumptionViolation>(m, "AssumptionViolation", regime_error.ptr());
  py::register_exception<NotAnEquilibrium>(m, "NotAnEquilibrium", error.ptr());
  py::register_exception<InvarianceViolation>(m, "InvarianceViolation", error.ptr());
  py::register_exception<NonConvergence>(m, "NonConvergence", error.ptr());
  py::register_exception<BranchLinkError>(m, "BranchLinkError", error.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<double, double, double, double, double, double>(), py::arg("beta_bar"),
           py::arg("delta"), py::arg("k_p"), py::arg("k_x"), py::arg("u0"),
           py::arg("tau_x") = 1.0)
      .def_property_readonly("beta_bar", &ModelParams::beta_bar)
      .def_property_readonly("delta", &ModelParams::delta)
      .def_property_readonly("k_p", &ModelParams::k_p)
      .def_property_readonly("k_x", &ModelParams::k_x)
      .def_property_readonly("u0", &ModelParams::u0)
      .def_property_readonly("tau_x", &ModelParams::tau_x)
      .def("replace",
           [](const ModelParams& p, const std::string& name, double value) {
             return p.with(param_from_string(name), value);
           },
           py::arg("name"), py::arg("value"))
      .def("assumption1_holds", &ModelParams::assumption1_holds)
      .def("weak_peer_pressure", &ModelParams::weak_peer_pressure)
      .def(py::self == py::self)
      .def("__repr__", [](const ModelParams& p) {
        std::ostringstream o;
        o << "ModelParams(beta_bar=" << p.beta_bar() << ", delta=" << p.delta()
          << ", k_p=" << p.k_p() << ", k_x=" << p.k_x() << ", u0=" << p.u0()
          << ", tau_x=" << p.tau_x() << ")";
        return o.str();
      });

  m.def("vector_field",
        [](double p, double x, const ModelParams& params) {
          const Derivative d = nodsis_vector_field(State(p, x), params);
          return py::make_tuple(d.dp, d.dx);
        },
        py::arg("p"), py::arg("x"), py::arg("params"));
  m.def("urgency", &urgency, py::arg("p"), py::arg("x"), py::arg("params"));
  m.def("f1", &f1, py::arg("x"), py::arg("params"));
  m.def("f2", &f2, py::arg("x"), py::arg("params"));
  m.def("jacobian",
        [](double p, double x, const ModelParams& params) {
          const Jacobian2x2 j = analytic_jacobian(State(p, x), params);
          py::array_t<double> out({2, 2});
          auto r = out.mutable_unchecked<2>();
          r(0, 0) = j.j11;
          r(0, 1) = j.j12;
          r(1, 0) = j.j21;
          r(1, 1) = j.j22;
          return out;
        },
        py::arg("p"), py::arg("x"), py::arg("params"));

  py::class_<Equilibrium>(m, "Equilibrium")
      .def_property_readonly("p", [](const Equilibrium& e) { return e.state.p(); })
      .def_property_readonly("x", [](const Equilibrium& e) { return e.state.x(); })
      .def_property_readonly("cls", [](const Equilibrium& e) { return str(to_string(e.cls)); })
      .def_property_readonly("eigenvalues",
                             [](const Equilibrium& e) {
                               return std::vector<std::complex<double>>(e.eigenvalues.begin(),
                                                                        e.eigenvalues.end());
                             })
      .def_property_readonly("stability",
                             [](const Equilibrium& e) { return str(to_string(e.stability)); })
      .def_readonly("residual", &Equilibrium::residual)
      .def("__repr__", [](const Equilibrium& e) {
        std::ostringstream o;
        o << "Equilibrium(" << to_string(e.cls) << ", p=" << e.state.p() << ", x=" << e.state.x()
          << ", " << to_string(e.stability) << ")";
        return o.str();
      });

  m.def("find_equilibria", &find_equilibria, py::arg("params"));
  m.def("beta_star", &beta_star, py::arg("params"));
  m.def("find_beta0", &find_beta0, py::arg("params"));
  m.def(
      "regime",
      [](const ModelParams& params) {
        const RegimeReport r = regime(params);
        py::dict out;
        out["regime"] = str(to_string(r.regime));
        out["delta"] = r.thresholds.delta;
        out["beta_star"] = r.thresholds.beta_star;
        out["beta_0"] = r.thresholds.beta_0;
        out["equilibria"] = r.equilibria;
        return out;
      },
      py::arg("params"));

  py::class_<IntegrationConfig>(m, "IntegrationConfig")
      .def(py::init(&make_integration), py::arg("dt") = 0.01, py::arg("t_end") = 500.0,
           py::arg("convergence_tol") = 1e-10, py::arg("record_stride") = 10)
      .def_readwrite("dt", &IntegrationConfig::dt)
      .def_readwrite("t_end", &IntegrationConfig::t_end)
      .def_readwrite("convergence_tol", &IntegrationConfig::convergence_tol)
      .def_readwrite("record_stride", &IntegrationConfig::record_stride);

  py::class_<Trajectory>(m, "Trajectory")
      .def_property_readonly("t", [](const Trajectory& t) { return column(t.times); })
      .def_property_readonly("p",
                             [](const Trajectory& t) {
                               std::vector<double> v;
                               for (const State& s : t.states) v.push_back(s.p());
                               return column(v);
                             })
      .def_property_readonly("x",
                             [](const Trajectory& t) {
                               std::vector<double> v;
                               for (const State& s : t.states) v.push_back(s.x());
                               return column(v);
                             })
      .def_readonly("converged", &Trajectory::converged)
      .def_readonly("limit", &Trajectory::limit)
      .def_readonly("anomaly", &Trajectory::anomaly)
      .def_readonly("max_excursion", &Trajectory::max_excursion);

  m.def(
      "integrate",
      [](double p0, double x0, const ModelParams& params, const IntegrationConfig& cfg) {
        return integrate(State(p0, x0), params, cfg);
      },
      py::arg("p0"), py::arg("x0"), py::arg("params"), py::arg("config") = IntegrationConfig{});

  m.def(
      "basin_experiment",
      [](const ModelParams& params, std::size_t n, std::uint64_t seed,
         const IntegrationConfig& cfg) {
        py::list out;
        for (const BasinSample& s : basin_experiment(params, n, seed, cfg)) {
          py::dict row;
          row["index"] = s.index;
          row["p0"] = s.initial.p();
          row["x0"] = s.initial.x();
          row["p"] = s.final_state.p();
          row["x"] = s.final_state.x();
          row["converged"] = s.converged;
          row["limit_class"] =
              s.limit_class ? py::object(py::str(str(to_string(*s.limit_class)))) : py::none();
          out.append(row);
        }
        return out;
      },
      py::arg("params"), py::arg("n_samples"), py::arg("seed") = kDefaultSeed,
      py::arg("config") = IntegrationConfig{});

  m.def(
      "sweep",
      [](const std::string& parameter, const std::vector<double>& values,
         const ModelParams& base) {
        const BifurcationDiagram d = sweep(SweepConfig{param_from_string(parameter), values, base});
        py::list branches;
        for (const Branch& b : d.branches) {
          py::dict row;
          row["id"] = b.id;
          row["cls"] = str(to_string(b.cls));
          row["first_index"] = b.first_index;
          std::vector<double> ps, xs;
          std::vector<std::string> stab;
          for (const BranchPoint& pt : b.points) {
            ps.push_back(pt.p);
            xs.push_back(pt.x);
            stab.push_back(str(to_string(pt.stability)));
          }
          row["p"] = column(ps);
          row["x"] = column(xs);
          row["stability"] = stab;
          branches.append(row);
        }
        py::list events;
        for (const BifurcationEvent& e : d.events) {
          py::dict row;
          row["parameter"] = e.parameter;
          row["type"] = str(to_string(e.type));
          std::vector<std::string> classes;
          for (EquilibriumClass c : e.classes) classes.push_back(str(to_string(c)));
          row["classes"] = classes;
          events.append(row);
        }
        py::dict out;
        out["grid"] = column(d.grid);
        out["branches"] = branches;
        out["events"] = events;
        return out;
      },
      py::arg("parameter"), py::arg("values"), py::arg("base"));

  m.def(
      "network_run",
      [](const py::array_t<double, py::array::c_style | py::array::forcecast>& contact,
         const py::array_t<double, py::array::c_style | py::array::forcecast>& communication,
         const std::vector<double>& deltas, const ModelParams& params,
         const std::vector<double>& p0, const std::vector<double>& x0,
         const IntegrationConfig& cfg) {
        const NetworkModel model(matrix_from(contact), matrix_from(communication), deltas, params);
        const NetworkTrajectory traj = network_integrate(NetworkState{p0, x0}, model, cfg);
        const ConsensusReport rep = consensus_report(traj, model, cfg);
        py::dict out;
        out["converged"] = traj.converged;
        out["max_excursion"] = traj.max_excursion;
        out["p"] = column(traj.final_state().p);
        out["x"] = column(traj.final_state().x);
        out["outcome"] = str(to_string(rep.outcome));
        out["sign_pattern"] = rep.sign_pattern;
        out["baseline"] = column(rep.baseline);
        out["infection_vs_baseline"] = column(rep.infection_vs_baseline);
        return out;
      },
      py::arg("contact"), py::arg("communication"), py::arg("deltas"), py::arg("params"),
      py::arg("p0"), py::arg("x0"), py::arg("config") = IntegrationConfig{});

  m.def(
      "parse_edge_list",
      [](const std::string& text, const std::string& kind) {
        if (kind != "contact" && kind != "communication") {
          throw ConfigError("kind must be 'contact' or 'communication'");
        }
        return matrix_to(parse_edge_list(
            text, kind == "contact" ? GraphKind::contact : GraphKind::communication));
      },
      py::arg("text"), py::arg("kind"));

  m.def("presets", [] {
    py::list out;
    for (const auto& p : cli::presets()) out.append(py::make_tuple(p.name, p.summary));
    return out;
  });

  m.def(
      "run_config",
      [](const std::string& text) {
        const cli::ResultEnvelope env = cli::run(cli::parse_config_text(text));
        std::ostringstream meta;
        cli::write_envelope(meta, env);
        return py::make_tuple(cli::payload_text(env), meta.str());
      },
      py::arg("config_text"),
      "Run a config (same format as the CLI) and return (payload_csv, envelope_text).");

  m.attr("__version__") = cli::kToolVersion;
}
