#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <sstream>

#include "repct/cli.hpp"
#include "repct/dynamics.hpp"
#include "repct/errors.hpp"
#include "repct/experiments.hpp"
#include "repct/presets.hpp"
#include "repct/thresholds.hpp"
#include "repct/verification.hpp"

namespace py = pybind11;
using namespace repct;

namespace {

integrator_config make_integrator(double t_end, double rel_tol, double abs_tol, double sample_dt,
                                   double blowup) {
    integrator_config cfg;
    cfg.t_end = t_end;
    cfg.rel_tol = rel_tol;
    cfg.abs_tol = abs_tol;
    cfg.sample_dt = sample_dt;
    cfg.blowup_threshold = blowup;
    return cfg;
}

py::dict outcome_dict(const sim_outcome& o) {
    py::dict d;
    d["kind"] = o.kind == outcome_kind::global ? "global" : "breakdown";
    d["t_reached"] = o.t_reached;
    if (o.kind == outcome_kind::breakdown) {
        d["t_star"] = o.t_star;
        d["t_star_halfwidth"] = o.t_star_halfwidth;
    }
    py::list t, rho, dd;
    for (const auto& s : o.trajectory) {
        t.append(s.t);
        rho.append(s.rho);
        dd.append(s.d);
    }
    d["t"] = t;
    d["rho"] = rho;
    d["d"] = dd;
    d["invariant_drift"] = o.diagnostics.invariant_drift;
    d["max_steps_hit"] = o.diagnostics.max_steps_hit;
    if (o.has_tensor) d["shear_ratio_drift"] = o.diagnostics.shear_ratio_drift;
    return d;
}

py::object optional_float(const std::optional<double>& v) {
    return v ? py::object(py::float_(*v)) : py::object(py::none());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Threshold classifiers, reduced and full Lagrangian integrators, bisection harness";

    py::register_exception<step_failure>(m, "StepFailure", PyExc_RuntimeError);
    py::register_exception<no_bracket>(m, "NoBracket", PyExc_RuntimeError);

    m.def("F", &F, py::arg("rho"), py::arg("beta"), py::arg("k"));
    m.def("G", &G, py::arg("rho"), py::arg("rho_star"), py::arg("beta"), py::arg("k"), py::arg("c"));
    m.def("g_zero_background", &g_zero_background, py::arg("rho"), py::arg("gamma"), py::arg("k"));
    m.def("g1_nonzero_background", &g1_nonzero_background, py::arg("rho"), py::arg("gamma"),
          py::arg("k"), py::arg("c"));
    m.def("g2_nonzero_background", &g2_nonzero_background, py::arg("rho"), py::arg("k"), py::arg("c"));
    m.def("spectral_gap",
          [](double m11, double m12, double m21, double m22) {
              return spectral_gap(gradient_tensor(m11, m12, m21, m22));
          },
          py::arg("m11"), py::arg("m12"), py::arg("m21"), py::arg("m22"));
    m.def("invariant_value",
          [](double rho, double d, double beta, double k, double c) {
              return invariant_value({rho, d}, beta, k, c);
          },
          py::arg("rho"), py::arg("d"), py::arg("beta"), py::arg("k"), py::arg("c"));

    m.def("critical_points",
          [](double beta, double k, double c) {
              const auto cp = critical_points(beta, k, c);
              py::dict d;
              d["kind"] = std::string(to_string(cp.kind));
              d["rho1_star"] = optional_float(cp.rho1_star);
              d["rho2_star"] = optional_float(cp.rho2_star);
              return d;
          },
          py::arg("beta"), py::arg("k"), py::arg("c"));

    m.def("classify",
          [](double rho0, double d0, double gamma0, double k, double c, const std::string& rule) {
              const auto r = parse_threshold_rule(rule);
              if (!r) throw invalid_config("rule must be 'theorem' or 'lemma'");
              const auto v = classify({rho0, d0, gamma0, k, c}, *r);
              py::dict d;
              d["region"] = std::string(to_string(v.where));
              d["margin"] = v.margin;
              d["surface_value"] = optional_float(v.surface_value);
              d["shape"] = std::string(to_string(v.shape));
              return d;
          },
          py::arg("rho0"), py::arg("d0"), py::arg("gamma0"), py::arg("k") = 1.0, py::arg("c") = 0.0,
          py::arg("rule") = "theorem");

    m.def("integrate_reduced",
          [](double rho0, double d0, double beta, double k, double c, double t_end, double rel_tol,
             double abs_tol, double sample_dt, double blowup) {
              return outcome_dict(integrate_reduced(
                  {rho0, d0}, beta, k, c, make_integrator(t_end, rel_tol, abs_tol, sample_dt, blowup)));
          },
          py::arg("rho0"), py::arg("d0"), py::arg("beta"), py::arg("k") = 1.0, py::arg("c") = 0.0,
          py::arg("t_end") = 50.0, py::arg("rel_tol") = 1e-10, py::arg("abs_tol") = 1e-12,
          py::arg("sample_dt") = 0.0, py::arg("blowup") = 1e8);

    m.def("integrate_full",
          [](std::array<double, 4> m0, double rho0, double k, double c, double t_end, double rel_tol,
             double abs_tol, double sample_dt, double blowup) {
              return outcome_dict(integrate_full({gradient_tensor::from_array(m0), rho0}, k, c,
                                                 make_integrator(t_end, rel_tol, abs_tol, sample_dt, blowup)));
          },
          py::arg("m"), py::arg("rho0"), py::arg("k") = 1.0, py::arg("c") = 0.0,
          py::arg("t_end") = 50.0, py::arg("rel_tol") = 1e-10, py::arg("abs_tol") = 1e-12,
          py::arg("sample_dt") = 0.0, py::arg("blowup") = 1e8);

    m.def("empirical_threshold",
          [](double rho0, double gamma0, double k, double c, const std::string& branch, double tol_d,
             double horizon) {
              bisection_options o;
              o.tol_d = tol_d;
              o.horizon = horizon;
              threshold_branch b;
              if (branch == "lower_bound") b = threshold_branch::lower_bound;
              else if (branch == "interval_lower") b = threshold_branch::interval_lower;
              else if (branch == "interval_upper") b = threshold_branch::interval_upper;
              else if (branch == "default") b = c == 0.0 ? threshold_branch::lower_bound : threshold_branch::interval_lower;
              else throw invalid_config("unknown branch: " + branch);
              const auto r = empirical_threshold(rho0, gamma0, k, c, b, o);
              py::dict d;
              d["d_critical_empirical"] = r.d_critical_empirical;
              d["analytic_value"] = optional_float(r.analytic_value);
              d["discrepancy"] = r.discrepancy;
              d["bracket_width"] = r.bracket_width;
              d["n_simulations"] = r.n_simulations;
              return d;
          },
          py::arg("rho0"), py::arg("gamma0"), py::arg("k") = 1.0, py::arg("c") = 0.0,
          py::arg("branch") = "default", py::arg("tol_d") = 1e-3, py::arg("horizon") = 50.0);

    m.def("sweep",
          [](const std::string& preset, unsigned threads) {
              const auto p = find_sweep_preset(preset);
              if (!p) throw invalid_config("unknown sweep preset: " + preset);
              sweep_options o;
              o.threads = threads;
              sweep_result res;
              {
                  py::gil_scoped_release release;
                  res = sweep_threshold_surface(p->grid, p->k, p->c, o);
              }
              std::ostringstream csv;
              write_sweep_csv(csv, res);
              py::dict d;
              d["csv"] = csv.str();
              d["rows"] = res.summary.rows;
              d["measured"] = res.summary.measured;
              d["failed"] = res.summary.failed;
              d["max_discrepancy"] = res.summary.max_discrepancy;
              return d;
          },
          py::arg("preset"), py::arg("threads") = 0);

    m.def("render_portrait",
          [](const std::string& preset) {
              const auto p = find_portrait_preset(preset);
              if (!p) throw invalid_config("unknown portrait preset: " + preset);
              return portrait_to_json(render_portrait(*p));
          },
          py::arg("preset"), "Portrait geometry as a JSON string.");

    m.def("run_verification",
          [](bool full) {
              verification_options o;
              o.full = full;
              py::list out;
              for (const auto& r : run_verification(o)) out.append(py::make_tuple(r.name, r.passed, r.detail));
              return out;
          },
          py::arg("full") = false);

    m.def("run_cli",
          [](const std::vector<std::string>& args) {
              std::ostringstream out, err;
              const int code = run_cli(args, out, err);
              return py::make_tuple(code, out.str(), err.str());
          },
          py::arg("args"), "Runs the command-line tool in-process: (exit_code, stdout, stderr).");
}
