#include "repct/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "repct/dynamics.hpp"
#include "repct/errors.hpp"
#include "repct/experiments.hpp"
#include "repct/format.hpp"
#include "repct/presets.hpp"
#include "repct/thresholds.hpp"
#include "repct/verification.hpp"

namespace repct {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class... Ts>
void require_finite(const char* what, Ts... values) {
    if (!(std::isfinite(values) && ...)) {
        throw invalid_config(std::string(what) + ": values must be finite");
    }
}

nlohmann::json number_or_null(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

struct integrator_flags {
    integrator_config cfg;

    void attach(CLI::App* app) {
        app->add_option("--t-end", cfg.t_end, "Integration horizon");
        app->add_option("--rel-tol", cfg.rel_tol, "Relative tolerance");
        app->add_option("--abs-tol", cfg.abs_tol, "Absolute tolerance");
        app->add_option("--blowup", cfg.blowup_threshold, "Blow-up threshold on |d| and rho");
        app->add_option("--max-steps", cfg.max_steps, "Accepted-step cap");
        app->add_option("--sample-dt", cfg.sample_dt, "Output sampling interval (0: every step)");
    }
};

// Split "a,b" into two finite numbers.
lagrangian_state parse_seed(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw invalid_config("seed must be 'rho,d': " + text);
    try {
        std::size_t used = 0;
        const std::string a = trim(text.substr(0, comma)), b = trim(text.substr(comma + 1));
        const double rho = std::stod(a, &used);
        if (used != a.size()) throw std::invalid_argument(a);
        const double d = std::stod(b, &used);
        if (used != b.size()) throw std::invalid_argument(b);
        return {rho, d};
    } catch (const std::logic_error&) {
        throw invalid_config("seed must be 'rho,d': " + text);
    }
}

std::unique_ptr<std::ofstream> open_output(const std::string& path) {
    auto f = std::make_unique<std::ofstream>(path);
    if (!*f) throw invalid_config("cannot open output file: " + path);
    f->precision(17);
    return f;
}

// Inserts `--key value` pairs from --config files right after the subcommand
// name so that flags given on the command line win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> rest;
    std::vector<std::string> injected;
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw CLI::ArgumentMismatch("--config needs a path");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
            continue;
        }
        for (const auto& [key, value] : read_key_value_file(path)) {
            if (value == "true") {
                injected.push_back("--" + key);
            } else if (value != "false") {
                injected.push_back("--" + key);
                injected.push_back(value);
            }
        }
    }
    if (injected.empty()) return rest;
    if (rest.empty()) throw CLI::ArgumentMismatch("--config requires a subcommand");
    std::vector<std::string> out{rest.front()};
    out.insert(out.end(), injected.begin(), injected.end());
    out.insert(out.end(), rest.begin() + 1, rest.end());
    return out;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw invalid_config("cannot read config file: " + path);
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos || trim(t.substr(0, eq)).empty()) {
            throw invalid_config(path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        out.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return out;
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Critical-threshold classifier, simulator and validation harness", "repct"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    // classify
    auto* classify_cmd = app.add_subcommand("classify", "Region verdict for (rho0, d0, Gamma0)");
    initial_config cls_cfg;
    std::string cls_rule = "theorem";
    classify_cmd->add_option("--rho0", cls_cfg.rho0)->required();
    classify_cmd->add_option("--d0", cls_cfg.d0)->required();
    classify_cmd->add_option("--gamma0", cls_cfg.gamma0)->required();
    classify_cmd->add_option("--k", cls_cfg.k)->required();
    classify_cmd->add_option("--c", cls_cfg.c, "Background density")->capture_default_str();
    classify_cmd->add_option("--rule", cls_rule, "theorem | lemma (c > 0 only)")
        ->check(CLI::IsMember({"theorem", "lemma"}))
        ->capture_default_str();

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Integrate one trajectory");
    initial_config sim_cfg;
    std::optional<double> sim_d0, sim_gamma0;
    std::optional<double> m11, m12, m21, m22;
    bool sim_full = false, check_reduction = false;
    std::string sim_output;
    integrator_flags sim_int;
    sim_cmd->add_option("--rho0", sim_cfg.rho0)->required();
    sim_cmd->add_option("--d0", sim_d0);
    sim_cmd->add_option("--gamma0", sim_gamma0);
    sim_cmd->add_option("--k", sim_cfg.k)->capture_default_str();
    sim_cmd->add_option("--c", sim_cfg.c)->capture_default_str();
    sim_cmd->add_flag("--full", sim_full, "Integrate the full gradient-tensor system");
    sim_cmd->add_option("--m11", m11);
    sim_cmd->add_option("--m12", m12);
    sim_cmd->add_option("--m21", m21);
    sim_cmd->add_option("--m22", m22);
    sim_cmd->add_flag("--check-reduction", check_reduction,
                      "With --full, report the deviation from the reduced system");
    sim_cmd->add_option("--output", sim_output, "Trajectory CSV path");
    sim_int.attach(sim_cmd);

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "Bisect empirical thresholds over a grid");
    std::string sweep_preset_name, sweep_output;
    std::vector<double> sweep_rho0, sweep_gamma0;
    double sweep_k = 1.0, sweep_c = 0.0;
    bool strict = false;
    sweep_options sopts;
    sweep_cmd->add_option("--preset", sweep_preset_name, "thm11 | thm12");
    sweep_cmd->add_option("--rho0", sweep_rho0, "Density values (grid with --gamma0)")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    sweep_cmd->add_option("--gamma0", sweep_gamma0, "Spectral-gap values")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    sweep_cmd->add_option("--k", sweep_k)->capture_default_str();
    sweep_cmd->add_option("--c", sweep_c)->capture_default_str();
    sweep_cmd->add_option("--tol-d", sopts.bisection.tol_d)->capture_default_str();
    sweep_cmd->add_option("--horizon", sopts.bisection.horizon)->capture_default_str();
    sweep_cmd->add_option("--rel-tol", sopts.bisection.integrator.rel_tol);
    sweep_cmd->add_option("--abs-tol", sopts.bisection.integrator.abs_tol);
    sweep_cmd->add_option("--blowup", sopts.bisection.integrator.blowup_threshold);
    sweep_cmd->add_option("--exclusion", sopts.boundary_exclusion)->capture_default_str();
    sweep_cmd->add_option("--threads", sopts.threads, "0: REPCT_THREADS or hardware");
    sweep_cmd->add_flag("--strict", strict, "Exit 4 if any cell fails");
    sweep_cmd->add_option("--output", sweep_output, "CSV path (default: standard output)");

    // portrait
    auto* portrait_cmd = app.add_subcommand("portrait", "Phase-portrait geometry as JSON");
    std::string portrait_preset_name, portrait_output;
    portrait_spec pspec;
    std::vector<std::string> seed_text;
    int indent = -1;
    portrait_cmd->add_option("--preset", portrait_preset_name, "fig21 | fig22 | fig23 | fig31 | fig32");
    portrait_cmd->add_option("--beta", pspec.beta);
    portrait_cmd->add_option("--k", pspec.k);
    portrait_cmd->add_option("--c", pspec.c);
    portrait_cmd->add_option("--rho-min", pspec.rho_min);
    portrait_cmd->add_option("--rho-max", pspec.rho_max);
    portrait_cmd->add_option("--d-min", pspec.d_min);
    portrait_cmd->add_option("--d-max", pspec.d_max);
    portrait_cmd->add_option("--rho-samples", pspec.rho_samples);
    portrait_cmd->add_option("--sample-dt", pspec.sample_dt);
    portrait_cmd->add_option("--horizon", pspec.horizon);
    portrait_cmd->add_option("--seed", seed_text, "Trajectory seed 'rho,d' (repeatable)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    portrait_cmd->add_option("--indent", indent, "JSON indentation (-1: compact)");
    portrait_cmd->add_option("--output", portrait_output, "JSON path (default: standard output)");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Run the property suite");
    verification_options vopts;
    verify_cmd->add_flag("--full", vopts.full, "Run complete threshold sweeps");
    verify_cmd->add_option("--threads", vopts.threads);
    verify_cmd->add_option("--seed", vopts.seed, "Random seed for sampled properties");

    try {
        auto args = expand_config(raw_args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const invalid_config& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    try {
        if (classify_cmd->parsed()) {
            require_finite("classify", cls_cfg.rho0, cls_cfg.d0, cls_cfg.gamma0, cls_cfg.k, cls_cfg.c);
            cls_cfg.validate();
            const auto rule = *parse_threshold_rule(cls_rule);
            const auto v = classify(cls_cfg, rule);
            nlohmann::json j;
            j["region"] = std::string(to_string(v.where));
            j["margin"] = number_or_null(v.margin);
            j["surface_value"] = v.surface_value ? number_or_null(*v.surface_value) : nlohmann::json(nullptr);
            j["theorem"] = cls_cfg.c == 0.0 ? std::string("zero_background")
                                            : "nonzero_background/" + std::string(to_string(rule));
            j["shape"] = std::string(to_string(v.shape));
            out << j.dump() << '\n';
            return exit_ok;
        }

        if (sim_cmd->parsed()) {
            auto& cfg = sim_int.cfg;
            const bool any_m = m11 || m12 || m21 || m22;
            const bool all_m = m11 && m12 && m21 && m22;
            if (any_m && !all_m) throw invalid_config("simulate: give all of --m11 --m12 --m21 --m22");
            if (any_m && !sim_full) throw invalid_config("simulate: tensor entries require --full");
            if (any_m && (sim_d0 || sim_gamma0)) {
                throw invalid_config("simulate: give either tensor entries or --d0/--gamma0");
            }
            if (!any_m && !(sim_d0 && sim_gamma0)) {
                throw invalid_config("simulate: --d0 and --gamma0 are required");
            }
            if (check_reduction && !sim_full) throw invalid_config("simulate: --check-reduction requires --full");

            std::optional<gradient_tensor> m;
            if (all_m) {
                require_finite("simulate", *m11, *m12, *m21, *m22);
                m = gradient_tensor(*m11, *m12, *m21, *m22);
                sim_cfg.d0 = m->trace();
                sim_cfg.gamma0 = spectral_gap(*m);
            } else {
                sim_cfg.d0 = *sim_d0;
                sim_cfg.gamma0 = *sim_gamma0;
            }
            require_finite("simulate", sim_cfg.rho0, sim_cfg.d0, sim_cfg.gamma0, sim_cfg.k, sim_cfg.c);
            sim_cfg.validate();
            if (check_reduction && cfg.sample_dt == 0.0) cfg.sample_dt = cfg.t_end / 1000.0;
            cfg.validate();

            sim_outcome outcome;
            if (sim_full) {
                if (!m) {
                    // Canonical tensor with the requested trace and spectral gap.
                    const double h = 0.5 * sim_cfg.d0;
                    if (sim_cfg.gamma0 >= 0.0) {
                        const double s = 0.5 * std::sqrt(sim_cfg.gamma0);
                        m = gradient_tensor(h + s, 0.0, 0.0, h - s);
                    } else {
                        const double s = 0.5 * std::sqrt(-sim_cfg.gamma0);
                        m = gradient_tensor(h, -s, s, h);
                    }
                }
                outcome = integrate_full({*m, sim_cfg.rho0}, sim_cfg.k, sim_cfg.c, cfg);
            } else {
                outcome = integrate_reduced(sim_cfg, cfg);
            }

            if (!sim_output.empty()) {
                auto f = open_output(sim_output);
                write_trajectory_csv(*f, outcome);
            }
            if (outcome.kind == outcome_kind::global) {
                out << "GLOBAL T=" << format_number(outcome.t_reached);
                if (outcome.diagnostics.max_steps_hit) out << " max_steps_hit";
                out << '\n';
            } else {
                out << "BREAKDOWN t*=" << format_number(outcome.t_star) << " ±"
                    << format_number(outcome.t_star_halfwidth) << '\n';
            }
            if (check_reduction) {
                const auto red = integrate_reduced(sim_cfg, cfg);
                const std::size_t n = std::min(red.trajectory.size(), outcome.trajectory.size());
                double dev = 0.0;
                std::size_t compared = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    const auto& a = outcome.trajectory[i];
                    const auto& b = red.trajectory[i];
                    if (a.t != b.t) break;
                    dev = std::max({dev, std::abs(a.rho - b.rho), std::abs(a.d - b.d)});
                    ++compared;
                }
                out << "REDUCTION max_deviation=" << format_number(dev) << " samples=" << compared
                    << " shear_ratio_drift=" << format_number(outcome.diagnostics.shear_ratio_drift)
                    << '\n';
            }
            return exit_ok;
        }

        if (sweep_cmd->parsed()) {
            std::vector<sweep_point> grid;
            double k = sweep_k, c = sweep_c;
            if (!sweep_preset_name.empty()) {
                if (!sweep_rho0.empty() || !sweep_gamma0.empty()) {
                    throw invalid_config("sweep: --preset excludes --rho0/--gamma0");
                }
                const auto p = find_sweep_preset(sweep_preset_name);
                if (!p) throw invalid_config("sweep: unknown preset '" + sweep_preset_name + "'");
                grid = p->grid;
                k = p->k;
                c = p->c;
            } else {
                if (sweep_rho0.empty() || sweep_gamma0.empty()) {
                    throw invalid_config("sweep: give --preset or both --rho0 and --gamma0");
                }
                for (double r : sweep_rho0) {
                    for (double g : sweep_gamma0) grid.push_back({r, g});
                }
            }
            require_finite("sweep", k, c, sopts.bisection.tol_d, sopts.bisection.horizon);
            if (!(k > 0.0) || c < 0.0) throw invalid_config("sweep: requires k > 0 and c >= 0");
            if (!(sopts.bisection.tol_d > 0.0) || !(sopts.bisection.horizon > 0.0)) {
                throw invalid_config("sweep: tol-d and horizon must be positive");
            }
            for (const auto& pt : grid) {
                require_finite("sweep grid", pt.rho0, pt.gamma0);
                if (pt.rho0 < 0.0) throw invalid_config("sweep: rho0 must be >= 0");
            }

            const auto res = sweep_threshold_surface(grid, k, c, sopts);
            std::ostream* summary_out = &out;
            if (!sweep_output.empty()) {
                auto f = open_output(sweep_output);
                write_sweep_csv(*f, res);
            } else {
                write_sweep_csv(out, res);
                summary_out = &err;
            }
            const auto& s = res.summary;
            *summary_out << "SWEEP rows=" << s.rows << " measured=" << s.measured
                         << " failed=" << s.failed << " excluded=" << s.excluded
                         << " max_discrepancy=" << format_number(s.max_discrepancy)
                         << " median_discrepancy=" << format_number(s.median_discrepancy) << '\n';
            if (strict && s.failed > 0) {
                err << "error: " << s.failed << " sweep cell(s) failed\n";
                return exit_strict_sweep;
            }
            return exit_ok;
        }

        if (portrait_cmd->parsed()) {
            portrait_spec spec = pspec;
            if (!portrait_preset_name.empty()) {
                const auto p = find_portrait_preset(portrait_preset_name);
                if (!p) throw invalid_config("portrait: unknown preset '" + portrait_preset_name + "'");
                spec = *p;
                // Explicit flags refine the preset.
                auto apply = [&](const char* flag, double& field, double value) {
                    if (portrait_cmd->count(flag) > 0) field = value;
                };
                apply("--beta", spec.beta, pspec.beta);
                apply("--k", spec.k, pspec.k);
                apply("--c", spec.c, pspec.c);
                apply("--rho-min", spec.rho_min, pspec.rho_min);
                apply("--rho-max", spec.rho_max, pspec.rho_max);
                apply("--d-min", spec.d_min, pspec.d_min);
                apply("--d-max", spec.d_max, pspec.d_max);
                apply("--sample-dt", spec.sample_dt, pspec.sample_dt);
                apply("--horizon", spec.horizon, pspec.horizon);
                if (portrait_cmd->count("--rho-samples") > 0) spec.rho_samples = pspec.rho_samples;
            }
            if (!seed_text.empty()) {
                spec.seeds.clear();
                for (const auto& s : seed_text) spec.seeds.push_back(parse_seed(s));
            }
            const auto data = render_portrait(spec);
            const std::string json = portrait_to_json(data, indent);
            if (!portrait_output.empty()) {
                auto f = open_output(portrait_output);
                *f << json << '\n';
                out << "PORTRAIT trajectories=" << data.trajectories.size()
                    << " nullcline=" << data.nullcline.size()
                    << " separatrix=" << data.separatrix.size() << '\n';
            } else {
                out << json << '\n';
            }
            return exit_ok;
        }

        if (verify_cmd->parsed()) {
            const auto results = run_verification(vopts);
            std::size_t failed = 0;
            for (const auto& r : results) {
                if (!r.passed) ++failed;
                out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
            }
            out << "VERIFY passed=" << results.size() - failed << " failed=" << failed << '\n';
            return failed == 0 ? exit_ok : exit_property_failed;
        }
    } catch (const step_failure& e) {
        err << "error: integration failed: " << e.what() << '\n';
        return exit_integration;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_property_failed;
    }
    return exit_usage;
}

}  // namespace repct
