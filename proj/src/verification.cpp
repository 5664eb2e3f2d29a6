#include "repct/verification.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <sstream>

#include "repct/dynamics.hpp"
#include "repct/experiments.hpp"
#include "repct/presets.hpp"
#include "repct/spectral.hpp"
#include "repct/thresholds.hpp"

namespace repct {

namespace {

double rel_err(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

property_result check(std::string name, std::function<property_result()> body) {
    try {
        auto r = body();
        r.name = std::move(name);
        return r;
    } catch (const std::exception& e) {
        return {std::move(name), false, std::string("exception: ") + e.what()};
    }
}

property_result spectral_identities(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    double worst_gap = 0.0, worst_sum = 0.0, worst_prod = 0.0;
    bool type_ok = true;
    for (int i = 0; i < 1000; ++i) {
        const gradient_tensor m(u(rng), u(rng), u(rng), u(rng));
        const auto s = decompose(m);
        const double gap = spectral_gap(m);
        const double scale = 1.0 + s.p * s.p + s.q * s.q + s.omega * s.omega;
        worst_gap = std::max(worst_gap, std::abs(gap - (s.p * s.p + s.q * s.q - s.omega * s.omega)) / scale);
        const auto ev = eigenvalues(m);
        const double mag = 1.0 + std::abs(m.trace()) + std::abs(m.determinant());
        worst_sum = std::max(worst_sum, std::abs(ev.lambda1 + ev.lambda2 - m.trace()) / mag);
        worst_prod = std::max(worst_prod, std::abs(ev.lambda1 * ev.lambda2 - m.determinant()) / mag);
        const bool complex_pair = ev.lambda1.imag() != 0.0;
        if (complex_pair != (gap < 0.0)) type_ok = false;
    }
    const bool ok = worst_gap < 1e-12 && worst_sum < 1e-12 && worst_prod < 1e-12 && type_ok;
    return {"", ok, "gap " + fmt(worst_gap) + ", trace " + fmt(worst_sum) + ", det " + fmt(worst_prod)};
}

property_result closed_forms() {
    const double k = 1.0;
    double worst_zero = 0.0, worst_sep = 0.0, worst_g1 = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double rho = 0.1 + 0.05 * i;
        worst_zero = std::max(worst_zero, std::abs(g_zero_background(rho, 2.0 * k * rho, k)));
    }
    // Separatrix against g, away from the saddle where both vanish.
    for (double beta : {0.5, 1.0}) {
        const double saddle = 2.0 * k / beta;
        std::vector<double> rhos;
        for (int i = 0; i < 50; ++i) {
            const double rho = 0.2 + 0.1 * i;
            if (std::abs(rho - saddle) > 0.02 * saddle) rhos.push_back(rho);
        }
        const auto sep = separatrix(beta, k, 0.0, rhos);
        for (const auto& p : sep) {
            worst_sep = std::max(worst_sep, rel_err(p.d, g_zero_background(p.rho, beta * p.rho * p.rho, k)));
        }
    }
    // g1^2 = rho G(rho, rho2*, Gamma/rho^2) on the interval branch.
    const double c = 1.0;
    for (int i = 0; i < 100; ++i) {
        const double beta = 0.05 + 0.4 * (i % 10) / 10.0;
        const auto cp = critical_points(beta, k, c);
        const double r1 = *cp.rho1_star, r2 = *cp.rho2_star;
        const double rho = r1 + (r2 - r1) * (0.05 + 0.9 * (i / 10) / 9.0);
        const double g1 = g1_nonzero_background(rho, beta * rho * rho, k, c);
        worst_g1 = std::max(worst_g1, rel_err(g1 * g1, rho * G(rho, r2, beta, k, c)));
    }
    const bool ok = worst_zero == 0.0 && worst_sep < 1e-10 && worst_g1 < 1e-9;
    return {"", ok,
            "g(rho,2k rho) " + fmt(worst_zero) + ", separatrix " + fmt(worst_sep) + ", g1^2 " +
                fmt(worst_g1)};
}

property_result rest_point_residuals() {
    const double k = 1.0, c = 1.0;
    double worst = 0.0;
    for (int i = 1; i < 50; ++i) {
        const double beta = (k / (2.0 * c)) * i / 50.0;
        const auto cp = critical_points(beta, k, c);
        for (double r : {*cp.rho1_star, *cp.rho2_star}) {
            const double scale = 2.0 * k * r + beta * r * r + 2.0 * c * k;
            worst = std::max(worst, std::abs(2.0 * k * (r - c) - beta * r * r) / scale);
        }
    }
    return {"", worst < 1e-14, "max residual " + fmt(worst)};
}

property_result saddle_linearization() {
    const double beta = 0.25, k = 1.0, c = 1.0;
    const double r2 = *critical_points(beta, k, c).rho2_star;
    const double h = 1e-6;
    auto f = [&](double rho, double d) { return rhs_reduced({rho, d}, beta, k, c); };
    const auto fr_p = f(r2 + h, 0.0), fr_m = f(r2 - h, 0.0);
    const auto fd_p = f(r2, h), fd_m = f(r2, -h);
    const double a = (fr_p.drho_dt - fr_m.drho_dt) / (2 * h), b = (fd_p.drho_dt - fd_m.drho_dt) / (2 * h);
    const double cc = (fr_p.dd_dt - fr_m.dd_dt) / (2 * h), d = (fd_p.dd_dt - fd_m.dd_dt) / (2 * h);
    const double tr = a + d, det = a * d - b * cc;
    const double disc = std::sqrt(tr * tr / 4.0 - det);
    const double expected = std::sqrt(r2 * std::sqrt(k * k - 2.0 * c * k * beta));
    const double err = std::max(std::abs(tr / 2.0 + disc - expected), std::abs(tr / 2.0 - disc + expected));
    return {"", err < 1e-6, "eigenvalue error " + fmt(err)};
}

property_result lyapunov_positivity() {
    double lowest = INFINITY;
    for (double beta : {-0.5, -2.0}) {
        for (int i = 1; i <= 50; ++i) {
            for (int j = 0; j < 50; ++j) {
                const double rho = 10.0 * i / 50.0;
                const double d = -10.0 + 20.0 * j / 49.0;
                lowest = std::min(lowest, v_lyapunov({rho, d}, beta, 1.0, 1.0));
            }
        }
    }
    return {"", lowest >= -1e-12, "min V " + fmt(lowest)};
}

property_result invariant_drift() {
    struct regime {
        double beta, c;
        lagrangian_state s;
    };
    const double g2_3 = g2_nonzero_background(3.0, 1.0, 1.0);
    const regime regimes[] = {{-1.0, 0.0, {1.0, 0.0}},  {1.0, 0.0, {1.0, 1.0}},
                              {-1.0, 1.0, {1.0, 0.5}},  {0.0, 1.0, {1.5, 0.0}},
                              {0.25, 1.0, {2.0, 0.0}},  {0.5, 1.0, {3.0, g2_3}}};
    integrator_config cfg;
    cfg.t_end = 10.0;
    cfg.record = false;
    double worst = 0.0;
    for (const auto& r : regimes) {
        const auto out = integrate_reduced(r.s, r.beta, 1.0, r.c, cfg);
        worst = std::max(worst, out.diagnostics.invariant_drift);
    }
    return {"", worst < 1e-6, "max drift " + fmt(worst)};
}

property_result spectral_reduction(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> entry(-1.0, 1.0), dens(0.5, 2.0);
    integrator_config cfg;
    cfg.t_end = 5.0;
    cfg.sample_dt = 0.05;
    double worst_dev = 0.0, worst_ratio = 0.0;
    int accepted = 0, attempts = 0;
    while (accepted < 10 && attempts < 10000) {
        ++attempts;
        const gradient_tensor m(entry(rng), entry(rng), entry(rng), entry(rng));
        const double rho0 = dens(rng);
        const double c = (accepted % 4 < 2) ? 0.0 : 1.0;
        const double gap = spectral_gap(m);
        const bool want_negative = accepted % 2 == 0;
        if ((gap < 0.0) != want_negative) continue;
        const initial_config ic{rho0, m.trace(), gap, 1.0, c};
        if (classify(ic).where == region::supercritical) continue;
        const auto full = integrate_full({m, rho0}, 1.0, c, cfg);
        const auto red = integrate_reduced({rho0, m.trace()}, gap / (rho0 * rho0), 1.0, c, cfg);
        if (full.kind != outcome_kind::global || red.kind != outcome_kind::global) continue;
        const std::size_t n = std::min(full.trajectory.size(), red.trajectory.size());
        for (std::size_t i = 0; i < n; ++i) {
            worst_dev = std::max({worst_dev, std::abs(full.trajectory[i].rho - red.trajectory[i].rho),
                                  std::abs(full.trajectory[i].d - red.trajectory[i].d)});
        }
        worst_ratio = std::max(worst_ratio, full.diagnostics.shear_ratio_drift);
        ++accepted;
    }
    const bool ok = accepted == 10 && worst_dev < 1e-6 && worst_ratio < 1e-8;
    return {"", ok,
            std::to_string(accepted) + " runs, (tr M, rho) deviation " + fmt(worst_dev) +
                ", shear ratio drift " + fmt(worst_ratio)};
}

property_result breakdown_bounds() {
    integrator_config cfg;
    cfg.t_end = 50.0;
    double worst_slack = -INFINITY;
    bool all_break = true;
    for (double beta : {0.6, 1.0, 2.0}) {
        for (double d0 : {-1.0, 0.0, 1.0}) {
            const auto out = integrate_reduced({1.0, d0}, beta, 1.0, 1.0, cfg);
            if (out.kind != outcome_kind::breakdown) {
                all_break = false;
                continue;
            }
            const auto it = std::find_if(out.trajectory.begin(), out.trajectory.end(),
                                         [](const trajectory_sample& s) { return s.d < 0.0; });
            if (it == out.trajectory.end()) {
                all_break = false;
                continue;
            }
            worst_slack = std::max(worst_slack, out.t_star - (it->t - 2.0 / it->d + 0.05));
        }
    }
    integrator_config vcfg;
    vcfg.t_end = 10.0;
    const auto vac = integrate_reduced({0.0, -1.0}, 0.0, 1.0, 0.0, vcfg);
    const bool vac_ok = vac.kind == outcome_kind::breakdown && std::abs(vac.t_star - 2.0) <= 0.01;
    return {"", all_break && worst_slack <= 0.0 && vac_ok,
            "bound slack " + fmt(worst_slack) + ", vacuum t* " + fmt(vac.t_star)};
}

property_result degenerate_regime() {
    const double beta = 0.5, k = 1.0, c = 1.0;
    integrator_config cfg;
    cfg.t_end = 50.0;
    cfg.sample_dt = 0.1;
    bool ok = true;
    double closest = INFINITY;
    for (double rho0 : {3.0, 4.0, 5.0}) {
        const double d0 = g2_nonzero_background(rho0, k, c);
        const auto on = integrate_reduced({rho0, d0}, beta, k, c, cfg);
        if (on.kind != outcome_kind::global) ok = false;
        double prev = INFINITY;
        for (const auto& s : on.trajectory) {
            const double dist = std::hypot(s.rho - 2.0 * c, s.d);
            if (dist > prev * (1.0 + 1e-9)) ok = false;
            prev = dist;
        }
        closest = std::min(closest, prev);
        for (double shift : {-0.05, 0.05}) {
            const auto off = integrate_reduced({rho0, d0 + shift}, beta, k, c, cfg);
            if (off.kind != outcome_kind::breakdown) ok = false;
        }
    }
    return {"", ok, "final distance to rest point " + fmt(closest)};
}

property_result time_reversal() {
    // (rho, d, t) -> (rho, -d, -t) maps solutions to solutions.
    integrator_config cfg;
    cfg.t_end = 5.0;
    cfg.record = false;
    double worst = 0.0;
    const struct {
        double beta, c, rho, d;
    } cases[] = {{-1.0, 0.0, 1.0, 0.3}, {0.25, 1.0, 2.0, 0.2}, {-1.0, 1.0, 1.0, 0.5}};
    for (const auto& cs : cases) {
        const auto fwd = integrate_reduced({cs.rho, cs.d}, cs.beta, 1.0, cs.c, cfg);
        const auto& end = fwd.trajectory.back();
        const auto back = integrate_reduced({end.rho, -end.d}, cs.beta, 1.0, cs.c, cfg);
        const auto& home = back.trajectory.back();
        worst = std::max({worst, std::abs(home.rho - cs.rho), std::abs(-home.d - cs.d)});
    }
    return {"", worst < 1e-7, "return error " + fmt(worst)};
}

property_result threshold_recovery(const sweep_preset& preset, const verification_options& opts,
                                   std::size_t stride) {
    std::vector<sweep_point> grid;
    for (std::size_t i = 0; i < preset.grid.size(); i += stride) grid.push_back(preset.grid[i]);
    sweep_options so;
    so.threads = opts.threads;
    const auto res = sweep_threshold_surface(grid, preset.k, preset.c, so);
    const bool ok = res.summary.failed == 0 && res.summary.measured > 0 &&
                    res.summary.max_discrepancy < 1e-2;
    return {"", ok,
            std::to_string(res.summary.measured) + " cells, max discrepancy " +
                fmt(res.summary.max_discrepancy)};
}

}  // namespace

std::vector<property_result> run_verification(const verification_options& opts) {
    std::mt19937_64 rng(opts.seed);
    std::vector<property_result> out;
    out.push_back(check("spectral_identities", [&] { return spectral_identities(rng); }));
    out.push_back(check("closed_form_cross_checks", closed_forms));
    out.push_back(check("rest_point_residuals", rest_point_residuals));
    out.push_back(check("saddle_linearization", saddle_linearization));
    out.push_back(check("lyapunov_positivity", lyapunov_positivity));
    out.push_back(check("invariant_drift", invariant_drift));
    out.push_back(check("spectral_reduction", [&] { return spectral_reduction(rng); }));
    out.push_back(check("breakdown_bounds", breakdown_bounds));
    out.push_back(check("degenerate_regime", degenerate_regime));
    out.push_back(check("time_reversal", time_reversal));
    const std::size_t stride = opts.full ? 1 : 4;
    out.push_back(check("threshold_recovery_zero_background", [&] {
        return threshold_recovery(*find_sweep_preset("thm11"), opts, stride);
    }));
    out.push_back(check("threshold_recovery_nonzero_background", [&] {
        return threshold_recovery(*find_sweep_preset("thm12"), opts, stride);
    }));
    return out;
}

}  // namespace repct
