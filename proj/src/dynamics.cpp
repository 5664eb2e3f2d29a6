#include "repct/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "adaptive_stepper.hpp"
#include "repct/errors.hpp"
#include "repct/format.hpp"

namespace repct {

void integrator_config::validate() const {
    auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
    if (!positive(rel_tol) || !positive(abs_tol) || !positive(t_end) ||
        !positive(blowup_threshold) || max_steps == 0) {
        throw invalid_config(
            "integrator_config: rel_tol, abs_tol, t_end, blowup_threshold and max_steps must be "
            "positive");
    }
    if (!(sample_dt >= 0.0) || !std::isfinite(sample_dt)) {
        throw invalid_config("integrator_config: sample_dt must be >= 0");
    }
}

reduced_derivative rhs_reduced(const lagrangian_state& s, double beta, double k, double c) {
    return {-s.rho * s.d, k * (s.rho - c) - 0.5 * (s.d * s.d + beta * s.rho * s.rho)};
}

namespace {

void rhs_full_raw(const std::array<double, 5>& x, std::array<double, 5>& dx, double k, double c) {
    const double a = x[0], b = x[1], e = x[2], f = x[3], rho = x[4];
    const double forcing = 0.5 * k * (rho - c);
    // M^2 = [[a^2 + b e, b (a + f)], [e (a + f), e b + f^2]]
    dx[0] = forcing - (a * a + b * e);
    dx[1] = -b * (a + f);
    dx[2] = -e * (a + f);
    dx[3] = forcing - (e * b + f * f);
    dx[4] = -rho * (a + f);
}

}  // namespace

full_derivative rhs_full(const full_state& s, double k, double c) {
    const auto& m = s.m.entries();
    std::array<double, 5> x{m[0], m[1], m[2], m[3], s.rho};
    std::array<double, 5> dx{};
    rhs_full_raw(x, dx, k, c);
    return {gradient_tensor(dx[0], dx[1], dx[2], dx[3]), dx[4]};
}

double invariant_value(const lagrangian_state& s, double beta, double k, double c) {
    if (!(s.rho > 0.0)) {
        throw domain_error("invariant_value: rho must be positive");
    }
    return (s.d * s.d + 2.0 * c * k) / s.rho - beta * s.rho + 2.0 * k * std::log(s.rho);
}

double v_lyapunov(const lagrangian_state& s, double beta, double k, double c) {
    if (!(s.rho > 0.0)) {
        throw domain_error("v_lyapunov: rho must be positive");
    }
    if (!(c > 0.0)) {
        throw domain_error("v_lyapunov: requires c > 0");
    }
    const double rho = s.rho;
    return (s.d * s.d - beta * rho * rho + 2.0 * k * rho * std::log(rho / (2.0 * c)) +
            2.0 * c * k) /
           rho;
}

double vacuum_solution(double d0, double t) {
    const double denom = 1.0 + 0.5 * d0 * t;
    if (denom == 0.0) {
        throw pole_error("vacuum_solution: pole at t = -2/d0");
    }
    return d0 / denom;
}

namespace {

void track(sim_diagnostics& diag, double rho, double d) {
    diag.max_abs_d = std::max(diag.max_abs_d, std::abs(d));
    diag.max_rho = std::max(diag.max_rho, rho);
}

sim_outcome integrate_vacuum(double d0, const integrator_config& cfg) {
    sim_outcome out;
    // Closed form: d crosses -threshold at t = -2/d0 - 2/threshold, pole at -2/d0.
    double t_stop = cfg.t_end;
    bool blows = false;
    if (d0 < 0.0) {
        const double pole = -2.0 / d0;
        const double crossing = pole - 2.0 / cfg.blowup_threshold;
        if (crossing <= cfg.t_end) {
            blows = true;
            t_stop = crossing;
            out.t_star = 0.5 * (crossing + pole);
            out.t_star_halfwidth = 0.5 * (pole - crossing);
        }
    }
    if (std::abs(d0) > cfg.blowup_threshold) {
        blows = true;
        t_stop = 0.0;
        out.t_star = 0.0;
        out.t_star_halfwidth = 0.0;
    }
    auto push = [&](double t) {
        const double d = vacuum_solution(d0, t);
        out.trajectory.push_back({t, 0.0, d, {}});
        track(out.diagnostics, 0.0, d);
    };
    push(0.0);
    if (cfg.record) {
        const double dt = cfg.sample_dt > 0.0 ? cfg.sample_dt : cfg.t_end / 1000.0;
        for (std::size_t i = 1;; ++i) {
            const double t = static_cast<double>(i) * dt;
            if (t >= t_stop) break;
            push(t);
        }
    }
    if (t_stop > 0.0) push(t_stop);
    out.kind = blows ? outcome_kind::breakdown : outcome_kind::global;
    out.t_reached = t_stop;
    return out;
}

}  // namespace

sim_outcome integrate_reduced(const lagrangian_state& init, double beta, double k, double c,
                              const integrator_config& cfg) {
    cfg.validate();
    if (!(init.rho >= 0.0) || !std::isfinite(init.rho) || !std::isfinite(init.d)) {
        throw invalid_config("integrate_reduced: initial state must be finite with rho >= 0");
    }
    if (!std::isfinite(beta) || !std::isfinite(k) || !std::isfinite(c)) {
        throw invalid_config("integrate_reduced: beta, k, c must be finite");
    }
    if (init.rho == 0.0) {
        return integrate_vacuum(init.d, cfg);
    }

    sim_outcome out;
    const double level0 = invariant_value(init, beta, k, c);
    auto rhs = [&](const std::array<double, 2>& x, std::array<double, 2>& dx) {
        const auto r = rhs_reduced({x[0], x[1]}, beta, k, c);
        dx[0] = r.drho_dt;
        dx[1] = r.dd_dt;
    };
    auto valid = [](const std::array<double, 2>& x) { return x[0] >= 0.0; };
    const double thr = cfg.blowup_threshold;
    auto exceeds = [thr](const std::array<double, 2>& x) {
        return std::abs(x[1]) > thr || x[0] > thr;
    };
    auto accept = [&](double t, const std::array<double, 2>& x, bool on_grid) {
        track(out.diagnostics, x[0], x[1]);
        if (x[0] > 0.0) {
            const double drift = std::abs(invariant_value({x[0], x[1]}, beta, k, c) - level0);
            out.diagnostics.invariant_drift = std::max(out.diagnostics.invariant_drift, drift);
        }
        if (t == 0.0 || (cfg.record && on_grid)) {
            out.trajectory.push_back({t, x[0], x[1], {}});
        }
    };

    const auto res = detail::run_dopri5<2>({init.rho, init.d}, cfg, rhs, valid, exceeds, accept);
    out.diagnostics.accepted_steps = res.accepted;
    out.diagnostics.rejected_steps = res.rejected;
    out.t_reached = res.t;
    if (out.trajectory.back().t != res.t) {
        out.trajectory.push_back({res.t, res.x[0], res.x[1], {}});
    }
    if (res.end == detail::run_end::crossed_threshold) {
        track(out.diagnostics, res.x[0], res.x[1]);
        out.kind = outcome_kind::breakdown;
        out.t_star = 0.5 * (res.bracket_lo + res.bracket_hi);
        out.t_star_halfwidth = 0.5 * (res.bracket_hi - res.bracket_lo);
    } else {
        out.kind = outcome_kind::global;
        out.diagnostics.max_steps_hit = res.end == detail::run_end::max_steps;
    }
    return out;
}

sim_outcome integrate_reduced(const initial_config& config, const integrator_config& cfg) {
    const auto beta = beta_of(config);
    const double b = is_vacuum(beta) ? 0.0 : std::get<double>(beta);
    return integrate_reduced({config.rho0, config.d0}, b, config.k, config.c, cfg);
}

sim_outcome integrate_full(const full_state& init, double k, double c,
                           const integrator_config& cfg) {
    cfg.validate();
    if (!(init.rho >= 0.0) || !std::isfinite(init.rho)) {
        throw invalid_config("integrate_full: rho must be finite and >= 0");
    }

    sim_outcome out;
    out.has_tensor = true;
    const auto& m0 = init.m.entries();
    const double rho0 = init.rho;
    const double beta = rho0 > 0.0 ? spectral_gap(init.m) / (rho0 * rho0) : 0.0;
    const auto shear0 = decompose(init.m);
    const std::array<double, 3> ratio0 =
        rho0 > 0.0 ? std::array<double, 3>{shear0.p / rho0, shear0.q / rho0, shear0.omega / rho0}
                   : std::array<double, 3>{};
    const double ratio_scale = std::max(
        {std::abs(ratio0[0]), std::abs(ratio0[1]), std::abs(ratio0[2]), std::numeric_limits<double>::min()});
    const double level0 = rho0 > 0.0 ? invariant_value({rho0, init.m.trace()}, beta, k, c) : 0.0;

    auto rhs = [&](const std::array<double, 5>& x, std::array<double, 5>& dx) {
        rhs_full_raw(x, dx, k, c);
    };
    auto valid = [](const std::array<double, 5>& x) { return x[4] >= 0.0; };
    const double thr = cfg.blowup_threshold;
    auto exceeds = [thr](const std::array<double, 5>& x) {
        if (std::abs(x[0] + x[3]) > thr || x[4] > thr) return true;
        for (int i = 0; i < 4; ++i) {
            if (std::abs(x[i]) > thr) return true;
        }
        return false;
    };
    auto accept = [&](double t, const std::array<double, 5>& x, bool on_grid) {
        const double d = x[0] + x[3];
        track(out.diagnostics, x[4], d);
        if (rho0 > 0.0 && x[4] > 0.0) {
            const double drift = std::abs(invariant_value({x[4], d}, beta, k, c) - level0);
            out.diagnostics.invariant_drift = std::max(out.diagnostics.invariant_drift, drift);
            const std::array<double, 3> ratio{(x[0] - x[3]) / x[4], (x[1] + x[2]) / x[4],
                                              (x[1] - x[2]) / x[4]};
            double dev = 0.0;
            for (int i = 0; i < 3; ++i) dev = std::max(dev, std::abs(ratio[i] - ratio0[i]));
            out.diagnostics.shear_ratio_drift =
                std::max(out.diagnostics.shear_ratio_drift, dev / ratio_scale);
        }
        if (t == 0.0 || (cfg.record && on_grid)) {
            out.trajectory.push_back({t, x[4], d, {x[0], x[1], x[2], x[3]}});
        }
    };

    const auto res = detail::run_dopri5<5>({m0[0], m0[1], m0[2], m0[3], rho0}, cfg, rhs, valid,
                                           exceeds, accept);
    out.diagnostics.accepted_steps = res.accepted;
    out.diagnostics.rejected_steps = res.rejected;
    out.t_reached = res.t;
    const auto& x = res.x;
    if (out.trajectory.back().t != res.t) {
        out.trajectory.push_back({res.t, x[4], x[0] + x[3], {x[0], x[1], x[2], x[3]}});
    }
    if (res.end == detail::run_end::crossed_threshold) {
        track(out.diagnostics, x[4], x[0] + x[3]);
        out.kind = outcome_kind::breakdown;
        out.t_star = 0.5 * (res.bracket_lo + res.bracket_hi);
        out.t_star_halfwidth = 0.5 * (res.bracket_hi - res.bracket_lo);
    } else {
        out.kind = outcome_kind::global;
        out.diagnostics.max_steps_hit = res.end == detail::run_end::max_steps;
    }
    return out;
}

void write_trajectory_csv(std::ostream& os, const sim_outcome& outcome) {
    os << (outcome.has_tensor ? "t,rho,d,m11,m12,m21,m22\n" : "t,rho,d\n");
    for (const auto& s : outcome.trajectory) {
        os << format_number(s.t) << ',' << format_number(s.rho) << ',' << format_number(s.d);
        if (outcome.has_tensor) {
            for (double v : s.m) os << ',' << format_number(v);
        }
        os << '\n';
    }
}

}  // namespace repct
