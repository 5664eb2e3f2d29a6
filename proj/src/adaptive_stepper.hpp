#pragma once

// Embedded Dormand-Prince 5(4) driver with step rejection, a state
// validity veto and threshold-crossing bracketing. Internal to dynamics.cpp.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include <boost/numeric/odeint/algebra/array_algebra.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_dopri5.hpp>

#include "repct/dynamics.hpp"
#include "repct/errors.hpp"

namespace repct::detail {

template <std::size_t N>
using state_array = std::array<double, N>;

enum class run_end { reached_end, crossed_threshold, max_steps };

template <std::size_t N>
struct run_result {
    run_end end = run_end::reached_end;
    double t = 0.0;
    state_array<N> x{};
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

inline bool all_finite(const auto& x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

/// Rhs(const state&, state& dxdt); Valid(const state&) -> bool vetoes a step;
/// Exceeds(const state&) -> bool ends the run; Accept(double t, const state&,
/// bool on_grid) is called after every accepted step (and once for t = 0),
/// with on_grid set when t is a requested sample time.
template <std::size_t N, class Rhs, class Valid, class Exceeds, class Accept>
run_result<N> run_dopri5(const state_array<N>& x0, const integrator_config& cfg, Rhs rhs,
                         Valid valid, Exceeds exceeds, Accept accept) {
    namespace ode = boost::numeric::odeint;
    using state = state_array<N>;
    ode::runge_kutta_dopri5<state, double, state, double, ode::array_algebra> stepper;
    auto system = [&rhs](const state& x, state& dxdt, double) { rhs(x, dxdt); };

    const double t_end = cfg.t_end;
    const double h_min = 1e-14 * t_end;

    auto error_norm = [&](const state& from, const state& to, const state& err) {
        double worst = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double scale =
                cfg.abs_tol + cfg.rel_tol * std::max(std::abs(from[i]), std::abs(to[i]));
            worst = std::max(worst, std::abs(err[i]) / scale);
        }
        return worst;
    };

    run_result<N> res;
    state x = x0;
    state dxdt{};
    system(x, dxdt, 0.0);
    double t = 0.0;
    accept(t, x, true);

    // Initial step from the first-order scale of the problem.
    double h;
    {
        double xn = 0.0, fn = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = cfg.abs_tol + cfg.rel_tol * std::abs(x[i]);
            xn = std::max(xn, std::abs(x[i]) / sc);
            fn = std::max(fn, std::abs(dxdt[i]) / sc);
        }
        h = (xn < 1e-5 || fn < 1e-5) ? 1e-6 : 0.01 * xn / fn;
        h = std::min({h, 0.1 * t_end, 0.1});
        h = std::max(h, 1e-10 * t_end);
    }

    const bool sampled = cfg.sample_dt > 0.0;
    std::size_t next_sample_index = 1;
    auto next_sample = [&] {
        return std::min(t_end, static_cast<double>(next_sample_index) * cfg.sample_dt);
    };

    state out{}, dxdt_out{}, err{};
    while (t < t_end) {
        if (res.accepted >= cfg.max_steps) {
            res.end = run_end::max_steps;
            break;
        }
        double target = t_end;
        if (sampled) target = next_sample();
        bool clipped = false;
        double h_try = h;
        if (t + h_try >= target) {
            h_try = target - t;
            clipped = true;
        }

        stepper.do_step(system, x, dxdt, t, out, dxdt_out, h_try, err);
        const double norm = error_norm(x, out, err);

        if (!std::isfinite(norm) || !all_finite(out) || norm > 1.0) {
            ++res.rejected;
            const double shrink =
                std::isfinite(norm) && all_finite(out) ? std::max(0.2, 0.9 * std::pow(norm, -0.2)) : 0.2;
            h = h_try * shrink;
            if (h < h_min) {
                throw step_failure("step size underflow at t = " + std::to_string(t), t, h);
            }
            continue;
        }
        if (!valid(out)) {
            ++res.rejected;
            h = 0.5 * h_try;
            if (h < h_min) {
                throw step_failure("step size underflow at t = " + std::to_string(t), t, h);
            }
            continue;
        }

        if (exceeds(out)) {
            // Bracket the crossing with single steps of bisected length from (t, x).
            double lo = 0.0;
            double hi = h_try;
            state probe{}, dprobe{}, eprobe{};
            for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, t); ++it) {
                const double mid = 0.5 * (lo + hi);
                stepper.do_step(system, x, dxdt, t, probe, dprobe, mid, eprobe);
                if (!all_finite(probe) || exceeds(probe)) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            ++res.accepted;
            res.end = run_end::crossed_threshold;
            res.t = t + h_try;
            res.x = out;
            res.bracket_lo = t + lo;
            res.bracket_hi = t + hi;
            return res;
        }

        ++res.accepted;
        t = clipped ? target : t + h_try;
        x = out;
        dxdt = dxdt_out;
        if (sampled && clipped && target < t_end) ++next_sample_index;
        accept(t, x, !sampled || clipped);

        const double grow = norm == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(norm, -0.2)));
        h = clipped ? std::max(h, h_try * grow) : h_try * grow;
    }
    res.t = t;
    res.x = x;
    return res;
}

}  // namespace repct::detail
