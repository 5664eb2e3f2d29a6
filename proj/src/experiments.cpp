#include "repct/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <string>
#include <thread>

#include "repct/errors.hpp"
#include "repct/format.hpp"

namespace repct {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

bool near_relative(double value, double target, double tol) {
    return std::abs(value - target) <= tol * std::abs(target);
}

}  // namespace

std::string_view to_string(threshold_branch b) {
    switch (b) {
        case threshold_branch::lower_bound: return "lower_bound";
        case threshold_branch::interval_lower: return "interval_lower";
        case threshold_branch::interval_upper: return "interval_upper";
    }
    return "?";
}

std::optional<double> analytic_threshold(double rho0, double gamma0, double k, double c,
                                         threshold_branch branch) {
    if (!(rho0 > 0.0) || !(gamma0 > 0.0)) return std::nullopt;
    if (c == 0.0) {
        if (branch != threshold_branch::lower_bound) return std::nullopt;
        return g_zero_background(rho0, gamma0, k);
    }
    if (!(gamma0 < k / (2.0 * c) * rho0 * rho0)) return std::nullopt;
    double g1 = 0.0;
    try {
        g1 = g1_nonzero_background(rho0, gamma0, k, c);
    } catch (const domain_error&) {
        return std::nullopt;
    }
    return branch == threshold_branch::interval_lower ? -g1 : g1;
}

bool survives(double rho0, double d0, double beta, double k, double c,
              const bisection_options& opts, bool* max_steps_hit, bool* step_failed) {
    integrator_config cfg = opts.integrator;
    cfg.t_end = opts.horizon;
    cfg.record = false;
    try {
        const auto out = integrate_reduced({rho0, d0}, beta, k, c, cfg);
        if (out.diagnostics.max_steps_hit && max_steps_hit) *max_steps_hit = true;
        return out.kind == outcome_kind::global;
    } catch (const step_failure&) {
        if (step_failed) *step_failed = true;
        return false;
    }
}

bisection_result empirical_threshold(double rho0, double gamma0, double k, double c,
                                     threshold_branch branch, const bisection_options& opts) {
    if (!(rho0 > 0.0)) {
        throw invalid_config("empirical_threshold: rho0 must be positive");
    }
    if (!(opts.tol_d > 0.0) || !(opts.horizon > 0.0)) {
        throw invalid_config("empirical_threshold: tol_d and horizon must be positive");
    }
    initial_config{rho0, 0.0, gamma0, k, c}.validate();
    const double beta = gamma0 / (rho0 * rho0);

    bisection_result res;
    res.analytic_value = analytic_threshold(rho0, gamma0, k, c, branch);

    double p1 = -10.0;
    double p2 = 10.0;
    if (opts.probes) {
        std::tie(p1, p2) = *opts.probes;
    } else if (res.analytic_value) {
        const double a = *res.analytic_value;
        const double w = std::max(1.0, std::abs(a));
        switch (branch) {
            case threshold_branch::lower_bound:
                p1 = a - w;
                p2 = a + w;
                break;
            // The inner probe is clipped to the centre of |d0| <= g1.
            case threshold_branch::interval_lower:
                p1 = a - w;
                p2 = 0.0;
                break;
            case threshold_branch::interval_upper:
                p1 = a + w;
                p2 = 0.0;
                break;
        }
    }

    auto run = [&](double d0) {
        ++res.n_simulations;
        return survives(rho0, d0, beta, k, c, opts, &res.max_steps_flagged,
                        &res.step_failure_flagged);
    };

    const bool s1 = run(p1);
    const bool s2 = run(p2);
    if (s1 == s2) {
        throw no_bracket("empirical_threshold: probes " + format_number(p1) + " and " +
                             format_number(p2) + " both " + (s1 ? "survive" : "break down"),
                         p1, p2, s1);
    }
    double alive = s1 ? p1 : p2;
    double dead = s1 ? p2 : p1;
    while (std::abs(alive - dead) > opts.tol_d) {
        const double mid = 0.5 * (alive + dead);
        (run(mid) ? alive : dead) = mid;
    }
    res.survive_end = alive;
    res.breakdown_end = dead;
    res.d_critical_empirical = 0.5 * (alive + dead);
    res.bracket_width = std::abs(alive - dead);
    res.discrepancy =
        res.analytic_value ? std::abs(res.d_critical_empirical - *res.analytic_value) : nan;
    return res;
}

bisection_result empirical_threshold(double rho0, double gamma0, double k, double c,
                                     const bisection_options& opts) {
    return empirical_threshold(
        rho0, gamma0, k, c,
        c == 0.0 ? threshold_branch::lower_bound : threshold_branch::interval_lower, opts);
}

namespace {

sweep_row base_row(const sweep_point& p, double k, double c, std::string branch) {
    sweep_row row;
    row.point = p;
    row.k = k;
    row.c = c;
    row.branch = std::move(branch);
    row.empirical = nan;
    row.discrepancy = nan;
    row.bracket_width = nan;
    return row;
}

sweep_row measured_row(const sweep_point& p, double k, double c, threshold_branch branch,
                       const bisection_options& opts) {
    sweep_row row = base_row(p, k, c, std::string(to_string(branch)));
    row.analytic = analytic_threshold(p.rho0, p.gamma0, k, c, branch);
    try {
        const auto r = empirical_threshold(p.rho0, p.gamma0, k, c, branch, opts);
        row.empirical = r.d_critical_empirical;
        row.discrepancy = r.discrepancy;
        row.bracket_width = r.bracket_width;
        row.n_sims = r.n_simulations;
        row.status = r.max_steps_flagged ? "ok_max_steps" : "ok";
        if (r.step_failure_flagged) row.status += "_step_failure";
    } catch (const no_bracket& e) {
        row.n_sims = 2;
        row.status = std::string("error: no_bracket (") + (e.survived() ? "all survive" : "all break down") + ")";
    } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
    }
    return row;
}

// Cells with no finite threshold: the bisection must fail to bracket.
sweep_row empty_regime_row(const sweep_point& p, double k, double c, const bisection_options& opts) {
    sweep_row row = base_row(p, k, c, "none");
    bisection_options o = opts;
    o.probes = std::pair{-10.0, 10.0};
    try {
        const auto r = empirical_threshold(p.rho0, p.gamma0, k, c, threshold_branch::lower_bound, o);
        row.empirical = r.d_critical_empirical;
        row.bracket_width = r.bracket_width;
        row.n_sims = r.n_simulations;
        row.status = "unexpected_bracket";
    } catch (const no_bracket& e) {
        row.n_sims = 2;
        row.status = e.survived() ? "no_bracket (all survive)" : "no_bracket (all break down)";
    } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
    }
    return row;
}

sweep_row degenerate_row(const sweep_point& p, double k, double c, const bisection_options& opts) {
    sweep_row row = base_row(p, k, c, "degenerate");
    const double beta = p.gamma0 / (p.rho0 * p.rho0);
    std::vector<double> probes{-1.0, 0.0, 1.0};
    if (p.rho0 >= 2.0 * c) {
        const double g2 = g2_nonzero_background(p.rho0, k, c);
        row.analytic = g2;
        probes = {g2 - 0.05, g2 + 0.05};
    }
    bool any_alive = false;
    for (double d0 : probes) {
        ++row.n_sims;
        any_alive = survives(p.rho0, d0, beta, k, c, opts) || any_alive;
    }
    row.status = any_alive ? "unexpected_survival" : "breakdown_off_curve";
    return row;
}

// Probes a cell where the two published S2 statements disagree and records
// which one the simulated outcomes follow.
sweep_row adjudication_row(const sweep_point& p, double k, double c, const bisection_options& opts,
                           bool left_of_center) {
    sweep_row row = base_row(p, k, c, "adjudicate");
    const double beta = p.gamma0 / (p.rho0 * p.rho0);
    const auto g1 = analytic_threshold(p.rho0, p.gamma0, k, c, threshold_branch::interval_upper);
    row.analytic = g1;

    std::vector<double> probes;
    if (g1) {
        const double w = std::max(1.0, *g1);
        const double delta = 0.05 * w;
        probes = {*g1 + w, *g1 + delta, *g1 - delta, 0.0};
    } else {
        probes = {-1.0, 0.0, 1.0};
    }

    bool theorem_ok = true;
    bool lemma_ok = true;
    for (double d0 : probes) {
        ++row.n_sims;
        const bool alive = survives(p.rho0, d0, beta, k, c, opts);
        const initial_config cfg{p.rho0, d0, p.gamma0, k, c};
        const bool by_theorem = classify_nonzero_background(cfg, threshold_rule::theorem).where !=
                                region::supercritical;
        const bool by_lemma = classify_nonzero_background(cfg, threshold_rule::lemma).where !=
                              region::supercritical;
        theorem_ok = theorem_ok && by_theorem == alive;
        lemma_ok = lemma_ok && by_lemma == alive;
    }
    if (theorem_ok && lemma_ok) {
        row.status = "supports_both";
    } else if (lemma_ok) {
        row.status = "supports_lemma";
    } else if (theorem_ok) {
        row.status = "supports_theorem";
    } else {
        row.status = "supports_neither";
    }

    if (g1 && left_of_center && lemma_ok) {
        // The interval form applies; measure its upper end.
        try {
            const auto r = empirical_threshold(p.rho0, p.gamma0, k, c,
                                               threshold_branch::interval_upper, opts);
            row.empirical = r.d_critical_empirical;
            row.discrepancy = r.discrepancy;
            row.bracket_width = r.bracket_width;
            row.n_sims += r.n_simulations;
        } catch (const no_bracket&) {
            row.status += ";no_bracket";
        }
    }
    return row;
}

std::vector<sweep_row> sweep_cell(const sweep_point& p, double k, double c,
                                  const sweep_options& opts) {
    const double excl = opts.boundary_exclusion;
    const auto& bis = opts.bisection;
    if (!(p.rho0 > 0.0) || !std::isfinite(p.rho0) || !std::isfinite(p.gamma0)) {
        auto row = base_row(p, k, c, "none");
        row.status = "error: rho0 must be positive and Gamma0 finite";
        return {row};
    }
    auto excluded = [&](std::string why) {
        auto row = base_row(p, k, c, "none");
        row.status = "excluded (" + why + ")";
        return std::vector<sweep_row>{row};
    };

    const double rho = p.rho0;
    const double gamma = p.gamma0;
    if (std::abs(gamma) <= excl * std::max(1.0, 2.0 * k * rho)) return excluded("Gamma=0");

    if (c == 0.0) {
        if (gamma < 0.0) return {empty_regime_row(p, k, c, bis)};
        if (near_relative(gamma, 2.0 * k * rho, excl)) return excluded("Gamma=2k*rho");
        return {measured_row(p, k, c, threshold_branch::lower_bound, bis)};
    }

    if (gamma < 0.0) return {empty_regime_row(p, k, c, bis)};
    const double beta = gamma / (rho * rho);
    const double beta_edge = k / (2.0 * c);
    if (near_relative(beta, beta_edge, excl)) return {degenerate_row(p, k, c, bis)};
    if (beta > beta_edge) return {empty_regime_row(p, k, c, bis)};

    const auto cp = critical_points(beta, k, c);
    const double rho1 = *cp.rho1_star;
    const double rho2 = *cp.rho2_star;
    if (near_relative(rho, rho1, excl)) return excluded("rho=rho1*");
    if (near_relative(rho, rho2, excl)) return excluded("rho=rho2*");
    if (rho > rho1 && rho < rho2) {
        return {measured_row(p, k, c, threshold_branch::interval_lower, bis),
                measured_row(p, k, c, threshold_branch::interval_upper, bis)};
    }
    return {adjudication_row(p, k, c, bis, rho < rho1)};
}

}  // namespace

unsigned default_thread_count() {
    if (const char* env = std::getenv("REPCT_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

sweep_result sweep_threshold_surface(std::span<const sweep_point> grid, double k, double c,
                                     const sweep_options& opts) {
    if (!(k > 0.0) || c < 0.0) {
        throw invalid_config("sweep_threshold_surface: requires k > 0 and c >= 0");
    }
    std::vector<std::vector<sweep_row>> cells(grid.size());
    unsigned threads = opts.threads > 0 ? opts.threads : default_thread_count();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(grid.size())));

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < grid.size(); i = next++) {
            cells[i] = sweep_cell(grid[i], k, c, opts);
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    sweep_result result;
    std::vector<double> discrepancies;
    for (auto& cell : cells) {
        for (auto& row : cell) {
            if (row.status.starts_with("ok")) {
                ++result.summary.measured;
                discrepancies.push_back(row.discrepancy);
            } else if (row.status.starts_with("error") || row.status.starts_with("unexpected")) {
                ++result.summary.failed;
            } else if (row.status.starts_with("excluded")) {
                ++result.summary.excluded;
            }
            result.rows.push_back(std::move(row));
        }
    }
    result.summary.rows = result.rows.size();
    if (!discrepancies.empty()) {
        std::sort(discrepancies.begin(), discrepancies.end());
        result.summary.max_discrepancy = discrepancies.back();
        const std::size_t n = discrepancies.size();
        result.summary.median_discrepancy =
            n % 2 ? discrepancies[n / 2] : 0.5 * (discrepancies[n / 2 - 1] + discrepancies[n / 2]);
    }
    return result;
}

void write_sweep_csv(std::ostream& os, const sweep_result& result) {
    os << "rho0,Gamma0,k,c,branch,analytic,empirical,discrepancy,bracket_width,n_sims,status\n";
    for (const auto& r : result.rows) {
        os << format_number(r.point.rho0) << ',' << format_number(r.point.gamma0) << ','
           << format_number(r.k) << ',' << format_number(r.c) << ',' << r.branch << ','
           << format_number(r.analytic.value_or(nan)) << ',' << format_number(r.empirical) << ','
           << format_number(r.discrepancy) << ',' << format_number(r.bracket_width) << ','
           << r.n_sims << ',';
        // Status may carry free text; keep the row parseable.
        std::string status = r.status;
        std::replace(status.begin(), status.end(), ',', ';');
        os << status << '\n';
    }
}

}  // namespace repct
