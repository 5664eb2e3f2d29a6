#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "repct/dynamics.hpp"
#include "repct/thresholds.hpp"

namespace repct {

/// Which edge of the admissible d0 set the bisection targets.
enum class threshold_branch {
    lower_bound,     // d0 >= surface: breakdown below, survival above
    interval_lower,  // -g1 end of |d0| <= g1
    interval_upper,  // +g1 end of |d0| <= g1
};

std::string_view to_string(threshold_branch b);

struct bisection_options {
    /// Integration settings; t_end is replaced by horizon.
    integrator_config integrator{};
    double horizon = 50.0;
    double tol_d = 1e-3;
    /// Overrides the analytic bracket. Order does not matter.
    std::optional<std::pair<double, double>> probes;
};

struct bisection_result {
    double d_critical_empirical = 0.0;
    double bracket_width = 0.0;
    std::size_t n_simulations = 0;
    std::optional<double> analytic_value;
    /// |empirical - analytic|, NaN when no analytic value applies.
    double discrepancy = 0.0;
    double survive_end = 0.0;
    double breakdown_end = 0.0;
    /// Some run stopped at max_steps and was counted as surviving.
    bool max_steps_flagged = false;
    /// Some run hit step underflow and was counted as breaking down.
    bool step_failure_flagged = false;
};

/// Analytic surface value for a branch, if the regime has one.
std::optional<double> analytic_threshold(double rho0, double gamma0, double k, double c,
                                         threshold_branch branch);

/// Whether the reduced trajectory from (rho0, d0) stays below the blow-up
/// threshold up to the horizon.
bool survives(double rho0, double d0, double beta, double k, double c,
              const bisection_options& opts, bool* max_steps_hit = nullptr,
              bool* step_failed = nullptr);

/// Bisects d0 between a breakdown and a surviving probe until the bracket is
/// narrower than tol_d. Throws no_bracket when both probes agree.
bisection_result empirical_threshold(double rho0, double gamma0, double k, double c,
                                     threshold_branch branch, const bisection_options& opts);

/// Default branch: lower_bound for c = 0, interval_lower for c > 0.
bisection_result empirical_threshold(double rho0, double gamma0, double k, double c,
                                     const bisection_options& opts);

struct sweep_point {
    double rho0 = 0.0;
    double gamma0 = 0.0;
};

struct sweep_row {
    sweep_point point;
    double k = 1.0;
    double c = 0.0;
    std::string branch;
    std::optional<double> analytic;
    double empirical = 0.0;
    double discrepancy = 0.0;
    double bracket_width = 0.0;
    std::size_t n_sims = 0;
    std::string status;
};

struct sweep_summary {
    std::size_t rows = 0;
    std::size_t measured = 0;
    std::size_t failed = 0;
    std::size_t excluded = 0;
    double max_discrepancy = 0.0;
    double median_discrepancy = 0.0;
};

struct sweep_options {
    bisection_options bisection{};
    /// Relative distance to Gamma = 0, Gamma = 2k rho (c = 0), beta = k/2c
    /// and rho = rho1*, rho2* (c > 0) below which a cell is skipped.
    double boundary_exclusion = 1e-3;
    /// 0: REPCT_THREADS, else hardware concurrency.
    unsigned threads = 0;
};

struct sweep_result {
    std::vector<sweep_row> rows;
    sweep_summary summary;
};

/// One or more rows per grid point, in grid order. Per-point failures are
/// recorded in the row status.
sweep_result sweep_threshold_surface(std::span<const sweep_point> grid, double k, double c,
                                     const sweep_options& opts);

/// Columns rho0,Gamma0,k,c,branch,analytic,empirical,discrepancy,bracket_width,n_sims,status.
void write_sweep_csv(std::ostream& os, const sweep_result& result);

/// Thread count from REPCT_THREADS, falling back to hardware concurrency.
unsigned default_thread_count();

struct nullcline_point {
    double rho = 0.0;
    std::optional<double> d_plus;
    std::optional<double> d_minus;
};

/// Solves d' = 0 for d: d = +-sqrt(2k(rho - c) - beta rho^2) where real.
std::vector<nullcline_point> nullcline(double beta, double k, double c,
                                       std::span<const double> rho_samples);

struct phase_point {
    double rho = 0.0;
    double d = 0.0;
};

/// Level set of the invariant through the saddle.
///
/// c = 0 (beta > 0): the signed stable-manifold graph d = g(rho), negative
/// left of 2k/beta. c > 0 (0 < beta < k/2c): the upper half d >= 0 of the
/// homoclinic level set d^2 = rho G(rho, rho2*, beta); samples where it is not
/// real are skipped. Throws domain_error outside these regimes.
std::vector<phase_point> separatrix(double beta, double k, double c,
                                    std::span<const double> rho_samples);

struct portrait_spec {
    double beta = 0.0;
    double k = 1.0;
    double c = 0.0;
    double rho_min = 0.0;
    double rho_max = 4.0;
    double d_min = -3.0;
    double d_max = 3.0;
    std::vector<lagrangian_state> seeds;
    double sample_dt = 0.05;
    double horizon = 20.0;
    std::size_t rho_samples = 201;

    void validate() const;
};

struct portrait_trajectory {
    lagrangian_state seed;
    std::vector<trajectory_sample> samples;
    std::optional<sim_outcome> outcome;  // empty when integration failed
    std::string error;
};

struct portrait_dataset {
    portrait_spec spec;
    std::vector<nullcline_point> nullcline;
    std::vector<phase_point> separatrix;
    critical_points_result critical;
    std::vector<portrait_trajectory> trajectories;
};

portrait_dataset render_portrait(const portrait_spec& spec);

/// Keys params, nullcline, separatrix, critical_points, trajectories.
std::string portrait_to_json(const portrait_dataset& data, int indent = -1);

}  // namespace repct
