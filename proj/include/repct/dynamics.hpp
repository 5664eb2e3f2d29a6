#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "repct/spectral.hpp"

namespace repct {

/// Reduced phase point (rho, d) along one particle path.
struct lagrangian_state {
    double rho = 0.0;
    double d = 0.0;
};

struct full_state {
    gradient_tensor m;
    double rho = 0.0;
};

struct reduced_derivative {
    double drho_dt = 0.0;
    double dd_dt = 0.0;
};

struct full_derivative {
    gradient_tensor dm_dt;
    double drho_dt = 0.0;
};

struct integrator_config {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double t_end = 50.0;
    double blowup_threshold = 1e8;
    std::size_t max_steps = 2'000'000;
    /// Sampling cadence: > 0 samples at multiples of sample_dt, 0 keeps every
    /// accepted step.
    double sample_dt = 0.0;
    /// false keeps only the first and last sample.
    bool record = true;

    void validate() const;
};

enum class outcome_kind { global, breakdown };

struct trajectory_sample {
    double t = 0.0;
    double rho = 0.0;
    double d = 0.0;
    std::array<double, 4> m{};  // populated for full-system runs only
};

struct sim_diagnostics {
    double max_abs_d = 0.0;
    double max_rho = 0.0;
    /// max |I(t) - I(0)| of invariant_value over accepted steps (0 for vacuum runs).
    double invariant_drift = 0.0;
    /// Full runs: max relative change of (p, q, omega) / rho.
    double shear_ratio_drift = 0.0;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    bool max_steps_hit = false;
};

struct sim_outcome {
    outcome_kind kind = outcome_kind::global;
    /// Time reached. Equals cfg.t_end unless max_steps was hit.
    double t_reached = 0.0;
    /// Breakdown only: midpoint and half-width of the bracket around the
    /// threshold crossing.
    double t_star = 0.0;
    double t_star_halfwidth = 0.0;
    bool has_tensor = false;
    std::vector<trajectory_sample> trajectory;
    sim_diagnostics diagnostics;
};

/// (-rho d, k(rho - c) - (d^2 + beta rho^2) / 2).
reduced_derivative rhs_reduced(const lagrangian_state& s, double beta, double k, double c);

/// (-M^2 + (k/2)(rho - c) I, -rho tr M).
full_derivative rhs_full(const full_state& s, double k, double c);

/// (d^2 + 2ck)/rho - beta rho + 2k ln rho, conserved by the reduced flow.
///
/// Per-regime forms differ from this one by additive constants only:
///   c = 0            : (d^2 - beta rho^2)/rho + 2k ln rho, identical;
///   c > 0, beta < 0  : the Lyapunov function V equals this minus 2k ln(2c);
///   c > 0, beta >= 0 : identical (beta = 0 drops the middle term).
double invariant_value(const lagrangian_state& s, double beta, double k, double c);

/// rho^-1 [d^2 - beta rho^2 + 2k rho ln(rho/2c) + 2ck]; nonnegative for beta < 0.
double v_lyapunov(const lagrangian_state& s, double beta, double k, double c);

/// d0 / (1 + d0 t / 2): divergence on the invariant vacuum set rho = 0.
double vacuum_solution(double d0, double t);

/// Integrates the reduced (rho, d) system. rho0 = 0 uses the closed-form
/// vacuum solution and ignores beta.
sim_outcome integrate_reduced(const lagrangian_state& init, double beta, double k, double c,
                              const integrator_config& cfg);

/// Convenience overload taking beta from Gamma0 / rho0^2.
sim_outcome integrate_reduced(const initial_config& config, const integrator_config& cfg);

/// Integrates the full 5-dimensional (M, rho) system.
sim_outcome integrate_full(const full_state& init, double k, double c,
                           const integrator_config& cfg);

/// Header `t,rho,d[,m11,m12,m21,m22]`, 17 significant digits.
void write_trajectory_csv(std::ostream& os, const sim_outcome& outcome);

}  // namespace repct
