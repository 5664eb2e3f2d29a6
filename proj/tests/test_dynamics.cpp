#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "repct/dynamics.hpp"
#include "repct/errors.hpp"
#include "repct/thresholds.hpp"

using namespace repct;

TEST_SUITE("dynamics") {

TEST_CASE("invariant is constant along the vector field") {
    // grad I . f = 0, checked with central differences at random points.
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> r(0.2, 5.0), dd(-3.0, 3.0), b(-2.0, 2.0), cc(0.0, 2.0);
    for (int i = 0; i < 300; ++i) {
        const double rho = r(rng), d = dd(rng), beta = b(rng), c = cc(rng), k = 1.0;
        const double h = 1e-6;
        const double dI_drho = (invariant_value({rho + h, d}, beta, k, c) -
                                invariant_value({rho - h, d}, beta, k, c)) / (2 * h);
        const double dI_dd = (invariant_value({rho, d + h}, beta, k, c) -
                              invariant_value({rho, d - h}, beta, k, c)) / (2 * h);
        const auto f = rhs_reduced({rho, d}, beta, k, c);
        const double scale = std::abs(dI_drho * f.drho_dt) + std::abs(dI_dd * f.dd_dt) + 1.0;
        CHECK(std::abs(dI_drho * f.drho_dt + dI_dd * f.dd_dt) < 1e-7 * scale);
    }
}

TEST_CASE("full right-hand side traces to the reduced one") {
    const gradient_tensor m(0.3, -0.7, 0.4, -0.1);
    const double rho = 1.3, k = 1.0, c = 0.5;
    const auto full = rhs_full({m, rho}, k, c);
    const double beta = spectral_gap(m) / (rho * rho);
    const auto red = rhs_reduced({rho, m.trace()}, beta, k, c);
    CHECK(full.drho_dt == doctest::Approx(red.drho_dt));
    CHECK(full.dm_dt.trace() == doctest::Approx(red.dd_dt));
}

TEST_CASE("Lyapunov function is the shifted invariant") {
    const lagrangian_state s{1.7, -0.4};
    CHECK(v_lyapunov(s, -0.5, 1.0, 1.0) ==
          doctest::Approx(invariant_value(s, -0.5, 1.0, 1.0) - 2.0 * std::log(2.0)));
    CHECK_THROWS_AS(v_lyapunov(s, -0.5, 1.0, 0.0), repct::domain_error);
    CHECK_THROWS_AS(invariant_value({0.0, 1.0}, 1.0, 1.0, 0.0), repct::domain_error);
}

TEST_CASE("vacuum closed form and pole") {
    CHECK(vacuum_solution(-1.0, 1.0) == doctest::Approx(-2.0));
    CHECK_THROWS_AS(vacuum_solution(-1.0, 2.0), pole_error);
    integrator_config cfg;
    cfg.t_end = 10.0;
    const auto out = integrate_reduced({0.0, -1.0}, 0.0, 1.0, 0.0, cfg);
    CHECK(out.kind == outcome_kind::breakdown);
    CHECK(out.t_star == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(integrate_reduced({0.0, 0.5}, 0.0, 1.0, 0.0, cfg).kind == outcome_kind::global);
}

TEST_CASE("complex spectral gap stays smooth") {
    integrator_config cfg;
    cfg.t_end = 100.0;
    cfg.record = false;
    const auto out = integrate_reduced({1.0, 0.0, -4.0, 1.0, 0.0}, cfg);
    CHECK(out.kind == outcome_kind::global);
    CHECK(out.t_reached == 100.0);
    CHECK(out.diagnostics.invariant_drift < 1e-6);
}

TEST_CASE("time reversal returns to the start") {
    integrator_config cfg;
    cfg.t_end = 4.0;
    const auto fwd = integrate_reduced({2.0, 0.3}, 0.25, 1.0, 1.0, cfg);
    const auto& e = fwd.trajectory.back();
    const auto back = integrate_reduced({e.rho, -e.d}, 0.25, 1.0, 1.0, cfg);
    CHECK(back.trajectory.back().rho == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(-back.trajectory.back().d == doctest::Approx(0.3).epsilon(1e-8));
}

TEST_CASE("zero-background separatrix splits survival from breakdown") {
    // beta = 1, k = 1: d0 above g survives, below breaks down.
    integrator_config cfg;
    cfg.t_end = 50.0;
    cfg.record = false;
    for (double rho : {0.5, 1.0, 3.0}) {
        const double g = g_zero_background(rho, rho * rho, 1.0);
        CHECK(integrate_reduced({rho, g + 0.05}, 1.0, 1.0, 0.0, cfg).kind == outcome_kind::global);
        CHECK(integrate_reduced({rho, g - 0.05}, 1.0, 1.0, 0.0, cfg).kind == outcome_kind::breakdown);
    }
}

TEST_CASE("homoclinic loop contains bounded orbits") {
    const double beta = 0.25, k = 1.0, c = 1.0;
    const auto cp = critical_points(beta, k, c);
    integrator_config cfg;
    cfg.t_end = 50.0;
    cfg.record = false;
    for (double f : {0.2, 0.5, 0.8}) {
        const double rho = *cp.rho1_star + f * (*cp.rho2_star - *cp.rho1_star);
        const double g1 = g1_nonzero_background(rho, beta * rho * rho, k, c);
        const auto in = integrate_reduced({rho, 0.9 * g1}, beta, k, c, cfg);
        CHECK(in.kind == outcome_kind::global);
        CHECK(in.diagnostics.max_rho < *cp.rho2_star);
        CHECK(integrate_reduced({rho, -g1 - 0.05}, beta, k, c, cfg).kind == outcome_kind::breakdown);
    }
}

TEST_CASE("full system conserves shear ratios and matches reduction") {
    integrator_config cfg;
    cfg.t_end = 5.0;
    cfg.sample_dt = 0.1;
    const gradient_tensor m(0.2, -0.5, 0.6, 0.1);
    const double rho = 1.2;
    const auto full = integrate_full({m, rho}, 1.0, 0.0, cfg);
    const auto red = integrate_reduced({rho, m.trace()}, spectral_gap(m) / (rho * rho), 1.0, 0.0, cfg);
    REQUIRE(full.trajectory.size() == red.trajectory.size());
    for (std::size_t i = 0; i < full.trajectory.size(); ++i) {
        CHECK(full.trajectory[i].t == red.trajectory[i].t);
        CHECK(full.trajectory[i].d == doctest::Approx(red.trajectory[i].d).epsilon(1e-7));
        CHECK(full.trajectory[i].rho == doctest::Approx(red.trajectory[i].rho).epsilon(1e-7));
    }
    CHECK(full.diagnostics.shear_ratio_drift < 1e-8);
}

TEST_CASE("sampling lands on the requested grid") {
    integrator_config cfg;
    cfg.t_end = 1.0;
    cfg.sample_dt = 0.25;
    const auto out = integrate_reduced({1.0, 0.0}, -1.0, 1.0, 0.0, cfg);
    REQUIRE(out.trajectory.size() == 5);
    CHECK(out.trajectory[2].t == 0.5);
    CHECK(out.trajectory.back().t == 1.0);
}

TEST_CASE("max_steps ends a run as global and flags it") {
    integrator_config cfg;
    cfg.t_end = 50.0;
    cfg.max_steps = 5;
    const auto out = integrate_reduced({1.0, 0.0}, -1.0, 1.0, 0.0, cfg);
    CHECK(out.kind == outcome_kind::global);
    CHECK(out.diagnostics.max_steps_hit);
    CHECK(out.t_reached < 50.0);
}

TEST_CASE("invalid inputs") {
    integrator_config bad;
    bad.rel_tol = -1.0;
    CHECK_THROWS_AS(integrate_reduced({1.0, 0.0}, 0.0, 1.0, 0.0, bad), invalid_config);
    CHECK_THROWS_AS(integrate_reduced({-1.0, 0.0}, 0.0, 1.0, 0.0, {}), invalid_config);
    CHECK_THROWS_AS(integrate_reduced({1.0, NAN}, 0.0, 1.0, 0.0, {}), invalid_config);
}

TEST_CASE("trajectory CSV round-trips at full precision") {
    integrator_config cfg;
    cfg.t_end = 0.5;
    cfg.sample_dt = 0.1;
    const auto out = integrate_reduced({1.0, 1.0 / 3.0}, 0.3, 1.0, 0.0, cfg);
    std::ostringstream os;
    write_trajectory_csv(os, out);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "t,rho,d");
    std::getline(is, line);
    std::istringstream row(line);
    std::string field;
    std::getline(row, field, ',');
    std::getline(row, field, ',');
    std::getline(row, field, ',');
    CHECK(std::stod(field) == 1.0 / 3.0);
}

}
