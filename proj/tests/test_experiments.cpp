#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <sstream>

#include "repct/errors.hpp"
#include "repct/experiments.hpp"
#include "repct/presets.hpp"

using namespace repct;

TEST_SUITE("experiments") {

TEST_CASE("bisection recovers g for zero background") {
    const auto r = empirical_threshold(1.0, 4.0, 1.0, 0.0, {});
    REQUIRE(r.analytic_value);
    CHECK(*r.analytic_value == doctest::Approx(0.78339366788359311));
    CHECK(r.discrepancy < 1e-3);
    CHECK(r.bracket_width <= 1e-3);
    CHECK(r.survive_end > r.breakdown_end);
}

TEST_CASE("bisection recovers both interval endpoints") {
    bisection_options o;
    const auto lo = empirical_threshold(4.0, 1.0, 1.0, 1.0, threshold_branch::interval_lower, o);
    const auto hi = empirical_threshold(4.0, 1.0, 1.0, 1.0, threshold_branch::interval_upper, o);
    CHECK(lo.d_critical_empirical == doctest::Approx(-2.8088452440718866).epsilon(1e-3));
    CHECK(hi.d_critical_empirical == doctest::Approx(2.8088452440718866).epsilon(1e-3));
    CHECK(lo.survive_end > lo.breakdown_end);
    CHECK(hi.survive_end < hi.breakdown_end);
}

TEST_CASE("agreeing probes raise no_bracket") {
    bisection_options o;
    o.probes = std::make_pair(1.0, 2.0);
    try {
        empirical_threshold(1.0, -1.0, 1.0, 0.0, o);
        FAIL("expected no_bracket");
    } catch (const no_bracket& e) {
        CHECK(e.survived());
    }
}

TEST_CASE("sweep is deterministic across thread counts") {
    const auto preset = *find_sweep_preset("thm11");
    std::vector<sweep_point> grid(preset.grid.begin(), preset.grid.begin() + 6);
    sweep_options one, many;
    one.threads = 1;
    many.threads = 4;
    std::ostringstream a, b;
    write_sweep_csv(a, sweep_threshold_surface(grid, preset.k, preset.c, one));
    write_sweep_csv(b, sweep_threshold_surface(grid, preset.k, preset.c, many));
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("rho0,Gamma0,k,c,branch,analytic,empirical,discrepancy,bracket_width,n_sims,status\n", 0) == 0);
}

TEST_CASE("sweep excludes boundary cells and labels empty regimes") {
    const std::vector<sweep_point> grid{{1.0, 2.0}, {1.0, -1.0}};
    const auto res = sweep_threshold_surface(grid, 1.0, 0.0, {});
    REQUIRE(res.rows.size() == 2);
    CHECK(res.rows[0].status.rfind("excluded", 0) == 0);
    CHECK(res.rows[1].status.find("no_bracket") == 0);
    CHECK(res.summary.excluded == 1);
    CHECK(res.summary.failed == 0);
}

TEST_CASE("adjudication beyond the saddle favours the lemma form") {
    const double rho = 8.0;
    const std::vector<sweep_point> grid{{rho, 0.25 * rho * rho}};
    const auto res = sweep_threshold_surface(grid, 1.0, 1.0, {});
    REQUIRE(!res.rows.empty());
    CHECK(res.rows[0].status == "supports_lemma");
}

TEST_CASE("every preset renders") {
    for (auto name : sweep_preset_names()) CHECK(find_sweep_preset(name));
    for (auto name : portrait_preset_names()) {
        auto spec = *find_portrait_preset(name);
        spec.horizon = 2.0;
        const auto data = render_portrait(spec);
        CHECK(data.trajectories.size() == spec.seeds.size());
        const auto j = nlohmann::json::parse(portrait_to_json(data));
        for (auto key : {"params", "nullcline", "separatrix", "critical_points", "trajectories"}) {
            CHECK(j.contains(key));
        }
    }
    CHECK(!find_sweep_preset("nope"));
}

TEST_CASE("nonzero-background portrait has a closed loop through the saddle") {
    const auto data = render_portrait(*find_portrait_preset("fig32"));
    REQUIRE(data.critical.rho2_star);
    CHECK(!data.separatrix.empty());
    bool hits_saddle = false;
    for (const auto& p : data.separatrix) {
        if (p.rho == *data.critical.rho2_star) hits_saddle = std::abs(p.d) < 1e-6;
    }
    CHECK(hits_saddle);
}

TEST_CASE("nullcline shapes") {
    const std::vector<double> rhos{0.5, 2.0, 3.0};
    const auto ellipse = nullcline(0.5, 1.0, 1.0, rhos);
    CHECK(!ellipse[0].d_plus);
    CHECK(*ellipse[1].d_plus == 0.0);
    CHECK(!ellipse[2].d_plus);
    const auto hyperbola = nullcline(-1.0, 1.0, 0.0, rhos);
    CHECK(*hyperbola[0].d_plus == doctest::Approx(std::sqrt(1.0 + 0.25)));
}

TEST_CASE("portrait JSON round-trips numbers") {
    auto spec = *find_portrait_preset("fig21");
    spec.horizon = 1.0;
    const auto data = render_portrait(spec);
    const auto j = nlohmann::json::parse(portrait_to_json(data));
    const auto& first = data.trajectories.front().samples.at(1);
    CHECK(j["trajectories"][0]["samples"][1][2].get<double>() == first.d);
}

}
