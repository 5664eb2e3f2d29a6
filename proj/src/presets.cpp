#include "repct/presets.hpp"

namespace repct {

namespace {

sweep_preset thm11() {
    sweep_preset p;
    p.k = 1.0;
    p.c = 0.0;
    for (int i = 0; i < 5; ++i) {
        const double rho0 = 0.5 + 3.5 * i / 4.0;
        for (double ratio : {0.5, 1.5, 2.0, 3.0}) {
            p.grid.push_back({rho0, 2.0 * p.k * rho0 * ratio});
        }
    }
    return p;
}

sweep_preset thm12() {
    sweep_preset p;
    p.k = 1.0;
    p.c = 1.0;
    for (double beta : {0.1, 0.2, 0.3, 0.4}) {
        const auto cp = critical_points(beta, p.k, p.c);
        const double lo = *cp.rho1_star;
        const double hi = *cp.rho2_star;
        for (double f : {0.25, 0.5, 0.75}) {
            const double rho0 = lo + f * (hi - lo);
            p.grid.push_back({rho0, beta * rho0 * rho0});
        }
    }
    return p;
}

portrait_spec portrait(double beta, double c, double rho_max, double d_span,
                       std::vector<lagrangian_state> seeds) {
    portrait_spec s;
    s.beta = beta;
    s.k = 1.0;
    s.c = c;
    s.rho_min = 0.0;
    s.rho_max = rho_max;
    s.d_min = -d_span;
    s.d_max = d_span;
    s.seeds = std::move(seeds);
    return s;
}

}  // namespace

std::optional<sweep_preset> find_sweep_preset(std::string_view name) {
    if (name == "thm11") return thm11();
    if (name == "thm12") return thm12();
    return std::nullopt;
}

std::optional<portrait_spec> find_portrait_preset(std::string_view name) {
    if (name == "fig21") {
        return portrait(-1.0, 0.0, 4.0, 3.0,
                        {{0.5, -2.0}, {1.0, -1.0}, {2.0, 0.0}, {3.0, 1.0}, {1.0, 2.5}, {0.2, -2.8}});
    }
    if (name == "fig22") {
        return portrait(0.0, 0.0, 4.0, 3.0,
                        {{0.5, -2.0}, {1.0, -1.0}, {2.0, 0.0}, {3.0, 1.0}, {1.0, 2.5}, {0.2, -2.8}});
    }
    if (name == "fig23") {
        // Saddle at (2, 0); g(1, 1) = -0.6215.
        return portrait(1.0, 0.0, 5.0, 3.0,
                        {{1.0, -0.5}, {1.0, -0.8}, {3.0, 1.0}, {3.0, 0.2}, {0.5, 1.0}, {4.0, 2.5}});
    }
    if (name == "fig31") {
        // Center at rho* = sqrt(3) - 1.
        return portrait(-1.0, 1.0, 3.0, 2.0,
                        {{0.5, 0.0}, {1.0, 0.0}, {1.5, 0.5}, {0.3, -1.0}, {2.0, 1.5}});
    }
    if (name == "fig32") {
        // Center 4(1 - sqrt(0.5)), saddle 4(1 + sqrt(0.5)).
        return portrait(0.25, 1.0, 9.0, 3.0,
                        {{2.0, 0.0}, {4.0, 0.0}, {1.5, 0.5}, {6.0, 0.0}, {8.0, 0.0}, {0.3, 0.0},
                         {4.0, -3.0}});
    }
    return std::nullopt;
}

std::vector<std::string_view> sweep_preset_names() { return {"thm11", "thm12"}; }

std::vector<std::string_view> portrait_preset_names() {
    return {"fig21", "fig22", "fig23", "fig31", "fig32"};
}

}  // namespace repct
