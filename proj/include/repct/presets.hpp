#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "repct/experiments.hpp"

namespace repct {

/// Parameter grid for a named threshold sweep.
struct sweep_preset {
    std::vector<sweep_point> grid;
    double k = 1.0;
    double c = 0.0;
};

/// thm11: zero background, rho0 in {0.5 .. 4} (5 points) x Gamma0/(2k rho0) in
/// {0.5, 1.5, 2, 3}. thm12: c = 1, beta in {0.1, 0.2, 0.3, 0.4}, three
/// densities per beta strictly between the two rest points.
std::optional<sweep_preset> find_sweep_preset(std::string_view name);

/// fig21, fig22, fig23 (c = 0, beta = -1, 0, 1) and fig31, fig32
/// (c = 1, beta = -1, 0.25), k = 1 throughout.
std::optional<portrait_spec> find_portrait_preset(std::string_view name);

std::vector<std::string_view> sweep_preset_names();
std::vector<std::string_view> portrait_preset_names();

}  // namespace repct
