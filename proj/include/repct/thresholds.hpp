#pragma once

#include <optional>
#include <string_view>

#include "repct/spectral.hpp"

namespace repct {

/// Relative tolerance used to snap the measure-zero equalities (the S3
/// surface, the degenerate beta = k/(2c) family) in floating point.
inline constexpr double epsilon_region = 1e-9;

enum class region { s1, s2, s3, supercritical };

/// How the admissible d0 set looks at a fixed (rho0, Gamma0).
enum class surface_shape {
    none,         // no d0-threshold (S1 interior, or empty)
    lower_bound,  // d0 >= surface
    interval,     // |d0| <= surface
    curve,        // d0 == surface
};

/// Which published form of the nonzero-background S2 condition to apply.
///
/// `theorem` gates on Gamma0 < 2k(rho0 - c): interval below, d0 >= g1 otherwise.
/// `lemma` gates on rho0 <= rho2*: interval below, d0 == g1 above.
/// Both agree for rho1* < rho0 < rho2*; they disagree for rho0 <= rho1* and
/// rho0 > rho2*, which is where the bisection harness adjudicates.
enum class threshold_rule { theorem, lemma };

struct region_verdict {
    region where = region::supercritical;
    /// d0 minus the applicable surface, in d-units, positive inside.
    /// +inf: no surface applies and the point is inside (S1 interior).
    /// -inf: no surface applies and the point is outside.
    double margin = 0.0;
    std::optional<double> surface_value;
    surface_shape shape = surface_shape::none;
};

enum class critical_kind { two_points, degenerate, none, single_zero_background };

/// Rest points (rho*, 0) of the reduced system with rho* > 0.
///
/// two_points with rho1_star empty is the single right-branch rest point
/// for beta <= 0, c > 0. single_zero_background stores the saddle 2k/beta
/// in rho2_star.
struct critical_points_result {
    std::optional<double> rho1_star;
    std::optional<double> rho2_star;
    critical_kind kind = critical_kind::none;
};

std::string_view to_string(region r);
std::string_view to_string(surface_shape s);
std::string_view to_string(critical_kind k);
std::string_view to_string(threshold_rule r);
std::optional<threshold_rule> parse_threshold_rule(std::string_view name);

/// beta * rho - 2k ln(rho).
double F(double rho, double beta, double k);

/// Zero-background threshold g(rho, Gamma); sign follows Gamma - 2k rho.
double g_zero_background(double rho, double gamma, double k);

/// Nonzero-background threshold g1(rho, Gamma), for 0 < Gamma < (k/2c) rho^2.
double g1_nonzero_background(double rho, double gamma, double k, double c);

/// g1 restricted to Gamma = (k/2c) rho^2. Defined for rho >= 2c.
double g2_nonzero_background(double rho, double k, double c);

/// beta (rho - rho*) - 2k ln(rho/rho*) - 2ck/rho + 2ck/rho*.
double G(double rho, double rho_star, double beta, double k, double c);

critical_points_result critical_points(double beta, double k, double c);

region_verdict classify_zero_background(const initial_config& config);

region_verdict classify_nonzero_background(const initial_config& config,
                                           threshold_rule rule = threshold_rule::theorem);

/// Dispatches on config.c.
region_verdict classify(const initial_config& config,
                        threshold_rule rule = threshold_rule::theorem);

}  // namespace repct
