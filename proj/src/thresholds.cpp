#include "repct/thresholds.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <string>

#include "repct/errors.hpp"

namespace repct {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// x - log1p(x) >= 0, accurate near x = 0 where the two terms cancel.
double x_minus_log1p(double x) {
    if (std::abs(x) < 0.05) {
        // sum_{n>=2} (-1)^n x^n / n
        double term = x * x;
        double sum = 0.0;
        for (int n = 2; n <= 16; ++n) {
            sum += (n % 2 == 0 ? term : -term) / n;
            term *= x;
        }
        return sum;
    }
    return x - std::log1p(x);
}

// u^2 - 1 - 2u ln u with u = 1 + x; triple root at x = 0.
double g2_kernel(double x) {
    if (std::abs(x) < 0.1) {
        // -2 sum_{n>=3} (-1)^n x^n / (n(n-1))
        double term = x * x * x;
        double sum = 0.0;
        for (int n = 3; n <= 24; ++n) {
            sum += (n % 2 == 0 ? -term : term) / (n * (n - 1));
            term *= x;
        }
        return 2.0 * sum;
    }
    const double u = 1.0 + x;
    return u * u - 1.0 - 2.0 * u * std::log(u);
}

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw domain_error(std::string(what) + " must be positive and finite");
    }
}

bool snapped_equal(double a, double b) {
    return std::abs(a - b) <= epsilon_region * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

region_verdict vacuum_or_s1(const initial_config& cfg) {
    // Gamma0 <= 0 branch shared by both backgrounds.
    if (cfg.rho0 > 0.0) {
        return {region::s1, inf, std::nullopt, surface_shape::none};
    }
    const bool ok = cfg.d0 >= 0.0;
    return {ok ? region::s1 : region::supercritical, cfg.d0, 0.0, surface_shape::lower_bound};
}

}  // namespace

std::string_view to_string(region r) {
    switch (r) {
        case region::s1: return "S1";
        case region::s2: return "S2";
        case region::s3: return "S3";
        case region::supercritical: return "Supercritical";
    }
    return "?";
}

std::string_view to_string(surface_shape s) {
    switch (s) {
        case surface_shape::none: return "none";
        case surface_shape::lower_bound: return "lower_bound";
        case surface_shape::interval: return "interval";
        case surface_shape::curve: return "curve";
    }
    return "?";
}

std::string_view to_string(critical_kind k) {
    switch (k) {
        case critical_kind::two_points: return "two_points";
        case critical_kind::degenerate: return "degenerate";
        case critical_kind::none: return "none";
        case critical_kind::single_zero_background: return "single_zero_background";
    }
    return "?";
}

std::string_view to_string(threshold_rule r) {
    return r == threshold_rule::theorem ? "theorem" : "lemma";
}

std::optional<threshold_rule> parse_threshold_rule(std::string_view name) {
    if (name == "theorem") return threshold_rule::theorem;
    if (name == "lemma") return threshold_rule::lemma;
    return std::nullopt;
}

double F(double rho, double beta, double k) {
    require_positive(rho, "F: rho");
    return beta * rho - 2.0 * k * std::log(rho);
}

double g_zero_background(double rho, double gamma, double k) {
    require_positive(rho, "g: rho");
    require_positive(gamma, "g: Gamma");
    require_positive(k, "g: k");
    // Gamma - 2k rho + 2k rho ln(2k rho / Gamma) = 2k rho * (x - log1p x),
    // x = Gamma / (2k rho) - 1. Nonnegative by convexity of F.
    const double two_k_rho = 2.0 * k * rho;
    const double excess = gamma - two_k_rho;
    const double radicand = two_k_rho * x_minus_log1p(excess / two_k_rho);
    assert(radicand >= 0.0);
    const double magnitude = std::sqrt(std::max(radicand, 0.0));
    if (excess > 0.0) return magnitude;
    if (excess < 0.0) return -magnitude;
    return 0.0;
}

double g1_nonzero_background(double rho, double gamma, double k, double c) {
    require_positive(rho, "g1: rho");
    require_positive(gamma, "g1: Gamma");
    require_positive(k, "g1: k");
    require_positive(c, "g1: c");
    const double inner = rho * rho - 2.0 * c * gamma / k;
    if (!(inner > 0.0)) {
        throw domain_error("g1: requires Gamma < (k/2c) rho^2");
    }
    const double root = std::sqrt(inner);
    // rho - root without cancellation for small Gamma.
    const double gap = (2.0 * c * gamma / k) / (rho + root);
    const double log_term = rho * std::log(gap / (2.0 * c));
    const double radicand = gamma - 2.0 * k * (c + root + log_term);
    const double scale = std::max({gamma, 2.0 * k * c, 2.0 * k * root, 2.0 * k * std::abs(log_term)});
    if (radicand < -1e-12 * scale) {
        throw domain_error("g1: negative radicand (no admissible divergence at this density)");
    }
    return std::sqrt(std::max(radicand, 0.0));
}

double g2_nonzero_background(double rho, double k, double c) {
    require_positive(rho, "g2: rho");
    require_positive(k, "g2: k");
    require_positive(c, "g2: c");
    // -2ck + (k/2c) rho^2 + 2k rho ln(2c/rho) = 2ck (u^2 - 1 - 2u ln u), u = rho/2c.
    const double radicand = 2.0 * c * k * g2_kernel(rho / (2.0 * c) - 1.0);
    if (radicand < -1e-12) {
        throw domain_error("g2: negative radicand, requires rho >= 2c");
    }
    return std::sqrt(std::max(radicand, 0.0));
}

double G(double rho, double rho_star, double beta, double k, double c) {
    require_positive(rho, "G: rho");
    require_positive(rho_star, "G: rho_star");
    if (rho == rho_star) return 0.0;
    return beta * (rho - rho_star) - 2.0 * k * std::log(rho / rho_star) - 2.0 * c * k / rho +
           2.0 * c * k / rho_star;
}

critical_points_result critical_points(double beta, double k, double c) {
    if (!(k > 0.0) || c < 0.0) {
        throw invalid_config("critical_points: requires k > 0 and c >= 0");
    }
    if (c == 0.0) {
        if (beta > 0.0) {
            return {std::nullopt, 2.0 * k / beta, critical_kind::single_zero_background};
        }
        return {std::nullopt, std::nullopt, critical_kind::none};
    }
    const double beta_degenerate = k / (2.0 * c);
    if (beta > 0.0 && snapped_equal(beta, beta_degenerate)) {
        return {2.0 * c, 2.0 * c, critical_kind::degenerate};
    }
    if (beta > beta_degenerate) {
        return {std::nullopt, std::nullopt, critical_kind::none};
    }
    const double root = std::sqrt(k * k - 2.0 * c * k * beta);
    // Roots of beta rho^2 - 2k rho + 2ck; product 2ck/beta, so the small
    // root is taken from the quotient form (also valid for beta <= 0).
    const double small = 2.0 * c * k / (k + root);
    if (beta <= 0.0) {
        return {std::nullopt, small, critical_kind::two_points};
    }
    return {small, (k + root) / beta, critical_kind::two_points};
}

region_verdict classify_zero_background(const initial_config& config) {
    config.validate();
    if (config.c != 0.0) {
        throw invalid_config("classify_zero_background: requires c = 0");
    }
    if (config.gamma0 <= 0.0) {
        return vacuum_or_s1(config);
    }
    if (config.rho0 == 0.0) {
        return {region::supercritical, -inf, std::nullopt, surface_shape::none};
    }
    const double g = g_zero_background(config.rho0, config.gamma0, config.k);
    const double margin = config.d0 - g;
    return {config.d0 >= g ? region::s2 : region::supercritical, margin, g,
            surface_shape::lower_bound};
}

region_verdict classify_nonzero_background(const initial_config& config, threshold_rule rule) {
    config.validate();
    if (!(config.c > 0.0)) {
        throw invalid_config("classify_nonzero_background: requires c > 0");
    }
    const double rho = config.rho0;
    const double gamma = config.gamma0;
    const double d0 = config.d0;
    const double k = config.k;
    const double c = config.c;

    if (gamma <= 0.0) {
        return vacuum_or_s1(config);
    }
    if (rho == 0.0) {
        return {region::supercritical, -inf, std::nullopt, surface_shape::none};
    }

    const double gamma_edge = k / (2.0 * c) * rho * rho;
    if (snapped_equal(gamma, gamma_edge)) {
        if (rho < 2.0 * c && !snapped_equal(rho, 2.0 * c)) {
            return {region::supercritical, -inf, std::nullopt, surface_shape::curve};
        }
        const double g2 = g2_nonzero_background(std::max(rho, 2.0 * c), k, c);
        const bool on = snapped_equal(d0, g2);
        return {on ? region::s3 : region::supercritical, on ? 0.0 : -std::abs(d0 - g2), g2,
                surface_shape::curve};
    }
    if (gamma > gamma_edge) {
        return {region::supercritical, -inf, std::nullopt, surface_shape::none};
    }

    double g1 = 0.0;
    try {
        g1 = g1_nonzero_background(rho, gamma, k, c);
    } catch (const domain_error&) {
        // Density left of the closed separatrix loop: nothing survives.
        return {region::supercritical, -inf, std::nullopt, surface_shape::none};
    }

    surface_shape shape = surface_shape::interval;
    if (rule == threshold_rule::theorem) {
        if (!(gamma < 2.0 * k * (rho - c))) shape = surface_shape::lower_bound;
    } else {
        const double rho2 = *critical_points(gamma / (rho * rho), k, c).rho2_star;
        if (rho > rho2) shape = surface_shape::curve;
    }

    switch (shape) {
        case surface_shape::interval: {
            const bool in = std::abs(d0) <= g1;
            return {in ? region::s2 : region::supercritical, g1 - std::abs(d0), g1, shape};
        }
        case surface_shape::lower_bound:
            return {d0 >= g1 ? region::s2 : region::supercritical, d0 - g1, g1, shape};
        default: {
            const bool on = snapped_equal(d0, g1);
            return {on ? region::s2 : region::supercritical, on ? 0.0 : -std::abs(d0 - g1), g1,
                    shape};
        }
    }
}

region_verdict classify(const initial_config& config, threshold_rule rule) {
    config.validate();
    return config.c == 0.0 ? classify_zero_background(config)
                           : classify_nonzero_background(config, rule);
}

}  // namespace repct
