#include <algorithm>
#include <cmath>
#include <string>

#include <json.hpp>

#include "repct/errors.hpp"
#include "repct/experiments.hpp"

namespace repct {

std::vector<nullcline_point> nullcline(double beta, double k, double c,
                                       std::span<const double> rho_samples) {
    std::vector<nullcline_point> out;
    out.reserve(rho_samples.size());
    for (double rho : rho_samples) {
        nullcline_point pt{rho, std::nullopt, std::nullopt};
        const double linear = 2.0 * k * (rho - c);
        const double quad = beta * rho * rho;
        double radicand = linear - quad;
        // Snap rounding-level negatives (the degenerate ellipse touches d = 0).
        if (radicand < 0.0 && radicand >= -1e-12 * std::max({1.0, std::abs(linear), std::abs(quad)})) {
            radicand = 0.0;
        }
        if (radicand >= 0.0) {
            const double d = std::sqrt(radicand);
            pt.d_plus = d;
            pt.d_minus = -d;
        }
        out.push_back(pt);
    }
    return out;
}

std::vector<phase_point> separatrix(double beta, double k, double c,
                                    std::span<const double> rho_samples) {
    if (!(k > 0.0) || c < 0.0) {
        throw domain_error("separatrix: requires k > 0 and c >= 0");
    }
    std::vector<phase_point> out;
    if (c == 0.0) {
        if (!(beta > 0.0)) {
            throw domain_error("separatrix: zero background needs beta > 0");
        }
        const double saddle = 2.0 * k / beta;
        const double f_min = F(saddle, beta, k);
        for (double rho : rho_samples) {
            if (!(rho > 0.0)) continue;
            const double radicand = std::max(0.0, rho * (F(rho, beta, k) - f_min));
            const double mag = std::sqrt(radicand);
            out.push_back({rho, rho < saddle ? -mag : (rho > saddle ? mag : 0.0)});
        }
        return out;
    }
    const auto cp = critical_points(beta, k, c);
    if (cp.kind != critical_kind::two_points || !cp.rho1_star) {
        throw domain_error("separatrix: nonzero background needs 0 < beta < k/(2c)");
    }
    const double saddle = *cp.rho2_star;
    for (double rho : rho_samples) {
        if (!(rho > 0.0)) continue;
        const double radicand = rho * G(rho, saddle, beta, k, c);
        if (radicand < -1e-12 * std::max(1.0, 2.0 * c * k)) continue;
        out.push_back({rho, std::sqrt(std::max(radicand, 0.0))});
    }
    return out;
}

void portrait_spec::validate() const {
    const bool finite = std::isfinite(beta) && std::isfinite(k) && std::isfinite(c) &&
                        std::isfinite(rho_min) && std::isfinite(rho_max) &&
                        std::isfinite(d_min) && std::isfinite(d_max);
    if (!finite) throw invalid_config("portrait: parameters and window must be finite");
    if (!(k > 0.0) || c < 0.0) throw invalid_config("portrait: requires k > 0 and c >= 0");
    if (rho_min < 0.0 || !(rho_max > rho_min)) {
        throw invalid_config("portrait: rho window must satisfy 0 <= rho_min < rho_max");
    }
    if (!(d_max > d_min)) throw invalid_config("portrait: d window must satisfy d_min < d_max");
    if (rho_samples < 2) throw invalid_config("portrait: need at least two rho samples");
    if (!(sample_dt > 0.0) || !(horizon > 0.0)) {
        throw invalid_config("portrait: sample_dt and horizon must be positive");
    }
    for (const auto& s : seeds) {
        if (!(s.rho >= 0.0) || !std::isfinite(s.rho) || !std::isfinite(s.d)) {
            throw invalid_config("portrait: seeds need finite d and rho >= 0");
        }
    }
}

portrait_dataset render_portrait(const portrait_spec& spec) {
    spec.validate();
    portrait_dataset data;
    data.spec = spec;
    data.critical = critical_points(spec.beta, spec.k, spec.c);

    std::vector<double> rhos;
    const std::size_t n = spec.rho_samples;
    for (std::size_t i = 0; i < n; ++i) {
        rhos.push_back(spec.rho_min + (spec.rho_max - spec.rho_min) * static_cast<double>(i) /
                                          static_cast<double>(n - 1));
    }
    // Hit the rest points exactly so the nullcline touches d = 0 there.
    for (const auto& r : {data.critical.rho1_star, data.critical.rho2_star}) {
        if (r && *r > spec.rho_min && *r < spec.rho_max) rhos.push_back(*r);
    }
    std::sort(rhos.begin(), rhos.end());
    rhos.erase(std::unique(rhos.begin(), rhos.end()), rhos.end());

    data.nullcline = nullcline(spec.beta, spec.k, spec.c, rhos);
    const bool has_saddle =
        (spec.c == 0.0 && spec.beta > 0.0) ||
        (spec.c > 0.0 && data.critical.kind == critical_kind::two_points && data.critical.rho1_star);
    if (has_saddle) {
        data.separatrix = separatrix(spec.beta, spec.k, spec.c, rhos);
    }

    integrator_config cfg;
    cfg.t_end = spec.horizon;
    cfg.sample_dt = spec.sample_dt;
    for (const auto& seed : spec.seeds) {
        portrait_trajectory tr;
        tr.seed = seed;
        try {
            auto out = integrate_reduced(seed, spec.beta, spec.k, spec.c, cfg);
            tr.samples = std::move(out.trajectory);
            out.trajectory.clear();
            tr.outcome = std::move(out);
        } catch (const std::exception& e) {
            tr.error = e.what();
        }
        data.trajectories.push_back(std::move(tr));
    }
    return data;
}

std::string portrait_to_json(const portrait_dataset& data, int indent) {
    using nlohmann::json;
    auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
    const auto& s = data.spec;

    json j;
    j["params"] = {{"beta", s.beta},         {"k", s.k},
                   {"c", s.c},               {"rho_min", s.rho_min},
                   {"rho_max", s.rho_max},   {"d_min", s.d_min},
                   {"d_max", s.d_max},       {"sample_dt", s.sample_dt},
                   {"horizon", s.horizon}};

    json nc = json::array();
    for (const auto& p : data.nullcline) nc.push_back({p.rho, opt(p.d_plus), opt(p.d_minus)});
    j["nullcline"] = std::move(nc);

    json sep = json::array();
    for (const auto& p : data.separatrix) sep.push_back({p.rho, p.d});
    j["separatrix"] = std::move(sep);

    j["critical_points"] = {{"kind", std::string(to_string(data.critical.kind))},
                            {"rho1_star", opt(data.critical.rho1_star)},
                            {"rho2_star", opt(data.critical.rho2_star)}};

    json trajs = json::array();
    for (const auto& t : data.trajectories) {
        json samples = json::array();
        for (const auto& p : t.samples) samples.push_back({p.t, p.rho, p.d});
        json outcome;
        if (!t.outcome) {
            outcome = {{"kind", "error"}, {"message", t.error}};
        } else if (t.outcome->kind == outcome_kind::breakdown) {
            outcome = {{"kind", "breakdown"},
                       {"t_star", t.outcome->t_star},
                       {"halfwidth", t.outcome->t_star_halfwidth}};
        } else {
            outcome = {{"kind", "global"},
                       {"t_reached", t.outcome->t_reached},
                       {"max_steps_hit", t.outcome->diagnostics.max_steps_hit}};
        }
        trajs.push_back({{"seed", {t.seed.rho, t.seed.d}},
                         {"samples", std::move(samples)},
                         {"outcome", std::move(outcome)}});
    }
    j["trajectories"] = std::move(trajs);
    return j.dump(indent);
}

}  // namespace repct
