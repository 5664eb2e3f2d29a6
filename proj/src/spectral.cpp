#include "repct/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "repct/errors.hpp"

namespace repct {

gradient_tensor::gradient_tensor(double m11, double m12, double m21, double m22)
    : m_{m11, m12, m21, m22} {
    for (double v : m_) {
        if (!std::isfinite(v)) {
            throw domain_error("gradient_tensor: entries must be finite");
        }
    }
}

void initial_config::validate() const {
    if (!std::isfinite(rho0) || !std::isfinite(d0) || !std::isfinite(gamma0) ||
        !std::isfinite(k) || !std::isfinite(c)) {
        throw invalid_config("initial data must be finite");
    }
    if (!(k > 0.0)) {
        throw invalid_config("k must be positive (repulsive forcing), got " + std::to_string(k));
    }
    if (rho0 < 0.0) {
        throw invalid_config("rho0 must be nonnegative, got " + std::to_string(rho0));
    }
    if (c < 0.0) {
        throw invalid_config("c must be nonnegative, got " + std::to_string(c));
    }
}

shear_decomposition decompose(const gradient_tensor& m) {
    return {m.m11() - m.m22(), m.m12() + m.m21(), m.m12() - m.m21(), m.m11() + m.m22()};
}

double spectral_gap(const gradient_tensor& m) {
    // Same polynomial as d^2 - 4 det M, without the d^2 cancellation.
    const double p = m.m11() - m.m22();
    return p * p + 4.0 * m.m12() * m.m21();
}

spectral_pair eigenvalues(const gradient_tensor& m) {
    const double d = m.trace();
    const double gamma = spectral_gap(m);
    if (gamma < 0.0) {
        const double im = 0.5 * std::sqrt(-gamma);
        return {{0.5 * d, -im}, {0.5 * d, im}};
    }
    const double root = std::sqrt(gamma);
    // Larger-magnitude root first; the other one from the product det M.
    const double big = 0.5 * (d + std::copysign(root, d));
    if (big == 0.0) {
        return {{0.0, 0.0}, {0.0, 0.0}};
    }
    const double small = m.determinant() / big;
    return {{std::min(small, big), 0.0}, {std::max(small, big), 0.0}};
}

lagrangian_beta beta_of(const initial_config& config) {
    config.validate();
    if (config.rho0 == 0.0) {
        return vacuum{};
    }
    return config.gamma0 / (config.rho0 * config.rho0);
}

}  // namespace repct
