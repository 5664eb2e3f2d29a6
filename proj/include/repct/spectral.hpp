#pragma once

#include <array>
#include <complex>
#include <variant>

namespace repct {

/// 2x2 velocity gradient M = grad U, row-major. Entries are finite.
class gradient_tensor {
public:
    gradient_tensor() = default;
    gradient_tensor(double m11, double m12, double m21, double m22);

    static gradient_tensor identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static gradient_tensor from_array(const std::array<double, 4>& m) {
        return {m[0], m[1], m[2], m[3]};
    }

    double m11() const noexcept { return m_[0]; }
    double m12() const noexcept { return m_[1]; }
    double m21() const noexcept { return m_[2]; }
    double m22() const noexcept { return m_[3]; }
    const std::array<double, 4>& entries() const noexcept { return m_; }

    double trace() const noexcept { return m_[0] + m_[3]; }
    double determinant() const noexcept { return m_[0] * m_[3] - m_[1] * m_[2]; }

    friend bool operator==(const gradient_tensor&, const gradient_tensor&) = default;

private:
    std::array<double, 4> m_{};
};

/// Shear/strain/vorticity split of M:
/// p = m11 - m22, q = m12 + m21, omega = m12 - m21, d = m11 + m22.
struct shear_decomposition {
    double p = 0.0;
    double q = 0.0;
    double omega = 0.0;
    double d = 0.0;
};

/// Eigenvalues ordered so that lambda1 = (d - sqrt(Gamma)) / 2.
struct spectral_pair {
    std::complex<double> lambda1;
    std::complex<double> lambda2;
};

/// Everything the region classifiers look at.
struct initial_config {
    double rho0 = 0.0;
    double d0 = 0.0;
    double gamma0 = 0.0;
    double k = 1.0;
    double c = 0.0;

    // Throws invalid_config unless k > 0, rho0 >= 0, c >= 0 and all fields finite.
    void validate() const;
};

struct vacuum {
    friend bool operator==(vacuum, vacuum) = default;
};

/// Lagrangian parameter Gamma0 / rho0^2, or vacuum for rho0 = 0.
using lagrangian_beta = std::variant<double, vacuum>;

shear_decomposition decompose(const gradient_tensor& m);

/// Gamma = (tr M)^2 - 4 det M, evaluated as (m11 - m22)^2 + 4 m12 m21.
double spectral_gap(const gradient_tensor& m);

spectral_pair eigenvalues(const gradient_tensor& m);

lagrangian_beta beta_of(const initial_config& config);

inline bool is_vacuum(const lagrangian_beta& b) { return std::holds_alternative<vacuum>(b); }

}  // namespace repct
