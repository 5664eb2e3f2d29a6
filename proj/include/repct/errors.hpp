#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace repct {

// Argument outside the domain of a closed-form expression (log of a
// nonpositive density, negative radicand, ...).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Initial data or run parameters violate their invariants (k <= 0, c < 0,
// classifier called with the wrong background, ...).
class invalid_config : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Closed-form vacuum solution evaluated at its pole.
class pole_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Adaptive step size underflowed without the blow-up detector firing.
class step_failure : public std::runtime_error {
public:
    step_failure(const std::string& what, double t, double h)
        : std::runtime_error(what), t_(t), h_(h) {}

    double time() const noexcept { return t_; }
    double step() const noexcept { return h_; }

private:
    double t_;
    double h_;
};

// Both bisection probes produced the same outcome.
class no_bracket : public std::runtime_error {
public:
    no_bracket(const std::string& what, double probe_a, double probe_b, bool survived)
        : std::runtime_error(what), probes_(probe_a, probe_b), survived_(survived) {}

    std::pair<double, double> probes() const noexcept { return probes_; }
    // Shared outcome of both probes.
    bool survived() const noexcept { return survived_; }

private:
    std::pair<double, double> probes_;
    bool survived_;
};

}  // namespace repct
