#pragma once

#include <stdexcept>
#include <string>

namespace qdrive {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument values (zero field amplitude, non-positive Pinney constant, ...).
class parameter_error : public error {
public:
    using error::error;
};

/// A user-supplied function returned a non-finite value.
class evaluation_error : public error {
public:
    using error::error;
};

/// The oscillator solution does not satisfy the initial condition required
/// by the pairing with the driving field (alpha(0) != 0).
class invalid_pairing_error : public error {
public:
    using error::error;
};

/// Field synthesis failed (mu^2 <= 0, quadrature breakdown, ...).
class synthesis_error : public error {
public:
    using error::error;
};

/// |Re(delta_f)| exceeds the overflow guard; exp(delta_f/2) would lose all precision.
class overflow_guard_error : public error {
public:
    using error::error;
};

/// CLI / configuration misuse. Maps to exit status 2.
class usage_error : public error {
public:
    using error::error;
};

/// A denominator (phi, mu, driving field) vanished; carries the location.
class singularity_error : public error {
public:
    singularity_error(const std::string& msg, double where)
        : error(msg), location_(where) {}
    double location() const noexcept { return location_; }

private:
    double location_;
};

/// Adaptive step size underflowed; carries the failing time.
class stiffness_error : public error {
public:
    stiffness_error(const std::string& msg, double t_fail)
        : error(msg), t_fail_(t_fail) {}
    double failing_time() const noexcept { return t_fail_; }

private:
    double t_fail_;
};

} // namespace qdrive
