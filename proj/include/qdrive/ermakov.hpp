#pragma once

#include <optional>

#include "qdrive/complex_mat2.hpp"
#include "qdrive/factorization.hpp"

namespace qdrive {

/// Real seed pair for the Pinney construction: phi1 solves
/// phi'' + Omega^2(t) phi = 0 and phi2 is the companion solution with unit
/// Wronskian, phi1 phi2' - phi1' phi2 = 1. Keeping phi2 (rather than the
/// quadrature integral of 1/phi1^2) makes the Pinney expression finite across
/// zeros of phi1.
struct SeedSolution {
    RealFn phi1;
    RealFn phi1_prime;
    RealFn phi2;
    RealFn phi2_prime;
    RealFn omega_sq;      ///< prescribed Omega^2(t)
    double rate_scale = 1.0;
};

/// phi1 = cos(Omega1 t), phi2 = sin(Omega1 t)/Omega1, Omega^2 = Omega1^2.
SeedSolution harmonic_seed(double omega1);

/// phi1 = t, phi2 = -1, Omega^2 = 0 (the vanishing-frequency branch).
SeedSolution linear_seed();

/// Solution of the Ermakov equation mu'' + Omega^2 mu = Omega0^2 / mu^3
/// with mu(0) = 1, together with the data that parameterizes the synthesized
/// driving field.
struct ErmakovSolution {
    RealFn mu;
    RealFn mu_prime;
    RealFn mu_second;       ///< analytic second derivative (may be empty)
    RealFn phase_integral;  ///< closed form of integral_0^t ds/mu^2 (may be empty)
    RealFn omega_sq;        ///< prescribed Omega^2(t)
    RealFn phi1;            ///< seed solution
    RealFn phi1_prime;
    double lambda = 0.0;    ///< gamma_2 integration constant
    double Omega0 = 0.0;    ///< generalized Rabi-like frequency, sqrt(|R0|^2 + lambda^2/4)
    double c1 = 0.0;
    double c2 = 0.0;
    double rate_scale = 1.0;

    /// integral_0^t ds/mu^2(s): the stored closed form, or adaptive quadrature.
    double phase_integral_at(double t) const;
};

/// Pinney formula mu^2 = Omega0^2 phi1^2 / c1 + c1 (c2 phi1 + phi2)^2.
/// Requires c1 > 0 and the normalization mu(0) = 1, mu'(0) = expected_mu0_prime
/// (0 under the convention [ln R(0)]' = i delta); violation raises
/// parameter_error. mu^2 <= 0 anywhere raises synthesis_error on evaluation.
ErmakovSolution pinney_mu(const SeedSolution& seed, double Omega0, double c1, double c2,
                          double expected_mu0_prime = 0.0);

struct InitialData {
    double mu0_prime = 0.0;
    double lambda = 0.0;
};

/// Map the field initial data onto Ermakov initial data (mu0 fixed to 1):
///   mu'(0) = -Re[R0'/R0] / 2,   lambda = Im[R0'/R0].
InitialData map_initial_data(cplx R0, cplx R0_prime);

/// Real/imaginary split of (ln R)' for a synthesized field:
/// gamma1 = -(ln mu^2)', gamma2 = lambda/mu^2.
struct GammaSplit {
    RealFn gamma1;
    RealFn gamma2;
};

GammaSplit gamma_split(const ErmakovSolution& sol);

/// Synthesized driving field R(t) = (R0/mu^2) exp[i lambda integral_0^t ds/mu^2].
cplx synthesize_field(const ErmakovSolution& sol, cplx R0, double t);

/// FieldSpec wrapper around synthesize_field with analytic log-derivatives
/// (d2 ln R only when the solution carries mu_second).
FieldSpec synthesized_field_spec(const ErmakovSolution& sol, cplx R0, double Delta);

/// Factorizing functions in mu-form:
///   alpha = (mu^2/R0) e^{-i Delta t - i lambda I(t)} [phi'/phi - mu'/mu + i lambda/(2 mu^2)]
///   beta  = R0 integral_0^t ds/phi^2
///   delta_f = ln(mu^2/phi^2) - i lambda I(t) - i Delta t,  I(t) = integral_0^t ds/mu^2.
FactorizationTriple mu_factorization(const ErmakovSolution& sol, const OscillatorSolution& phi,
                                     cplx R0, double Delta, double t);

struct PeriodicitySpec {
    double tau = 0.0;   ///< period of mu
    int p = 0;          ///< least multiplier closing the phase
    double tau_p = 0.0; ///< p * tau, period of R
};

/// Least p <= max_p with p * lambda * integral_0^tau ds/mu^2 = 0 (mod 2 pi)
/// within angle_tol, or nullopt. Requires mu periodic with period tau.
std::optional<PeriodicitySpec> check_periodicity(const ErmakovSolution& sol, double tau,
                                                 int max_p = 64, double angle_tol = 1e-9);

} // namespace qdrive
