#pragma once

#include "qdrive/complex_mat2.hpp"

namespace qdrive {

/// Driving field in rotating form, R(t) = -i e^{-i Delta t} conj(V(t)).
/// R must not vanish on the evaluation interval.
struct FieldSpec {
    CplxFn R;
    cplx R0;                ///< R(0), nonzero
    cplx logR_prime0;       ///< R'(0)/R(0)
    double Delta = 0.0;     ///< level splitting

    /// Optional analytic log-derivatives d/dt ln R and d^2/dt^2 ln R.
    /// When absent, finite differences on R are used.
    CplxFn dlogR;
    CplxFn d2logR;

    /// Largest angular rate present in R; sets finite-difference steps and
    /// path-walk resolution.
    double char_freq = 1.0;

    /// Laboratory-frame coupling V(t) = -i e^{-i Delta t} conj(R(t)).
    cplx V(double t) const;
};

/// Solution of phi'' + Omega^2(t) phi = 0 with phi(0) = 1.
struct OscillatorSolution {
    CplxFn phi;
    CplxFn phi_prime;
};

/// Values of the factorizing functions at one time. alpha(0) = delta_f(0)
/// = beta(0) = 0; delta_f is branch-continuous in t.
struct FactorizationTriple {
    cplx alpha{};
    cplx delta_f{};
    cplx beta{};
};

/// Time-dependent frequency of the associated parametric oscillator:
///   Omega^2 = -1/4 [(ln R)']^2 + 1/2 (ln R)'' + |R|^2.
/// Exact when the field carries analytic log-derivatives, otherwise central
/// finite differences on R. Throws singularity_error if |R(t)| < 1e-14.
cplx frequency_from_field(const FieldSpec& field, double t);

/// Factorizing functions of the direct approach:
///   alpha = (e^{-i Delta t}/R) [phi'/phi + (ln R)'/2]
///   delta_f = -2 ln(phi/phi0) - ln(R/R0) - i Delta t   (continuous branch)
///   beta  = R0 * integral_0^t ds/phi^2.
/// Requires phi(0) = 1 and the pairing condition phi'(0) = -logR_prime0/2;
/// violating the latter raises invalid_pairing_error. A zero of phi on [0, t]
/// raises singularity_error carrying the location.
FactorizationTriple factorize_direct(const FieldSpec& field, const OscillatorSolution& phi,
                                     double t);

/// beta(t) = R0 * integral_0^t ds/phi^2 by adaptive quadrature.
cplx beta_quadrature(const OscillatorSolution& phi, cplx R0, double t,
                     double abs_tol = 1e-12);

} // namespace qdrive
