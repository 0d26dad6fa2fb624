#pragma once

#include <optional>
#include <string>

#include "qdrive/ermakov.hpp"
#include "qdrive/factorization.hpp"
#include "qdrive/su2.hpp"

namespace qdrive {

/// Parameters shared by the closed-form families. The convention
/// R0 = -i conj(g), [ln R(0)]' = i delta is used throughout, so
/// Omega0^2 = |g|^2 + delta^2/4.
struct FamilyParams {
    cplx g{};                      ///< coupling amplitude (may be complex)
    double delta = 0.0;            ///< detuning
    double Delta = 0.0;            ///< level splitting
    std::optional<double> Omega1;  ///< prescribed constant oscillator frequency

    double Omega0() const { return std::sqrt(std::norm(g) + 0.25 * delta * delta); }
    double kappa() const;          ///< Omega0/Omega1; requires Omega1 set and > 0
};

/// Transverse-plus-axial magnetic field acting on a spin-1/2 moment,
/// H = b sigma . B with b = -g_l mu_B.
struct MagneticField {
    RealFn B1;
    RealFn B2;
    double B3 = 0.0;
    double b = 1.0;
};

/// Identification V(t) = b [B1(t) - i B2(t)]/2, Delta = b B3.
HamiltonianParams magnetic_to_qubit(const MagneticField& field);

/// Closed-form solvable family: driving field, factorizing functions, state
/// and population inversion, plus the Ermakov/oscillator data behind them.
/// All evaluators are pure closed forms.
struct FamilyBundle {
    std::string name;
    FamilyParams params;

    CplxFn R;
    CplxFn V;
    CplxFn alpha;
    CplxFn delta_f;
    CplxFn beta;
    RealFn population;                        ///< closed-form P(t) for psi(0) = |p>
    std::function<QubitState(double)> state;  ///< closed-form U(t)|p>

    ErmakovSolution ermakov;
    OscillatorSolution phi;
    FieldSpec field;

    double omega_sq = 0.0;               ///< prescribed constant Omega^2
    double characteristic_period = 0.0;
    double rate_scale = 1.0;             ///< fastest angular rate in U(t)

    FactorizationTriple triple(double t) const { return {alpha(t), delta_f(t), beta(t)}; }

    /// U(t) composed from the factorizing functions.
    Mat2 propagator(double t) const;

    HamiltonianParams hamiltonian() const { return {params.Delta, V}; }
};

/// Circularly polarized field R = -i conj(g) e^{i delta t} (kappa = 1 limit).
/// Requires Omega0 > 0.
FamilyBundle circular_family(const FamilyParams& params);

/// Omega = 0 family with decaying field R = -i conj(g) e^{i (delta/Omega0) atan(Omega0 t)} / (Omega0^2 t^2 + 1).
FamilyBundle decaying_family(const FamilyParams& params);

/// Omega = Omega1 > 0 family with oscillating-amplitude precessing field.
FamilyBundle oscillating_family(const FamilyParams& params);

/// General Pinney-backed family for user-supplied initial data (R0, R0') and
/// optional Pinney constants. Defaults reproduce mu(0) = 1 and the mu'(0)
/// implied by the initial data.
FamilyBundle custom_pinney_family(double omega1, cplx R0, cplx R0_prime, double Delta,
                                  std::optional<double> c1 = std::nullopt,
                                  std::optional<double> c2 = std::nullopt);

/// Branch-continuous primitive of 1/mu^2 for the oscillating family,
/// eta(t) = [atan(kappa tan(Omega1 r)) + m pi]/Omega0 with the reduced
/// argument r = t - m pi/Omega1. Monotone increasing, eta(0) = 0.
double eta(double t, const FamilyParams& params);

} // namespace qdrive
