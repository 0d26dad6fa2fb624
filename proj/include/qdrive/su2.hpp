#pragma once

#include "qdrive/complex_mat2.hpp"

namespace qdrive {

/// Two-level Hamiltonian data: H(t) = [[Delta/2, V(t)], [conj(V(t)), -Delta/2]].
/// Units: hbar = 1; Delta and V carry angular-frequency units.
struct HamiltonianParams {
    double Delta = 0.0;
    CplxFn V;
};

/// Assemble the Hamiltonian matrix at time t. The result is Hermitian and
/// traceless by construction. Throws evaluation_error if V(t) is not finite.
Mat2 build_hamiltonian(const HamiltonianParams& params, double t);

/// Maximum |Re(delta_f)| accepted by compose_propagator before exp(delta_f/2)
/// is considered overflowed.
inline constexpr double kDeltaFReOverflowGuard = 50.0;

/// Propagator entries from the factorizing functions:
///   U = [[e^{df/2} + a b e^{-df/2}, a e^{-df/2}], [b e^{-df/2}, e^{-df/2}]].
/// delta_f must be the branch-continuous value. det U == 1 in exact arithmetic.
Mat2 compose_propagator(cplx alpha, cplx delta_f, cplx beta);

struct EvolveResult {
    QubitState state;
    /// Set when ||U^dag U - I||_inf exceeds 1e-10; the norm of the result is
    /// then not trustworthy.
    bool unitary_warning = false;
};

/// psi(t) = U psi0. Requires ||psi0|| = 1 within 1e-12.
EvolveResult evolve_state(const Mat2& u, const QubitState& psi0);

} // namespace qdrive
