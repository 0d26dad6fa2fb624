#include "qdrive/su2.hpp"

#include <cmath>
#include <sstream>

#include "qdrive/errors.hpp"

namespace qdrive {

Mat2 build_hamiltonian(const HamiltonianParams& params, double t) {
    if (!std::isfinite(params.Delta)) throw parameter_error("Delta is not finite");
    if (!std::isfinite(t)) throw parameter_error("time is not finite");
    const cplx v = params.V ? params.V(t) : cplx(0.0);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        std::ostringstream os;
        os << "V(t) is not finite at t = " << t;
        throw evaluation_error(os.str());
    }
    Mat2 h;
    h(0, 0) = cplx(0.5 * params.Delta);
    h(0, 1) = v;
    h(1, 0) = std::conj(v);
    h(1, 1) = cplx(-0.5 * params.Delta);
    return h;
}

Mat2 compose_propagator(cplx alpha, cplx delta_f, cplx beta) {
    if (std::abs(delta_f.real()) > kDeltaFReOverflowGuard) {
        std::ostringstream os;
        os << "|Re delta_f| = " << std::abs(delta_f.real()) << " exceeds the overflow guard "
           << kDeltaFReOverflowGuard;
        throw overflow_guard_error(os.str());
    }
    const cplx ep = std::exp(0.5 * delta_f);
    const cplx em = std::exp(-0.5 * delta_f);
    Mat2 u;
    u(0, 0) = ep + alpha * beta * em;
    u(0, 1) = alpha * em;
    u(1, 0) = beta * em;
    u(1, 1) = em;
    return u;
}

EvolveResult evolve_state(const Mat2& u, const QubitState& psi0) {
    if (std::abs(psi0.norm() - 1.0) > 1e-12)
        throw parameter_error("initial state is not normalized");
    EvolveResult r;
    r.state = apply(u, psi0);
    r.unitary_warning = unitarity_defect(u) > 1e-10;
    return r;
}

} // namespace qdrive
