#include "qdrive/factorization.hpp"

#include <cmath>
#include <sstream>

#include "qdrive/errors.hpp"
#include "qdrive/numerics.hpp"

namespace qdrive {

namespace {

constexpr double kFieldZeroTol = 1e-14;
constexpr double kPhiZeroTol = 1e-12;

cplx require_finite(cplx z, const char* what, double t) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        std::ostringstream os;
        os << what << " is not finite at t = " << t;
        throw evaluation_error(os.str());
    }
    return z;
}

} // namespace

cplx FieldSpec::V(double t) const {
    return -iu * std::exp(-iu * Delta * t) * std::conj(R(t));
}

cplx frequency_from_field(const FieldSpec& field, double t) {
    const cplx r = require_finite(field.R(t), "R(t)", t);
    if (std::abs(r) < kFieldZeroTol)
        throw singularity_error("driving field vanishes", t);
    cplx l1, l2; // (ln R)' and (ln R)''
    if (field.dlogR && field.d2logR) {
        l1 = field.dlogR(t);
        l2 = field.d2logR(t);
    } else {
        // Stencils act on R itself; (ln R)'' = R''/R - (R'/R)^2 avoids any
        // branch handling of the logarithm.
        const double h = fd_step_seven(field.char_freq);
        const cplx rp = derivative7(field.R, t, h);
        const cplx rpp = second_derivative7(field.R, t, h);
        l1 = rp / r;
        l2 = rpp / r - l1 * l1;
    }
    return -0.25 * l1 * l1 + 0.5 * l2 + std::norm(r);
}

FactorizationTriple factorize_direct(const FieldSpec& field, const OscillatorSolution& phi,
                                     double t) {
    if (std::abs(field.R0) < kFieldZeroTol) throw parameter_error("R(0) must be nonzero");
    const cplx phi0 = phi.phi(0.0);
    if (std::abs(phi0 - cplx(1.0)) > 1e-9)
        throw parameter_error("oscillator solution must satisfy phi(0) = 1");
    // alpha(0) = 0 requires phi'(0) = -[ln R(0)]'/2.
    const cplx ic = phi.phi_prime(0.0) + 0.5 * field.logR_prime0;
    if (std::abs(ic) > 1e-8 * std::max(1.0, std::abs(field.logR_prime0)))
        throw invalid_pairing_error(
            "oscillator solution violates the alpha(0) = 0 initial condition");

    if (t == 0.0) return {};

    const cplx r = require_finite(field.R(t), "R(t)", t);
    if (std::abs(r) < kFieldZeroTol)
        throw singularity_error("driving field vanishes", t);
    const cplx ph = require_finite(phi.phi(t), "phi(t)", t);
    if (std::abs(ph) < kPhiZeroTol)
        throw singularity_error("oscillator solution vanishes", t);

    const cplx dlog_r =
        field.dlogR ? field.dlogR(t)
                    : derivative5(field.R, t, fd_step_first(field.char_freq)) / r;

    FactorizationTriple out;
    out.alpha = std::exp(-iu * field.Delta * t) / r * (phi.phi_prime(t) / ph + 0.5 * dlog_r);

    const cplx log_phi = unwrapped_log(phi.phi, t, field.char_freq, kPhiZeroTol);
    const cplx log_r_rel =
        unwrapped_log(field.R, t, field.char_freq, kFieldZeroTol) - std::log(field.R0);
    out.delta_f = -2.0 * log_phi - log_r_rel - iu * field.Delta * t;

    out.beta = beta_quadrature(phi, field.R0, t);
    return out;
}

cplx beta_quadrature(const OscillatorSolution& phi, cplx R0, double t, double abs_tol) {
    if (t == 0.0) return {};
    auto integrand = [&phi](double s) {
        const cplx ph = phi.phi(s);
        if (std::abs(ph) < kPhiZeroTol)
            throw singularity_error("integrand pole: phi vanishes", s);
        return 1.0 / (ph * ph);
    };
    return R0 * integrate_adaptive(integrand, 0.0, t, abs_tol);
}

} // namespace qdrive
