#include "qdrive/ermakov.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qdrive/errors.hpp"
#include "qdrive/numerics.hpp"

namespace qdrive {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPhiZeroTol = 1e-12;

double require_positive_mu_sq(double w, double t) {
    // mu < 1e-12 counts as a zero, matching the denominator conventions
    if (!(w > 1e-24) || !std::isfinite(w)) {
        std::ostringstream os;
        os << "mu^2 = " << w << " is not positive at t = " << t;
        throw synthesis_error(os.str());
    }
    return w;
}

} // namespace

SeedSolution harmonic_seed(double omega1) {
    if (!(omega1 > 0.0)) throw parameter_error("harmonic seed requires Omega1 > 0");
    SeedSolution s;
    s.phi1 = [omega1](double t) { return std::cos(omega1 * t); };
    s.phi1_prime = [omega1](double t) { return -omega1 * std::sin(omega1 * t); };
    s.phi2 = [omega1](double t) { return std::sin(omega1 * t) / omega1; };
    s.phi2_prime = [omega1](double t) { return std::cos(omega1 * t); };
    s.omega_sq = [omega1](double) { return omega1 * omega1; };
    s.rate_scale = omega1;
    return s;
}

SeedSolution linear_seed() {
    SeedSolution s;
    s.phi1 = [](double t) { return t; };
    s.phi1_prime = [](double) { return 1.0; };
    s.phi2 = [](double) { return -1.0; };
    s.phi2_prime = [](double) { return 0.0; };
    s.omega_sq = [](double) { return 0.0; };
    s.rate_scale = 1.0;
    return s;
}

double ErmakovSolution::phase_integral_at(double t) const {
    if (phase_integral) return phase_integral(t);
    const RealFn& m = mu;
    const RealFn integrand = [&m](double s) {
        const double v = m(s);
        return 1.0 / (v * v);
    };
    return integrate_adaptive_real(integrand, 0.0, t, 1e-12);
}

ErmakovSolution pinney_mu(const SeedSolution& seed, double Omega0, double c1, double c2,
                          double expected_mu0_prime) {
    if (!(c1 > 0.0)) throw parameter_error("Pinney constant c1 must be positive");
    if (!(Omega0 >= 0.0) || !std::isfinite(Omega0))
        throw parameter_error("Omega0 must be a finite non-negative number");

    const double o0sq = Omega0 * Omega0;
    auto p1 = seed.phi1;
    auto p1p = seed.phi1_prime;
    auto p2 = seed.phi2;
    auto p2p = seed.phi2_prime;
    auto osq = seed.omega_sq;

    // mu^2 and its first two derivatives from the Pinney expression
    //   w = Omega0^2 phi1^2 / c1 + c1 (c2 phi1 + phi2)^2,
    // with phi'' = -Omega^2 phi eliminating second derivatives of the seed.
    auto w_fn = [=](double t) {
        const double u = p1(t);
        const double q = c2 * u + p2(t);
        return o0sq * u * u / c1 + c1 * q * q;
    };
    auto wp_fn = [=](double t) {
        const double u = p1(t), up = p1p(t);
        const double q = c2 * u + p2(t), qp = c2 * up + p2p(t);
        return 2.0 * o0sq * u * up / c1 + 2.0 * c1 * q * qp;
    };
    auto wpp_fn = [=](double t) {
        const double u = p1(t), up = p1p(t);
        const double q = c2 * u + p2(t), qp = c2 * up + p2p(t);
        const double om2 = osq(t);
        // u'' = -Omega^2 u, q'' = -Omega^2 q
        return 2.0 * o0sq * (up * up - om2 * u * u) / c1 +
               2.0 * c1 * (qp * qp - om2 * q * q);
    };

    ErmakovSolution sol;
    sol.mu = [w_fn](double t) { return std::sqrt(require_positive_mu_sq(w_fn(t), t)); };
    sol.mu_prime = [w_fn, wp_fn](double t) {
        const double w = require_positive_mu_sq(w_fn(t), t);
        return wp_fn(t) / (2.0 * std::sqrt(w));
    };
    sol.mu_second = [w_fn, wp_fn, wpp_fn](double t) {
        const double w = require_positive_mu_sq(w_fn(t), t);
        const double m = std::sqrt(w);
        const double wp = wp_fn(t);
        return wpp_fn(t) / (2.0 * m) - wp * wp / (4.0 * w * m);
    };
    // integral of 1/mu^2: mu^2 = (Omega0^2/c1)(u^2 + v^2) with v = (c1/Omega0) q,
    // and the continuous angle of u + i v advances by Omega0 per unit of it.
    if (Omega0 > 0.0) {
        const double ratio = c1 / Omega0;
        const double rate = std::max(1.0, seed.rate_scale);
        auto u_fn = [p1](double t) { return p1(t); };
        auto v_fn = [=](double t) { return ratio * (c2 * p1(t) + p2(t)); };
        const double theta0 = std::atan2(v_fn(0.0), u_fn(0.0));
        sol.phase_integral = [=](double t) {
            if (t == 0.0) return 0.0;
            return (unwrapped_angle(u_fn, v_fn, t, rate) - theta0) / Omega0;
        };
    }
    sol.omega_sq = osq;
    sol.phi1 = p1;
    sol.phi1_prime = p1p;
    sol.Omega0 = Omega0;
    sol.c1 = c1;
    sol.c2 = c2;
    sol.rate_scale = seed.rate_scale;

    const double mu0 = sol.mu(0.0);
    if (std::abs(mu0 - 1.0) > 1e-9) {
        std::ostringstream os;
        os << "Pinney constants give mu(0) = " << mu0 << ", expected 1";
        throw parameter_error(os.str());
    }
    const double mu0p = sol.mu_prime(0.0);
    if (std::abs(mu0p - expected_mu0_prime) > 1e-9) {
        std::ostringstream os;
        os << "Pinney constants give mu'(0) = " << mu0p << ", expected " << expected_mu0_prime;
        throw parameter_error(os.str());
    }
    return sol;
}

InitialData map_initial_data(cplx R0, cplx R0_prime) {
    if (std::abs(R0) < 1e-14) throw parameter_error("R(0) must be nonzero");
    const cplx ratio = R0_prime / R0;
    return {-0.5 * ratio.real(), ratio.imag()};
}

GammaSplit gamma_split(const ErmakovSolution& sol) {
    GammaSplit g;
    const RealFn mu = sol.mu;
    const RealFn mup = sol.mu_prime;
    const double lambda = sol.lambda;
    g.gamma1 = [mu, mup](double t) { return -2.0 * mup(t) / mu(t); };
    g.gamma2 = [mu, lambda](double t) { const double m = mu(t); return lambda / (m * m); };
    return g;
}

cplx synthesize_field(const ErmakovSolution& sol, cplx R0, double t) {
    if (std::abs(R0) < 1e-14) throw parameter_error("R(0) must be nonzero");
    const double m = sol.mu(t);
    return R0 / (m * m) * std::exp(iu * sol.lambda * sol.phase_integral_at(t));
}

FieldSpec synthesized_field_spec(const ErmakovSolution& sol, cplx R0, double Delta) {
    FieldSpec f;
    f.R = [sol, R0](double t) { return synthesize_field(sol, R0, t); };
    f.R0 = R0;
    f.logR_prime0 = cplx(-2.0 * sol.mu_prime(0.0), sol.lambda);
    f.Delta = Delta;
    const RealFn mu = sol.mu;
    const RealFn mup = sol.mu_prime;
    const double lambda = sol.lambda;
    f.dlogR = [mu, mup, lambda](double t) {
        const double m = mu(t);
        return cplx(-2.0 * mup(t) / m, lambda / (m * m));
    };
    if (sol.mu_second) {
        const RealFn mupp = sol.mu_second;
        f.d2logR = [mu, mup, mupp, lambda](double t) {
            const double m = mu(t);
            const double mp = mup(t);
            return cplx(-2.0 * (mupp(t) * m - mp * mp) / (m * m),
                        -2.0 * lambda * mp / (m * m * m));
        };
    }
    // 1/mu^2 reaches lambda/min(mu^2); keep a conservative rate for walks.
    f.char_freq = std::max({1.0, 2.0 * sol.rate_scale, std::abs(sol.lambda), std::abs(R0)});
    return f;
}

FactorizationTriple mu_factorization(const ErmakovSolution& sol, const OscillatorSolution& phi,
                                     cplx R0, double Delta, double t) {
    if (std::abs(R0) < 1e-14) throw parameter_error("R(0) must be nonzero");
    if (t == 0.0) return {};

    const cplx ph = phi.phi(t);
    if (std::abs(ph) < kPhiZeroTol)
        throw singularity_error("oscillator solution vanishes", t);
    const double m = sol.mu(t);
    const double mp = sol.mu_prime(t);
    const double phase = sol.lambda * sol.phase_integral_at(t);

    FactorizationTriple out;
    out.alpha = (m * m / R0) * std::exp(-iu * (Delta * t + phase)) *
                (phi.phi_prime(t) / ph - mp / m + iu * sol.lambda / (2.0 * m * m));
    const double rate = std::max({1.0, 2.0 * sol.rate_scale, std::abs(sol.lambda)});
    out.delta_f = std::log(m * m) - 2.0 * unwrapped_log(phi.phi, t, rate, kPhiZeroTol) -
                  iu * phase - iu * Delta * t;
    out.beta = beta_quadrature(phi, R0, t);
    return out;
}

std::optional<PeriodicitySpec> check_periodicity(const ErmakovSolution& sol, double tau,
                                                 int max_p, double angle_tol) {
    if (!(tau > 0.0)) throw parameter_error("period tau must be positive");
    const double theta = sol.lambda * sol.phase_integral_at(tau);
    for (int p = 1; p <= max_p; ++p) {
        const double misfit = std::remainder(static_cast<double>(p) * theta, 2.0 * kPi);
        if (std::abs(misfit) < angle_tol)
            return PeriodicitySpec{tau, p, static_cast<double>(p) * tau};
    }
    return std::nullopt;
}

} // namespace qdrive
