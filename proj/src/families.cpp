#include "qdrive/families.hpp"

#include <cmath>
#include <numbers>

#include "qdrive/errors.hpp"
#include "qdrive/numerics.hpp"

namespace qdrive {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPhiZeroTol = 1e-12;

// Branch-continuous log of phi(t) = cos(w t) + b sin(w t). The argument is
// reduced per half-period (r = w t - m pi) so the branch index m and the
// trigonometric values can never disagree; phi(t) = (-1)^m phi_red(r), and the
// continuous argument advances by sgn(Im b) * pi per half-period.
cplx log_harmonic_phi(double w, cplx b, double t) {
    const double x = w * t;
    const double m = std::round(x / kPi);
    const double r = x - m * kPi;
    const cplx phi_red = std::cos(r) + b * std::sin(r);
    if (std::abs(phi_red) < kPhiZeroTol)
        throw singularity_error("factorization breaks down: phi vanishes", t);
    const double s = b.imag() >= 0.0 ? 1.0 : -1.0;
    return {std::log(std::abs(phi_red)), std::arg(phi_red) + s * m * kPi};
}

double reduced_eta(double omega1, double kappa, double Omega0, double t) {
    const double x = omega1 * t;
    const double m = std::round(x / kPi);
    const double r = x - m * kPi;
    return (std::atan(kappa * std::tan(r)) + m * kPi) / Omega0;
}

} // namespace

double FamilyParams::kappa() const {
    if (!Omega1 || !(*Omega1 > 0.0))
        throw parameter_error("kappa requires a positive Omega1");
    return Omega0() / *Omega1;
}

HamiltonianParams magnetic_to_qubit(const MagneticField& field) {
    HamiltonianParams params;
    params.Delta = field.b * field.B3;
    const RealFn b1 = field.B1;
    const RealFn b2 = field.B2;
    const double b = field.b;
    params.V = [b1, b2, b](double t) {
        const double x1 = b1 ? b1(t) : 0.0;
        const double x2 = b2 ? b2(t) : 0.0;
        return 0.5 * b * cplx(x1, -x2);
    };
    return params;
}

double eta(double t, const FamilyParams& params) {
    const double kappa = params.kappa();
    return reduced_eta(*params.Omega1, kappa, params.Omega0(), t);
}

Mat2 FamilyBundle::propagator(double t) const {
    return compose_propagator(alpha(t), delta_f(t), beta(t));
}

FamilyBundle circular_family(const FamilyParams& params) {
    const double O0 = params.Omega0();
    if (!(O0 > 0.0)) throw parameter_error("circular family is degenerate: Omega0 = 0");
    const cplx g = params.g;
    const cplx gbar = std::conj(g);
    const double delta = params.delta;
    const double Delta = params.Delta;
    const double omega = Delta + delta; // rotation frequency of V
    const cplx b = -iu * delta / (2.0 * O0);

    FamilyBundle f;
    f.name = "circular";
    f.params = params;
    f.omega_sq = O0 * O0;
    f.characteristic_period = 2.0 * kPi / O0;
    f.rate_scale = std::max({1.0, 2.0 * O0, std::abs(delta) + std::abs(Delta), std::abs(g)});

    f.R = [gbar, delta](double t) { return -iu * gbar * std::exp(iu * delta * t); };
    f.V = [g, omega](double t) { return g * std::exp(-iu * omega * t); };
    f.alpha = [g, delta, O0, omega](double t) {
        const double c = std::cos(O0 * t), s = std::sin(O0 * t);
        const cplx den = 2.0 * O0 * c - iu * delta * s;
        if (std::abs(den) < kPhiZeroTol * 2.0 * O0)
            throw singularity_error("factorization breaks down at resonance", t);
        return -2.0 * iu * g * s * std::exp(-iu * omega * t) / den;
    };
    f.beta = [gbar, delta, O0](double t) {
        const double c = std::cos(O0 * t), s = std::sin(O0 * t);
        const cplx den = 2.0 * O0 * c - iu * delta * s;
        if (std::abs(den) < kPhiZeroTol * 2.0 * O0)
            throw singularity_error("factorization breaks down at resonance", t);
        return -2.0 * iu * gbar * s / den;
    };
    f.delta_f = [O0, b, omega](double t) {
        return -2.0 * log_harmonic_phi(O0, b, t) - iu * omega * t;
    };
    f.population = [g, delta, O0](double t) {
        return (std::norm(g) * std::cos(2.0 * O0 * t) + 0.25 * delta * delta) / (O0 * O0);
    };
    f.state = [g, gbar, delta, O0, omega](double t) {
        const double c = std::cos(O0 * t), s = std::sin(O0 * t);
        QubitState psi;
        psi.cp = std::exp(-0.5 * iu * omega * t) * (c + iu * delta / (2.0 * O0) * s);
        psi.cq = -iu * gbar / O0 * std::exp(0.5 * iu * omega * t) * s;
        return psi;
    };

    f.phi.phi = [O0, b](double t) { return std::cos(O0 * t) + b * std::sin(O0 * t); };
    f.phi.phi_prime = [O0, b](double t) {
        return O0 * (-std::sin(O0 * t) + b * std::cos(O0 * t));
    };

    f.ermakov.mu = [](double) { return 1.0; };
    f.ermakov.mu_prime = [](double) { return 0.0; };
    f.ermakov.mu_second = [](double) { return 0.0; };
    f.ermakov.phase_integral = [](double t) { return t; };
    f.ermakov.omega_sq = [O0](double) { return O0 * O0; };
    f.ermakov.phi1 = [O0](double t) { return std::cos(O0 * t); };
    f.ermakov.phi1_prime = [O0](double t) { return -O0 * std::sin(O0 * t); };
    f.ermakov.lambda = delta;
    f.ermakov.Omega0 = O0;
    f.ermakov.c1 = O0 * O0;
    f.ermakov.c2 = 0.0;
    f.ermakov.rate_scale = O0;

    f.field.R = f.R;
    f.field.R0 = -iu * gbar;
    f.field.logR_prime0 = iu * delta;
    f.field.Delta = Delta;
    f.field.dlogR = [delta](double) { return iu * delta; };
    f.field.d2logR = [](double) { return cplx(0.0); };
    f.field.char_freq = std::max({1.0, O0, std::abs(delta), std::abs(g)});
    return f;
}

FamilyBundle decaying_family(const FamilyParams& params) {
    const double O0 = params.Omega0();
    if (!(O0 > 0.0)) throw parameter_error("decaying family is degenerate: Omega0 = 0");
    const cplx g = params.g;
    const cplx gbar = std::conj(g);
    const double delta = params.delta;
    const double Delta = params.Delta;
    const double o0sq = O0 * O0;

    auto mu_sq = [o0sq](double t) { return o0sq * t * t + 1.0; };
    auto atan_phase = [O0](double t) { return std::atan(O0 * t) / O0; };

    FamilyBundle f;
    f.name = "decaying";
    f.params = params;
    f.omega_sq = 0.0;
    f.characteristic_period = 2.0 * kPi / O0;
    f.rate_scale = std::max({1.0, 2.0 * O0, std::abs(delta) + std::abs(Delta), std::abs(g)});

    f.R = [gbar, delta, mu_sq, atan_phase](double t) {
        return -iu * gbar * std::exp(iu * delta * atan_phase(t)) / mu_sq(t);
    };
    const CplxFn R = f.R;
    f.V = [R, Delta](double t) { return -iu * std::exp(-iu * Delta * t) * std::conj(R(t)); };
    f.alpha = [g, delta, Delta, atan_phase](double t) {
        return -2.0 * iu * g * t * std::exp(-iu * (Delta * t + delta * atan_phase(t))) /
               cplx(2.0, -delta * t);
    };
    f.beta = [gbar, delta](double t) { return -2.0 * iu * gbar * t / cplx(2.0, -delta * t); };
    f.delta_f = [delta, Delta, mu_sq, atan_phase](double t) {
        // Re(2 - i delta t) = 2 keeps the principal log branch-safe.
        return std::log(4.0 * mu_sq(t)) - 2.0 * std::log(cplx(2.0, -delta * t)) -
               iu * (delta * atan_phase(t) + Delta * t);
    };
    f.population = [g, delta, o0sq](double t) {
        return ((0.25 * delta * delta - std::norm(g)) * t * t + 1.0) / (o0sq * t * t + 1.0);
    };
    f.state = [g, gbar, delta, Delta, mu_sq, atan_phase](double t) {
        const double m = std::sqrt(mu_sq(t));
        const cplx ph = std::exp(-0.5 * iu * (Delta * t + delta * atan_phase(t)));
        QubitState psi;
        psi.cp = cplx(2.0, delta * t) / (2.0 * m) * ph;
        psi.cq = -iu * gbar * t / m / ph;
        return psi;
    };

    f.phi.phi = [delta](double t) { return cplx(1.0, -0.5 * delta * t); };
    f.phi.phi_prime = [delta](double) { return cplx(0.0, -0.5 * delta); };

    f.ermakov.mu = [mu_sq](double t) { return std::sqrt(mu_sq(t)); };
    f.ermakov.mu_prime = [o0sq, mu_sq](double t) { return o0sq * t / std::sqrt(mu_sq(t)); };
    f.ermakov.mu_second = [o0sq, mu_sq](double t) {
        const double w = mu_sq(t);
        return o0sq / (w * std::sqrt(w)); // = Omega0^2 / mu^3, the Omega = 0 Ermakov balance
    };
    f.ermakov.phase_integral = atan_phase;
    f.ermakov.omega_sq = [](double) { return 0.0; };
    f.ermakov.phi1 = [](double t) { return t; };
    f.ermakov.phi1_prime = [](double) { return 1.0; };
    f.ermakov.lambda = delta;
    f.ermakov.Omega0 = O0;
    f.ermakov.c1 = 1.0;
    f.ermakov.c2 = 0.0;
    f.ermakov.rate_scale = O0;

    f.field.R = f.R;
    f.field.R0 = -iu * gbar;
    f.field.logR_prime0 = iu * delta;
    f.field.Delta = Delta;
    f.field.dlogR = [o0sq, delta, mu_sq](double t) {
        return cplx(-2.0 * o0sq * t, delta) / mu_sq(t);
    };
    f.field.d2logR = [o0sq, delta, mu_sq](double t) {
        const double w = mu_sq(t);
        return 2.0 * o0sq * cplx(o0sq * t * t - 1.0, -delta * t) / (w * w);
    };
    f.field.char_freq = std::max({1.0, O0, std::abs(delta), std::abs(g)});
    return f;
}

FamilyBundle oscillating_family(const FamilyParams& params) {
    if (!params.Omega1 || !(*params.Omega1 > 0.0))
        throw parameter_error("oscillating family requires Omega1 > 0");
    const double O1 = *params.Omega1;
    const double O0 = params.Omega0();
    if (!(O0 > 0.0)) throw parameter_error("oscillating family is degenerate: Omega0 = 0");
    const double kappa = O0 / O1;
    const cplx g = params.g;
    const cplx gbar = std::conj(g);
    const double delta = params.delta;
    const double Delta = params.Delta;
    const cplx b = -iu * delta / (2.0 * O1);

    auto mu_sq = [O1, kappa](double t) {
        const double c = std::cos(O1 * t), s = std::sin(O1 * t);
        return c * c + kappa * kappa * s * s;
    };
    auto eta_fn = [O0, O1, kappa](double t) { return reduced_eta(O1, kappa, O0, t); };

    FamilyBundle f;
    f.name = "oscillating";
    f.params = params;
    f.omega_sq = O1 * O1;
    f.characteristic_period = kPi / O1;
    const double amp = std::max(1.0, 1.0 / (kappa * kappa));
    f.rate_scale = std::max({1.0, 2.0 * O1, 2.0 * O0,
                             (std::abs(delta) + std::abs(g)) * amp + std::abs(Delta)});

    f.R = [gbar, delta, mu_sq, eta_fn](double t) {
        return -iu * gbar * std::exp(iu * delta * eta_fn(t)) / mu_sq(t);
    };
    const CplxFn R = f.R;
    f.V = [R, Delta](double t) { return -iu * std::exp(-iu * Delta * t) * std::conj(R(t)); };
    f.alpha = [g, delta, Delta, O1, eta_fn](double t) {
        const double c = std::cos(O1 * t), s = std::sin(O1 * t);
        const cplx den = 2.0 * O1 * c - iu * delta * s;
        if (std::abs(den) < kPhiZeroTol * 2.0 * O1)
            throw singularity_error("factorization breaks down at resonance", t);
        return -2.0 * iu * g * s * std::exp(-iu * (Delta * t + delta * eta_fn(t))) / den;
    };
    f.beta = [gbar, delta, O1](double t) {
        const double c = std::cos(O1 * t), s = std::sin(O1 * t);
        const cplx den = 2.0 * O1 * c - iu * delta * s;
        if (std::abs(den) < kPhiZeroTol * 2.0 * O1)
            throw singularity_error("factorization breaks down at resonance", t);
        return -2.0 * iu * gbar * s / den;
    };
    f.delta_f = [O1, b, delta, Delta, mu_sq, eta_fn](double t) {
        return std::log(mu_sq(t)) - 2.0 * log_harmonic_phi(O1, b, t) -
               iu * (delta * eta_fn(t) + Delta * t);
    };
    f.population = [g, delta, O1, mu_sq](double t) {
        const double c = std::cos(O1 * t), s = std::sin(O1 * t);
        return (4.0 * O1 * O1 * c * c + (delta * delta - 4.0 * std::norm(g)) * s * s) /
               (4.0 * O1 * O1 * mu_sq(t));
    };
    f.state = [g, gbar, delta, Delta, O1, mu_sq, eta_fn](double t) {
        const double c = std::cos(O1 * t), s = std::sin(O1 * t);
        const double m = std::sqrt(mu_sq(t));
        const cplx ph = std::exp(-0.5 * iu * (Delta * t + delta * eta_fn(t)));
        QubitState psi;
        psi.cp = ph * (c + iu * delta / (2.0 * O1) * s) / m;
        psi.cq = -iu * gbar / O1 * s / (m * ph);
        return psi;
    };

    f.phi.phi = [O1, b](double t) { return std::cos(O1 * t) + b * std::sin(O1 * t); };
    f.phi.phi_prime = [O1, b](double t) {
        return O1 * (-std::sin(O1 * t) + b * std::cos(O1 * t));
    };

    f.ermakov.mu = [mu_sq](double t) { return std::sqrt(mu_sq(t)); };
    f.ermakov.mu_prime = [O1, kappa, mu_sq](double t) {
        const double wp = (kappa * kappa - 1.0) * O1 * std::sin(2.0 * O1 * t);
        return 0.5 * wp / std::sqrt(mu_sq(t));
    };
    f.ermakov.mu_second = [O1, kappa, mu_sq](double t) {
        const double w = mu_sq(t);
        const double m = std::sqrt(w);
        const double wp = (kappa * kappa - 1.0) * O1 * std::sin(2.0 * O1 * t);
        const double wpp = 2.0 * O1 * O1 * (kappa * kappa - 1.0) * std::cos(2.0 * O1 * t);
        return wpp / (2.0 * m) - wp * wp / (4.0 * w * m);
    };
    f.ermakov.phase_integral = eta_fn;
    f.ermakov.omega_sq = [O1](double) { return O1 * O1; };
    f.ermakov.phi1 = [O1](double t) { return std::cos(O1 * t); };
    f.ermakov.phi1_prime = [O1](double t) { return -O1 * std::sin(O1 * t); };
    f.ermakov.lambda = delta;
    f.ermakov.Omega0 = O0;
    f.ermakov.c1 = O0 * O0;
    f.ermakov.c2 = 0.0;
    f.ermakov.rate_scale = O1;

    f.field.R = f.R;
    f.field.R0 = -iu * gbar;
    f.field.logR_prime0 = iu * delta;
    f.field.Delta = Delta;
    const RealFn mu = f.ermakov.mu;
    const RealFn mup = f.ermakov.mu_prime;
    const RealFn mupp = f.ermakov.mu_second;
    f.field.dlogR = [mu, mup, delta](double t) {
        const double m = mu(t);
        return cplx(-2.0 * mup(t) / m, delta / (m * m));
    };
    f.field.d2logR = [mu, mup, mupp, delta](double t) {
        const double m = mu(t), mp = mup(t);
        return cplx(-2.0 * (mupp(t) * m - mp * mp) / (m * m),
                    -2.0 * delta * mp / (m * m * m));
    };
    f.field.char_freq = std::max({1.0, 10.0 * O1, (std::abs(delta) + std::abs(g)) * amp});
    return f;
}

FamilyBundle custom_pinney_family(double omega1, cplx R0, cplx R0_prime, double Delta,
                                  std::optional<double> c1, std::optional<double> c2) {
    if (!(omega1 > 0.0)) throw parameter_error("custom family requires Omega1 > 0");
    const InitialData init = map_initial_data(R0, R0_prime);
    const double O0 = std::sqrt(std::norm(R0) + 0.25 * init.lambda * init.lambda);
    // Defaults solve mu(0) = 1, mu'(0) = init.mu0_prime exactly.
    const double c1v = c1.value_or(O0 * O0 + init.mu0_prime * init.mu0_prime);
    const double c2v = c2.value_or(init.mu0_prime / c1v);

    ErmakovSolution sol = pinney_mu(harmonic_seed(omega1), O0, c1v, c2v, init.mu0_prime);
    sol.lambda = init.lambda;
    // Exact phase integral: theta(t) = atan[(c1/Omega0)(c2 + tan(r)/Omega1)] + m pi,
    // reduced per half-period of the seed.
    sol.phase_integral = [omega1, O0, c1v, c2v](double t) {
        const double x = omega1 * t;
        const double m = std::round(x / kPi);
        const double r = x - m * kPi;
        const double theta = std::atan(c1v / O0 * (c2v + std::tan(r) / omega1)) + m * kPi;
        const double theta0 = std::atan(c1v / O0 * c2v);
        return (theta - theta0) / O0;
    };

    FamilyBundle f;
    f.name = "custom-pinney";
    f.params.g = iu * std::conj(R0); // R0 = -i conj(g)
    f.params.delta = init.lambda;
    f.params.Delta = Delta;
    f.params.Omega1 = omega1;
    f.omega_sq = omega1 * omega1;
    f.characteristic_period = kPi / omega1;
    const double kappa = O0 / omega1;
    const double amp = std::max(1.0, 1.0 / (kappa * kappa)) *
                       std::max(1.0, c1v / (O0 * O0)); // loose ceiling on 1/mu^2
    f.rate_scale = std::max({1.0, 2.0 * omega1, 2.0 * O0,
                             (std::abs(init.lambda) + std::abs(R0)) * amp + std::abs(Delta)});

    f.field = synthesized_field_spec(sol, R0, Delta);
    f.field.char_freq = std::max(f.field.char_freq, 10.0 * omega1);
    f.R = f.field.R;
    const FieldSpec field = f.field;
    f.V = [field](double t) { return field.V(t); };

    // Oscillator solution paired with the field: phi' (0) = -[ln R(0)]'/2.
    const cplx b = -0.5 * (R0_prime / R0) / omega1;
    f.phi.phi = [omega1, b](double t) {
        return std::cos(omega1 * t) + b * std::sin(omega1 * t);
    };
    f.phi.phi_prime = [omega1, b](double t) {
        return omega1 * (-std::sin(omega1 * t) + b * std::cos(omega1 * t));
    };

    const OscillatorSolution phi = f.phi;
    const ErmakovSolution sol_copy = sol;
    const double lambda = init.lambda;
    f.alpha = [sol_copy, phi, R0, Delta, lambda](double t) {
        if (t == 0.0) return cplx(0.0);
        const cplx ph = phi.phi(t);
        if (std::abs(ph) < kPhiZeroTol)
            throw singularity_error("factorization breaks down: phi vanishes", t);
        const double m = sol_copy.mu(t);
        const double phase = lambda * sol_copy.phase_integral(t);
        return (m * m / R0) * std::exp(-iu * (Delta * t + phase)) *
               (phi.phi_prime(t) / ph - sol_copy.mu_prime(t) / m +
                iu * lambda / (2.0 * m * m));
    };
    f.beta = [omega1, b, R0](double t) {
        // beta = R0 * phi2/phi with the unit-Wronskian companion phi2 = sin/Omega1.
        const cplx ph = std::cos(omega1 * t) + b * std::sin(omega1 * t);
        if (std::abs(ph) < kPhiZeroTol)
            throw singularity_error("factorization breaks down: phi vanishes", t);
        return R0 * std::sin(omega1 * t) / (omega1 * ph);
    };
    f.delta_f = [sol_copy, omega1, b, Delta, lambda](double t) {
        const double m = sol_copy.mu(t);
        const double phase = lambda * sol_copy.phase_integral(t);
        return std::log(m * m) - 2.0 * log_harmonic_phi(omega1, b, t) -
               iu * (phase + Delta * t);
    };
    f.ermakov = sol;
    f.ermakov.phi1 = [omega1](double t) { return std::cos(omega1 * t); };
    f.ermakov.phi1_prime = [omega1](double t) { return -omega1 * std::sin(omega1 * t); };

    // No independent closed displays for the state here; apply U(t) to |p>.
    const CplxFn alpha = f.alpha;
    const CplxFn delta_f = f.delta_f;
    const CplxFn beta = f.beta;
    f.state = [alpha, delta_f, beta](double t) {
        const Mat2 u = compose_propagator(alpha(t), delta_f(t), beta(t));
        return apply(u, QubitState{});
    };
    const std::function<QubitState(double)> state = f.state;
    f.population = [state](double t) { return state(t).population_inversion(); };
    return f;
}

} // namespace qdrive
