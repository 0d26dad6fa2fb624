#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qdrive/errors.hpp"
#include "qdrive/ermakov.hpp"
#include "qdrive/families.hpp"
#include "qdrive/numerics.hpp"
#include "qdrive/oracle.hpp"

using namespace qdrive;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("pinney_mu with the harmonic seed reproduces cos^2 + kappa^2 sin^2") {
    const double O1 = 2.0, O0 = 3.0, kappa = O0 / O1;
    const ErmakovSolution sol = pinney_mu(harmonic_seed(O1), O0, O0 * O0, 0.0);
    for (double t : {0.0, 0.3, 1.1, 2.9}) {
        const double c = std::cos(O1 * t), s = std::sin(O1 * t);
        CHECK(sol.mu(t) == doctest::Approx(std::sqrt(c * c + kappa * kappa * s * s))
                              .epsilon(1e-14));
    }
}

TEST_CASE("pinney_mu: the isotropic case collapses to mu = 1") {
    const double O = 1.7;
    const ErmakovSolution sol = pinney_mu(harmonic_seed(O), O, O * O, 0.0);
    for (double t : {0.0, 0.5, 2.0, 6.0}) {
        CHECK(sol.mu(t) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(sol.mu_prime(t)) < 1e-13);
    }
}

TEST_CASE("pinney_mu with the linear seed gives mu^2 = Omega0^2 t^2 + 1") {
    const double O0 = 1.2;
    const ErmakovSolution sol = pinney_mu(linear_seed(), O0, 1.0, 0.0);
    for (double t : {0.0, 0.4, 2.5, 7.0}) {
        CHECK(sol.mu(t) == doctest::Approx(std::sqrt(O0 * O0 * t * t + 1.0)).epsilon(1e-14));
    }
}

TEST_CASE("pinney_mu parameter guards") {
    CHECK_THROWS_AS(pinney_mu(harmonic_seed(1.0), 2.0, -1.0, 0.0), parameter_error);
    CHECK_THROWS_AS(pinney_mu(harmonic_seed(1.0), 2.0, 0.0, 0.0), parameter_error);
    // c1 that breaks mu(0) = 1
    CHECK_THROWS_AS(pinney_mu(harmonic_seed(1.0), 2.0, 1.0, 0.0), parameter_error);
}

TEST_CASE("pinney_mu: mu^2 reaching zero raises a synthesis error") {
    // Omega0 = 0 collapses the first Pinney term; c2 shifts the zero of the second
    // into t > 0 where mu^2 = (c2 cos + sin)^2 vanishes.
    const ErmakovSolution sol = pinney_mu(harmonic_seed(1.0), 0.0, 1.0, 1.0, 1.0);
    const double t_zero = 3.0 * kPi / 4.0; // tan(t) = -c2
    CHECK_THROWS_AS(sol.mu(t_zero), synthesis_error);
}

TEST_CASE("pinney_mu accepts general constants that satisfy the normalization") {
    const double O0 = 2.0, mu0p = -0.7;
    const double c1 = O0 * O0 + mu0p * mu0p;
    const double c2 = mu0p / c1;
    const ErmakovSolution sol = pinney_mu(harmonic_seed(1.5), O0, c1, c2, mu0p);
    CHECK(sol.mu(0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(sol.mu_prime(0.0) == doctest::Approx(mu0p).epsilon(1e-12));
}

TEST_CASE("map_initial_data projections") {
    // [ln R(0)]' = i delta gives a flat-amplitude start
    const InitialData a = map_initial_data(cplx(0.0, -2.0), cplx(0.0, -2.0) * cplx(0.0, 4.0));
    CHECK(a.mu0_prime == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(a.lambda == doctest::Approx(4.0).epsilon(1e-15));

    const InitialData b = map_initial_data(cplx(1.0, 1.0), cplx(0.0, 0.0));
    CHECK(b.mu0_prime == 0.0);
    CHECK(b.lambda == 0.0);

    const InitialData c = map_initial_data(cplx(1.0, 0.0), cplx(2.0, 3.0));
    CHECK(c.mu0_prime == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(c.lambda == doctest::Approx(3.0).epsilon(1e-15));

    CHECK_THROWS_AS(map_initial_data(cplx(0.0, 0.0), cplx(1.0, 0.0)), parameter_error);
}

TEST_CASE("synthesize_field: constant mu gives the circularly polarized field") {
    ErmakovSolution sol;
    sol.mu = [](double) { return 1.0; };
    sol.mu_prime = [](double) { return 0.0; };
    sol.phase_integral = [](double t) { return t; };
    sol.lambda = 4.0;
    sol.Omega0 = 3.0;
    const cplx R0 = -iu * cplx(std::sqrt(5.0), 0.0);
    for (double t : {0.0, 0.7, 2.1}) {
        const cplx expected = R0 * std::exp(iu * 4.0 * t);
        CHECK(std::abs(synthesize_field(sol, R0, t) - expected) < 1e-14);
    }
}

TEST_CASE("synthesize_field reproduces the decaying closed form") {
    const double g = 0.5, delta = 1.0;
    const FamilyParams params{cplx(g, 0.0), delta, 0.0, std::nullopt};
    const double O0 = params.Omega0();
    const ErmakovSolution sol = [&] {
        ErmakovSolution s = pinney_mu(linear_seed(), O0, 1.0, 0.0);
        s.lambda = delta;
        return s;
    }();
    const cplx R0 = -iu * std::conj(params.g);
    for (double t : {0.0, 0.5, 3.0, 9.0}) {
        const cplx expected = -iu * std::conj(params.g) /
                              (O0 * O0 * t * t + 1.0) *
                              std::exp(iu * delta / O0 * std::atan(O0 * t));
        CHECK(std::abs(synthesize_field(sol, R0, t) - expected) < 1e-12);
    }
}

TEST_CASE("synthesized field satisfies the log-derivative identity") {
    // d/dt ln R = -2 mu'/mu + i lambda/mu^2, checked by central differences
    const FamilyParams params{cplx(std::sqrt(5.0), 0.0), 4.0, 0.0, 3.0 / 0.6};
    const FamilyBundle fam = oscillating_family(params);
    const FieldSpec field = synthesized_field_spec(fam.ermakov, fam.field.R0, 0.0);
    for (double t : {0.11, 0.42, 1.3}) {
        const cplx fd = derivative5(field.R, t, 1e-5) / field.R(t);
        const double m = fam.ermakov.mu(t);
        const cplx expected(-2.0 * fam.ermakov.mu_prime(t) / m, fam.ermakov.lambda / (m * m));
        CHECK(std::abs(fd - expected) < 1e-7);
    }
}

TEST_CASE("gamma split is consistent with the synthesized field") {
    const FamilyParams params{cplx(1.0, 0.5), 2.0, 0.0, 1.9};
    const FamilyBundle fam = oscillating_family(params);
    const GammaSplit gs = gamma_split(fam.ermakov);
    for (double t : {0.2, 0.9, 2.4}) {
        const cplx fd = derivative5(fam.field.R, t, 1e-5) / fam.field.R(t);
        CHECK(std::abs(fd.real() - gs.gamma1(t)) < 1e-7);
        CHECK(std::abs(fd.imag() - gs.gamma2(t)) < 1e-7);
        // gamma1 = gamma2'/gamma2 wherever gamma2 != 0
        const double g2p = derivative5([&gs](double s) { return cplx(gs.gamma2(s)); }, t, 1e-5)
                               .real();
        CHECK(gs.gamma1(t) == doctest::Approx(g2p / gs.gamma2(t)).epsilon(1e-7));
    }
}

TEST_CASE("Omega0^2 = |R0|^2 + lambda^2/4 as constructed") {
    for (const FamilyBundle& fam :
         {oscillating_family({cplx(std::sqrt(5.0), 0.0), 4.0, 1.0, 5.0}),
          decaying_family({cplx(0.5, 0.0), 2.0, 0.0, std::nullopt}),
          circular_family({cplx(1.0, -2.0), 3.0, 0.0, std::nullopt})}) {
        const double lhs = fam.ermakov.Omega0 * fam.ermakov.Omega0;
        const double rhs = std::norm(fam.field.R0) + 0.25 * fam.ermakov.lambda * fam.ermakov.lambda;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-15));
    }
}

TEST_CASE("Ermakov residual by central differences stays below 1e-8") {
    FamilyParams osc{cplx(std::sqrt(5.0), 0.0), 4.0, 0.0, std::nullopt};
    osc.Omega1 = osc.Omega0() / 0.6;
    const FamilyBundle fam = oscillating_family(osc);
    const FamilyBundle dec = decaying_family({cplx(0.5, 0.0), 1.0, 0.0, std::nullopt});
    for (int k = 0; k < 1000; ++k) {
        const double t1 = 3.0 * fam.characteristic_period * (k + 0.5) / 1000.0;
        CHECK(ermakov_residual(fam.ermakov, t1, true) < 1e-8);
        const double t2 = 20.0 / dec.ermakov.Omega0 * (k + 0.5) / 1000.0;
        CHECK(ermakov_residual(dec.ermakov, t2, true) < 1e-8);
    }
}

TEST_CASE("mu_factorization: zero triple at t = 0 and the oscillating closed forms") {
    FamilyParams params{cplx(std::sqrt(5.0), 0.0), 4.0, 1.0, std::nullopt};
    params.Omega1 = params.Omega0() / 0.6;
    const FamilyBundle fam = oscillating_family(params);
    const FactorizationTriple zero =
        mu_factorization(fam.ermakov, fam.phi, fam.field.R0, params.Delta, 0.0);
    CHECK(zero.alpha == cplx(0.0));
    CHECK(zero.delta_f == cplx(0.0));
    CHECK(zero.beta == cplx(0.0));
    for (double t : {0.3, 1.2, 2.8}) {
        const FactorizationTriple trip =
            mu_factorization(fam.ermakov, fam.phi, fam.field.R0, params.Delta, t);
        CHECK(std::abs(trip.alpha - fam.alpha(t)) < 1e-9);
        CHECK(std::abs(trip.delta_f - fam.delta_f(t)) < 1e-9);
        CHECK(std::abs(trip.beta - fam.beta(t)) < 1e-9);
    }
}

TEST_CASE("phase relation R(t + tau) = exp(i lambda I(tau)) R(t)") {
    FamilyParams params{cplx(std::sqrt(5.0), 0.0), 4.0, 0.0, std::nullopt};
    params.Omega1 = params.Omega0() / 3.1;
    const FamilyBundle fam = oscillating_family(params);
    const double tau = fam.characteristic_period;
    const cplx advance = std::exp(iu * fam.ermakov.lambda * fam.ermakov.phase_integral(tau));
    for (double t : {0.0, 0.4, 1.9, 5.0}) {
        CHECK(std::abs(fam.R(t + tau) - advance * fam.R(t)) < 1e-9);
    }
}

TEST_CASE("check_periodicity: g = sqrt(5), delta = 4 closes after p = 3") {
    FamilyParams params{cplx(std::sqrt(5.0), 0.0), 4.0, 0.0, std::nullopt};
    params.Omega1 = params.Omega0() / 0.6;
    const FamilyBundle fam = oscillating_family(params);
    const double tau = fam.characteristic_period;
    const auto spec = check_periodicity(fam.ermakov, tau);
    REQUIRE(spec.has_value());
    CHECK(spec->p == 3);
    CHECK(spec->tau_p == doctest::Approx(3.0 * tau).epsilon(1e-15));
    // R is periodic with period p tau
    double max_diff = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double t = 3.0 * tau * k / 200.0;
        max_diff = std::max(max_diff, std::abs(fam.R(t + spec->tau_p) - fam.R(t)));
    }
    CHECK(max_diff < 1e-8);
}

TEST_CASE("check_periodicity: phase advance of exactly 2 pi gives p = 1") {
    // delta/Omega0 = 2: mu = 1, lambda = 2 Omega0, tau = pi/Omega0
    ErmakovSolution sol;
    sol.mu = [](double) { return 1.0; };
    sol.mu_prime = [](double) { return 0.0; };
    sol.phase_integral = [](double t) { return t; };
    sol.Omega0 = 1.0;
    sol.lambda = 2.0;
    const auto spec = check_periodicity(sol, kPi);
    REQUIRE(spec.has_value());
    CHECK(spec->p == 1);
}

TEST_CASE("check_periodicity: irrational phase ratio never closes") {
    // g = sqrt(pi), delta = 2 sqrt(pi): delta/Omega0 = sqrt(2)
    FamilyParams params{cplx(std::sqrt(kPi), 0.0), 2.0 * std::sqrt(kPi), 0.0, std::nullopt};
    params.Omega1 = params.Omega0() / 0.6;
    const FamilyBundle fam = oscillating_family(params);
    CHECK(!check_periodicity(fam.ermakov, fam.characteristic_period, 64).has_value());
}
