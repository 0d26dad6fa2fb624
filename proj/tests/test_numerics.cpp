#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qdrive/errors.hpp"
#include "qdrive/numerics.hpp"

using namespace qdrive;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("stencil derivatives on a smooth complex signal") {
    auto f = [](double t) { return std::exp(iu * 3.0 * t) * (1.0 + 0.5 * t * t); };
    const double t = 0.8;
    const cplx d_exact = (iu * 3.0 * (1.0 + 0.5 * t * t) + t) * std::exp(iu * 3.0 * t);
    const cplx d2_exact =
        std::exp(iu * 3.0 * t) * (-9.0 * (1.0 + 0.5 * t * t) + iu * 6.0 * t + 1.0);
    CHECK(std::abs(derivative5(f, t, 1e-3) - d_exact) < 1e-10);
    CHECK(std::abs(derivative7(f, t, fd_step_seven(3.0)) - d_exact) < 1e-10);
    CHECK(std::abs(second_derivative7(f, t, fd_step_seven(3.0)) - d2_exact) < 1e-9);
}

TEST_CASE("adaptive quadrature agrees with closed forms") {
    CHECK(integrate_adaptive_real([](double s) { return std::sin(s); }, 0.0, kPi, 1e-13) ==
          doctest::Approx(2.0).epsilon(1e-13));
    const cplx z = integrate_adaptive([](double s) { return std::exp(iu * s); }, 0.0, 1.0, 1e-13);
    CHECK(std::abs(z - (std::exp(iu * 1.0) - 1.0) / iu) < 1e-13);
}

TEST_CASE("adaptive quadrature matches a 10^6-step trapezoid oracle") {
    // polynomials with no real zeros, randomized coefficients
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uni(0.3, 2.0);
    for (int k = 0; k < 5; ++k) {
        const double a1 = uni(rng), b1 = uni(rng), a2 = uni(rng), b2 = uni(rng);
        auto poly = [=](double s) {
            return ((s - a1) * (s - a1) + b1) * ((s + a2) * (s + a2) + b2);
        };
        auto integrand = [&poly](double s) { return 1.0 / (poly(s) * poly(s)); };
        const double t_end = 1.0 + uni(rng);

        const int n = 1000000;
        double trap = 0.5 * (integrand(0.0) + integrand(t_end));
        for (int i = 1; i < n; ++i) trap += integrand(t_end * i / static_cast<double>(n));
        trap *= t_end / n;

        CHECK(integrate_adaptive_real(integrand, 0.0, t_end, 1e-12) ==
              doctest::Approx(trap).epsilon(1e-9));
    }
}

TEST_CASE("quadrature reports a pole through the integrand") {
    auto integrand = [](double s) -> cplx {
        if (std::abs(s - 0.5) < 1e-13) throw singularity_error("pole", s);
        return 1.0 / (s - 0.5);
    };
    CHECK_THROWS_AS(integrate_adaptive(integrand, 0.0, 1.0, 1e-12), error);
}

TEST_CASE("unwrapped_log follows a winding phase continuously") {
    // f = e^{i w t}: principal log would jump at pi; the walk must not
    const double w = 5.0;
    auto f = [w](double t) { return std::exp(iu * w * t); };
    for (double t : {0.5, 2.0, 7.0, 20.0}) {
        const cplx l = unwrapped_log(f, t, w);
        CHECK(std::abs(l.real()) < 1e-12);
        CHECK(l.imag() == doctest::Approx(w * t).epsilon(1e-12));
    }
}

TEST_CASE("unwrapped_log throws on a zero crossing with its location") {
    auto f = [](double t) { return cplx(1.0 - t, 0.0); };
    try {
        unwrapped_log(f, 2.0, 1.0);
        FAIL("expected singularity_error");
    } catch (const singularity_error& e) {
        CHECK(std::abs(e.location() - 1.0) < 0.1);
    }
}

TEST_CASE("unwrapped_angle integrates the winding rate") {
    // u + i v = e^{i t} once around: angle 2 pi
    auto u = [](double t) { return std::cos(t); };
    auto v = [](double t) { return std::sin(t); };
    CHECK(unwrapped_angle(u, v, 2.0 * kPi, 1.0) == doctest::Approx(2.0 * kPi).epsilon(1e-12));
}
