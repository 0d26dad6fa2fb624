#include "qdrive/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qdrive/errors.hpp"

namespace qdrive {

namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Kronrod 15|7 nodes and weights on [-1, 1] (positive half).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469,
};

struct PanelResult {
    cplx kronrod{};
    double error = 0.0;
    double resabs = 0.0; ///< integral of |f|, floor for attainable accuracy
};

PanelResult gk15_panel(const CplxFn& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const cplx fc = f(c);
    cplx ig{};
    cplx ik = kWgk[7] * fc;
    double resabs = kWgk[7] * std::abs(fc);
    for (int j = 0; j < 7; ++j) {
        const cplx fl = f(c - h * kXgk[j]);
        const cplx fr = f(c + h * kXgk[j]);
        ik += kWgk[j] * (fl + fr);
        resabs += kWgk[j] * (std::abs(fl) + std::abs(fr));
        if (j % 2 == 1) ig += kWg[j / 2] * (fl + fr);
    }
    ig += kWg[3] * fc;
    PanelResult r;
    r.kronrod = ik * h;
    r.error = std::abs((ik - ig) * h);
    r.resabs = resabs * std::abs(h);
    return r;
}

cplx gk15_adaptive(const CplxFn& f, double a, double b, double abs_tol, int depth) {
    const PanelResult r = gk15_panel(f, a, b);
    // a panel converged to machine level cannot improve further
    const double floor_tol = 50.0 * 2.220446049250313e-16 * r.resabs;
    if (r.error <= std::max(abs_tol, floor_tol) ||
        b - a < 1e-15 * std::max(1.0, std::abs(a))) {
        if (!std::isfinite(r.kronrod.real()) || !std::isfinite(r.kronrod.imag()))
            throw singularity_error("quadrature integrand is not finite", 0.5 * (a + b));
        return r.kronrod;
    }
    if (depth > 48) {
        const double mid = 0.5 * (a + b);
        const cplx fm = f(mid);
        if (std::abs(fm) > 1e10)
            throw singularity_error("integrand pole detected", mid);
        std::ostringstream os;
        os << "quadrature failed to converge on [" << a << ", " << b << "]";
        throw synthesis_error(os.str());
    }
    const double c = 0.5 * (a + b);
    return gk15_adaptive(f, a, c, 0.5 * abs_tol, depth + 1) +
           gk15_adaptive(f, c, b, 0.5 * abs_tol, depth + 1);
}

} // namespace

double fd_step_first(double rate_scale) {
    return 1e-6 * std::max(1.0, 2.0 * kPi / std::max(rate_scale, 1e-30));
}

double fd_step_five(double rate_scale) { return 1.4e-3 / std::max(1.0, rate_scale); }

double fd_step_seven(double rate_scale) { return 2.7e-2 / std::max(1.0, rate_scale); }

cplx derivative5(const CplxFn& f, double t, double h) {
    return (-f(t + 2 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2 * h)) / (12.0 * h);
}

cplx derivative7(const CplxFn& f, double t, double h) {
    return (-f(t + 3 * h) + 9.0 * f(t + 2 * h) - 45.0 * f(t + h) + 45.0 * f(t - h) -
            9.0 * f(t - 2 * h) + f(t - 3 * h)) /
           (-60.0 * h);
}

cplx second_derivative7(const CplxFn& f, double t, double h) {
    return (2.0 * (f(t + 3 * h) + f(t - 3 * h)) - 27.0 * (f(t + 2 * h) + f(t - 2 * h)) +
            270.0 * (f(t + h) + f(t - h)) - 490.0 * f(t)) /
           (180.0 * h * h);
}

double second_derivative7(const RealFn& f, double t, double h) {
    return (2.0 * (f(t + 3 * h) + f(t - 3 * h)) - 27.0 * (f(t + 2 * h) + f(t - 2 * h)) +
            270.0 * (f(t + h) + f(t - h)) - 490.0 * f(t)) /
           (180.0 * h * h);
}

cplx integrate_adaptive(const CplxFn& f, double a, double b, double abs_tol) {
    if (a == b) return {};
    return gk15_adaptive(f, a, b, std::max(abs_tol, 1e-15), 0);
}

double integrate_adaptive_real(const RealFn& f, double a, double b, double abs_tol) {
    return integrate_adaptive([&f](double s) { return cplx(f(s)); }, a, b, abs_tol).real();
}

namespace {

// One continuity step of the walk: pick the branch of arg f(t) closest to the
// running value, bisecting until consecutive arguments differ by < pi/2.
double continue_arg(const CplxFn& f, double t_prev, double arg_prev, double t, double zero_tol,
                    int depth) {
    const cplx w = f(t);
    const double mag = std::abs(w);
    if (mag < zero_tol) throw singularity_error("function vanishes on the unwrapping path", t);
    double arg = std::arg(w);
    arg += 2.0 * kPi * std::round((arg_prev - arg) / (2.0 * kPi));
    if (std::abs(arg - arg_prev) <= 0.5 * kPi || depth > 48) return arg;
    const double tm = 0.5 * (t_prev + t);
    const double arg_mid = continue_arg(f, t_prev, arg_prev, tm, zero_tol, depth + 1);
    return continue_arg(f, tm, arg_mid, t, zero_tol, depth + 1);
}

} // namespace

cplx unwrapped_log(const CplxFn& f, double t, double rate_scale, double zero_tol) {
    const cplx w0 = f(0.0);
    if (std::abs(w0) < zero_tol)
        throw singularity_error("function vanishes at the base point", 0.0);
    double arg = std::arg(w0);
    if (t != 0.0) {
        // ~64 nodes per characteristic period along the path
        const double rate = std::max(1.0, rate_scale);
        const int n = std::max(32, static_cast<int>(std::ceil(std::abs(t) * rate * 10.0)));
        double prev = 0.0;
        for (int k = 1; k <= n; ++k) {
            const double tk = t * static_cast<double>(k) / static_cast<double>(n);
            arg = continue_arg(f, prev, arg, tk, zero_tol, 0);
            prev = tk;
        }
    }
    const double mag = std::abs(f(t));
    if (mag < zero_tol) throw singularity_error("function vanishes on the unwrapping path", t);
    return {std::log(mag), arg};
}

double unwrapped_angle(const RealFn& u, const RealFn& v, double t, double rate_scale) {
    return unwrapped_log([&u, &v](double s) { return cplx(u(s), v(s)); }, t, rate_scale, 1e-300)
        .imag();
}

} // namespace qdrive
