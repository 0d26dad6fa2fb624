#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>

namespace qdrive {

using cplx = std::complex<double>;
using RealFn = std::function<double(double)>;
using CplxFn = std::function<cplx(double)>;

/// Imaginary unit.
inline constexpr cplx iu{0.0, 1.0};

/// 2x2 complex matrix, row-major. Carrier for Hamiltonians and propagators
/// in the (|p>, |q>) = (upper, lower) basis.
struct Mat2 {
    std::array<cplx, 4> a{};

    static Mat2 zero() { return {}; }
    static Mat2 identity() { return {{cplx(1.0), cplx(0.0), cplx(0.0), cplx(1.0)}}; }

    cplx& operator()(int r, int c) { return a[static_cast<std::size_t>(2 * r + c)]; }
    const cplx& operator()(int r, int c) const { return a[static_cast<std::size_t>(2 * r + c)]; }

    Mat2 operator+(const Mat2& o) const {
        return {{a[0] + o.a[0], a[1] + o.a[1], a[2] + o.a[2], a[3] + o.a[3]}};
    }
    Mat2 operator-(const Mat2& o) const {
        return {{a[0] - o.a[0], a[1] - o.a[1], a[2] - o.a[2], a[3] - o.a[3]}};
    }
    Mat2 operator*(const Mat2& o) const {
        return {{a[0] * o.a[0] + a[1] * o.a[2], a[0] * o.a[1] + a[1] * o.a[3],
                 a[2] * o.a[0] + a[3] * o.a[2], a[2] * o.a[1] + a[3] * o.a[3]}};
    }
    Mat2 operator*(cplx s) const { return {{a[0] * s, a[1] * s, a[2] * s, a[3] * s}}; }
    friend Mat2 operator*(cplx s, const Mat2& m) { return m * s; }

    Mat2 dagger() const {
        return {{std::conj(a[0]), std::conj(a[2]), std::conj(a[1]), std::conj(a[3])}};
    }
    cplx trace() const { return a[0] + a[3]; }
    cplx det() const { return a[0] * a[3] - a[1] * a[2]; }

    /// Entrywise max-abs norm.
    double max_abs() const {
        double m = 0.0;
        for (const auto& z : a) m = std::max(m, std::abs(z));
        return m;
    }

    bool is_finite() const {
        for (const auto& z : a)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        return true;
    }
};

inline double max_abs_diff(const Mat2& x, const Mat2& y) { return (x - y).max_abs(); }

/// || U^dag U - I ||_inf (entrywise).
inline double unitarity_defect(const Mat2& u) {
    return max_abs_diff(u.dagger() * u, Mat2::identity());
}

/// Amplitude pair (c_p, c_q) on the (|p>, |q>) basis.
struct QubitState {
    cplx cp{1.0, 0.0};
    cplx cq{0.0, 0.0};

    double norm() const { return std::sqrt(std::norm(cp) + std::norm(cq)); }

    /// Population inversion P = |c_p|^2 - |c_q|^2.
    double population_inversion() const { return std::norm(cp) - std::norm(cq); }
};

inline QubitState apply(const Mat2& u, const QubitState& s) {
    return {u.a[0] * s.cp + u.a[1] * s.cq, u.a[2] * s.cp + u.a[3] * s.cq};
}

} // namespace qdrive
