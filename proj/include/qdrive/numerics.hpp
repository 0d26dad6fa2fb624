#pragma once

#include "qdrive/complex_mat2.hpp"

namespace qdrive {

// Finite-difference step policies. rate_scale is the largest angular
// frequency present in the differentiated signal (>= 1 assumed after clamping).

/// Step for first-derivative fallbacks inside factorization formulas:
/// 1e-6 x max(1, characteristic period).
double fd_step_first(double rate_scale);

/// Step for the 5-point first-derivative stencil, balancing h^4 truncation
/// against eps/h roundoff.
double fd_step_five(double rate_scale);

/// Step for the 7-point stencils, balancing h^6 truncation against
/// eps/h^2 roundoff of the second derivative.
double fd_step_seven(double rate_scale);

/// 5-point (4th-order) central first derivative.
cplx derivative5(const CplxFn& f, double t, double h);

/// 7-point (6th-order) central first and second derivatives.
cplx derivative7(const CplxFn& f, double t, double h);
cplx second_derivative7(const CplxFn& f, double t, double h);
double second_derivative7(const RealFn& f, double t, double h);

/// Adaptive Gauss-Kronrod (15|7) quadrature to an absolute tolerance.
/// Throws synthesis_error when the subdivision limit is hit.
cplx integrate_adaptive(const CplxFn& f, double a, double b, double abs_tol);
double integrate_adaptive_real(const RealFn& f, double a, double b, double abs_tol);

/// log f(t) with the imaginary part continued along the path 0 -> t so that
/// no step jumps by more than pi/2. The branch at t = 0 is the principal one.
/// Throws singularity_error (with the location) if |f| falls below zero_tol
/// anywhere on the path.
cplx unwrapped_log(const CplxFn& f, double t, double rate_scale, double zero_tol = 1e-12);

/// Continuous argument of u(t) + i v(t) along 0 -> t (same walk as
/// unwrapped_log, for real pairs). Used for phase integrals of Ermakov pairs.
double unwrapped_angle(const RealFn& u, const RealFn& v, double t, double rate_scale);

} // namespace qdrive
