#pragma once

#include <vector>

#include "qdrive/families.hpp"
#include "qdrive/su2.hpp"

namespace qdrive {

enum class StepMethod {
    fixed_rk4,      ///< classic 4th-order Runge-Kutta, fixed step
    adaptive_rk45,  ///< embedded Dormand-Prince 5(4), error per unit time
};

/// Controls for the numerical integration of i dU/dt = H(t) U.
struct IntegrationConfig {
    double t_max = 1.0;
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    double max_step = 0.0;      ///< 0 = unrestricted (adaptive) / t_max/1000 (fixed)
    StepMethod method = StepMethod::adaptive_rk45;
    double char_period = 0.0;   ///< 0 = derived as 2 pi / rate scale
    int n_samples = 1000;       ///< uniform sample grid on [0, t_max], >= 2
};

struct PropagatorTrajectory {
    std::vector<double> t;
    std::vector<Mat2> U;
};

/// Integrate the dynamical law from U(0) = I and sample on a uniform grid.
/// No unitarity renormalization is applied; the defect is a diagnostic.
/// Throws stiffness_error (with the failing time) on step-size underflow and
/// evaluation_error if H(t) turns non-finite.
PropagatorTrajectory integrate_propagator(const HamiltonianParams& params,
                                          const IntegrationConfig& config);

struct VerifyThresholds {
    double propagator = 1e-8;
    double unitarity = 1e-10;
    double ermakov = 1e-8;
    double schrodinger = 1e-7;
};

struct VerificationReport {
    double max_unitarity_defect = 0.0;
    double max_propagator_error = 0.0;
    double max_ermakov_residual = 0.0;
    double max_schrodinger_residual = 0.0;
    std::vector<double> grid;
    bool pass = false;
};

/// Compare the family's closed-form propagator against the integrated one and
/// collect all residual maxima over the sample grid.
VerificationReport verify_family(const FamilyBundle& family, const IntegrationConfig& config,
                                 const VerifyThresholds& thresholds = {});

/// |mu'' + Omega^2 mu - Omega0^2/mu^3| at time t. Uses the analytic second
/// derivative when the solution carries one unless force_fd is set, in which
/// case a 7-point central-difference stencil is used.
double ermakov_residual(const ErmakovSolution& sol, double t, bool force_fd = false);

/// || i dU/dt - H(t) U ||_inf of a closed-form propagator, dU/dt by central
/// differences with the given step.
double schrodinger_residual(const FamilyBundle& family, double t, double fd_step);

} // namespace qdrive
