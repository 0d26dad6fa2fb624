#include "qdrive/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qdrive/errors.hpp"
#include "qdrive/numerics.hpp"

namespace qdrive {

namespace {

Mat2 rhs(const HamiltonianParams& params, double t, const Mat2& u) {
    const Mat2 h = build_hamiltonian(params, t);
    return -iu * (h * u);
}

Mat2 rk4_step(const HamiltonianParams& p, double t, const Mat2& u, double h) {
    const Mat2 k1 = rhs(p, t, u);
    const Mat2 k2 = rhs(p, t + 0.5 * h, u + 0.5 * h * k1);
    const Mat2 k3 = rhs(p, t + 0.5 * h, u + 0.5 * h * k2);
    const Mat2 k4 = rhs(p, t + h, u + h * k3);
    return u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Dormand-Prince 5(4) tableau.
struct Dp45Result {
    Mat2 u5;
    double err;
};

Dp45Result dp45_step(const HamiltonianParams& p, double t, const Mat2& u, double h) {
    const Mat2 k1 = rhs(p, t, u);
    const Mat2 k2 = rhs(p, t + h / 5.0, u + h * (1.0 / 5.0) * k1);
    const Mat2 k3 = rhs(p, t + 3.0 * h / 10.0, u + h * ((3.0 / 40.0) * k1 + (9.0 / 40.0) * k2));
    const Mat2 k4 = rhs(p, t + 4.0 * h / 5.0,
                        u + h * ((44.0 / 45.0) * k1 - (56.0 / 15.0) * k2 + (32.0 / 9.0) * k3));
    const Mat2 k5 =
        rhs(p, t + 8.0 * h / 9.0,
            u + h * ((19372.0 / 6561.0) * k1 - (25360.0 / 2187.0) * k2 +
                     (64448.0 / 6561.0) * k3 - (212.0 / 729.0) * k4));
    const Mat2 k6 = rhs(p, t + h,
                        u + h * ((9017.0 / 3168.0) * k1 - (355.0 / 33.0) * k2 +
                                 (46732.0 / 5247.0) * k3 + (49.0 / 176.0) * k4 -
                                 (5103.0 / 18656.0) * k5));
    const Mat2 u5 = u + h * ((35.0 / 384.0) * k1 + (500.0 / 1113.0) * k3 +
                             (125.0 / 192.0) * k4 - (2187.0 / 6784.0) * k5 + (11.0 / 84.0) * k6);
    const Mat2 k7 = rhs(p, t + h, u5);
    const Mat2 u4 = u + h * ((5179.0 / 57600.0) * k1 + (7571.0 / 16695.0) * k3 +
                             (393.0 / 640.0) * k4 - (92097.0 / 339200.0) * k5 +
                             (187.0 / 2100.0) * k6 + (1.0 / 40.0) * k7);
    Dp45Result r{u5, max_abs_diff(u5, u4)};
    if (!r.u5.is_finite()) throw evaluation_error("integration produced non-finite values");
    return r;
}

// Advance from (t, u) to t_end with error-per-unit-time control, so the
// accumulated error over the whole run stays at the tolerance level.
void advance_adaptive(const HamiltonianParams& p, double& t, Mat2& u, double t_end,
                      const IntegrationConfig& cfg, double tau_char, double& h) {
    const double h_floor = 1e-14 * std::max(1.0, std::abs(t_end));
    while (t < t_end) {
        h = std::min(h, t_end - t);
        if (cfg.max_step > 0.0) h = std::min(h, cfg.max_step);
        const Dp45Result r = dp45_step(p, t, u, h);
        const double scale = cfg.abs_tol + cfg.rel_tol * u.max_abs();
        const double tol = scale * (h / tau_char);
        if (r.err <= tol || h <= h_floor) {
            if (h <= h_floor && r.err > 16.0 * tol) {
                std::ostringstream os;
                os << "step size underflow at t = " << t;
                throw stiffness_error(os.str(), t);
            }
            t += h;
            u = r.u5;
        }
        const double grow = r.err > 0.0 ? 0.9 * std::pow(tol / r.err, 0.2) : 5.0;
        h *= std::clamp(grow, 0.2, 5.0);
        if (h < h_floor) h = h_floor;
    }
    t = t_end;
}

} // namespace

PropagatorTrajectory integrate_propagator(const HamiltonianParams& params,
                                          const IntegrationConfig& config) {
    if (!(config.t_max > 0.0)) throw parameter_error("t_max must be positive");
    if (config.n_samples < 2) throw parameter_error("n_samples must be at least 2");
    if (!(config.abs_tol > 0.0) || config.abs_tol > 1e-3 || !(config.rel_tol > 0.0) ||
        config.rel_tol > 1e-3)
        throw parameter_error("tolerances must lie in (0, 1e-3]");

    const double tau_char = config.char_period > 0.0 ? config.char_period : config.t_max;
    PropagatorTrajectory traj;
    traj.t.resize(static_cast<std::size_t>(config.n_samples));
    traj.U.reserve(static_cast<std::size_t>(config.n_samples));

    Mat2 u = Mat2::identity();
    double t = 0.0;
    double h = tau_char / 1000.0;
    const double fixed_h = config.max_step > 0.0 ? config.max_step : config.t_max / 1000.0;

    for (int i = 0; i < config.n_samples; ++i) {
        const double ti = config.t_max * static_cast<double>(i) /
                          static_cast<double>(config.n_samples - 1);
        traj.t[static_cast<std::size_t>(i)] = ti;
        if (ti > t) {
            if (config.method == StepMethod::adaptive_rk45) {
                advance_adaptive(params, t, u, ti, config, tau_char, h);
            } else {
                // fixed step, landing exactly on the sample time
                const int n = std::max(1, static_cast<int>(std::ceil((ti - t) / fixed_h - 1e-12)));
                const double hs = (ti - t) / static_cast<double>(n);
                for (int k = 0; k < n; ++k) u = rk4_step(params, t + k * hs, u, hs);
                t = ti;
                if (!u.is_finite())
                    throw evaluation_error("integration produced non-finite values");
            }
        }
        traj.U.push_back(u);
    }
    return traj;
}

double ermakov_residual(const ErmakovSolution& sol, double t, bool force_fd) {
    const double m = sol.mu(t);
    double mupp;
    if (sol.mu_second && !force_fd) {
        mupp = sol.mu_second(t);
    } else {
        // 7-point stencil with one Richardson halving. The step grows with
        // sqrt(|mu|) to hold the eps*|mu|/h^2 roundoff near 3e-9; the
        // extrapolation suppresses the h^6 truncation for oscillation rates
        // up to ~50 rad per unit time.
        const double h = 1.5e-3 * std::sqrt(std::max(1.0, m));
        const double d_h = second_derivative7(sol.mu, t, h);
        const double d_h2 = second_derivative7(sol.mu, t, 0.5 * h);
        mupp = (64.0 * d_h2 - d_h) / 63.0;
    }
    const double om2 = sol.omega_sq ? sol.omega_sq(t) : 0.0;
    return std::abs(mupp + om2 * m - sol.Omega0 * sol.Omega0 / (m * m * m));
}

double schrodinger_residual(const FamilyBundle& family, double t, double fd_step) {
    auto u_entry = [&family](double s) { return family.propagator(s); };
    // 5-point stencil entrywise
    Mat2 du;
    const Mat2 um2 = u_entry(t - 2 * fd_step), um1 = u_entry(t - fd_step);
    const Mat2 up1 = u_entry(t + fd_step), up2 = u_entry(t + 2 * fd_step);
    for (int k = 0; k < 4; ++k) {
        du.a[static_cast<std::size_t>(k)] =
            (-up2.a[static_cast<std::size_t>(k)] + 8.0 * up1.a[static_cast<std::size_t>(k)] -
             8.0 * um1.a[static_cast<std::size_t>(k)] + um2.a[static_cast<std::size_t>(k)]) /
            (12.0 * fd_step);
    }
    const Mat2 h = build_hamiltonian(family.hamiltonian(), t);
    return max_abs_diff(iu * du, h * family.propagator(t));
}

VerificationReport verify_family(const FamilyBundle& family, const IntegrationConfig& config,
                                 const VerifyThresholds& thresholds) {
    // leave char_period = 0 so the error-per-unit-time scale is the whole run,
    // keeping the accumulated integration error at the tolerance level
    const IntegrationConfig& cfg = config;
    const PropagatorTrajectory traj = integrate_propagator(family.hamiltonian(), cfg);

    VerificationReport report;
    report.grid = traj.t;
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        const double t = traj.t[i];
        const Mat2 u_closed = family.propagator(t);
        report.max_propagator_error =
            std::max(report.max_propagator_error, max_abs_diff(u_closed, traj.U[i]));
        report.max_unitarity_defect =
            std::max(report.max_unitarity_defect, unitarity_defect(u_closed));
        report.max_ermakov_residual =
            std::max(report.max_ermakov_residual, ermakov_residual(family.ermakov, t));
    }
    // Schrodinger residual on a coarser subgrid, away from the endpoints.
    const double h5 = fd_step_five(3.0 * family.rate_scale);
    const int n_res = std::min<int>(64, cfg.n_samples);
    for (int k = 0; k < n_res; ++k) {
        const double t = cfg.t_max * (static_cast<double>(k) + 0.5) / static_cast<double>(n_res);
        report.max_schrodinger_residual =
            std::max(report.max_schrodinger_residual, schrodinger_residual(family, t, h5));
    }
    report.pass = report.max_propagator_error < thresholds.propagator &&
                  report.max_unitarity_defect < thresholds.unitarity &&
                  report.max_ermakov_residual < thresholds.ermakov &&
                  report.max_schrodinger_residual < thresholds.schrodinger;
    return report;
}

} // namespace qdrive
