#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qdrive/families.hpp"
#include "qdrive/oracle.hpp"

namespace qdrive {

enum class FamilyKind { circular, decaying, oscillating, custom_pinney };

FamilyKind family_kind_from_string(const std::string& name);
std::string to_string(FamilyKind kind);

/// Fully resolved run description: either parsed from a JSON config file,
/// from CLI flags, or both (flags override file values).
struct RunConfig {
    FamilyKind family = FamilyKind::circular;
    FamilyParams params{cplx(1.0, 0.0), 0.0, 0.0, std::nullopt};

    // custom-pinney extras
    std::optional<cplx> R0;
    std::optional<cplx> R0_prime;
    std::optional<double> c1;
    std::optional<double> c2;

    double t_max = 0.0;   ///< 0 = five characteristic periods
    int n_points = 1000;
    std::string out_path; ///< empty = per-command default (synth.csv, ...)
    VerifyThresholds thresholds{};
    int max_p = 64;

    /// Test hook: scales the closed-form alpha before composing U.
    double corrupt_alpha = 1.0;

    // scan sweeps (cross product; empty lists fall back to the scalar value)
    std::vector<double> kappa_list;
    std::vector<double> omega1_list;
    std::vector<double> delta_list;
    std::vector<double> g_re_list;
    std::vector<double> g_im_list;

    void validate() const;  ///< throws usage_error
};

/// Build the closed-form bundle selected by the config (corruption hook applied).
FamilyBundle make_bundle(const RunConfig& config);

/// Exit statuses: 0 success, 1 verification failure, 2 usage error.
int cmd_synth(const RunConfig& config);
int cmd_evolve(const RunConfig& config);
int cmd_verify(const RunConfig& config);
int cmd_scan(const RunConfig& config);

/// Full command-line entry point (subcommands synth/evolve/verify/scan).
int run_cli(int argc, const char* const* argv);

/// 17-significant-digit decimal rendering used for all emitted numbers.
std::string format_number(double x);

} // namespace qdrive
