#include "qdrive/cli_io.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdrive/errors.hpp"

namespace qdrive {

namespace {

using nlohmann::json;

std::string csv_join(const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) line += ',';
        line += cells[i];
    }
    line += '\n';
    return line;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw usage_error("cannot open output file: " + path);
    out << text;
}

std::vector<double> linspace(double t_max, int n) {
    std::vector<double> grid(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        grid[static_cast<std::size_t>(i)] =
            t_max * static_cast<double>(i) / static_cast<double>(n - 1);
    return grid;
}

double resolve_t_max(const RunConfig& config, const FamilyBundle& bundle) {
    return config.t_max > 0.0 ? config.t_max : 5.0 * bundle.characteristic_period;
}

cplx parse_complex(const json& j, const std::string& key) {
    const json& v = j.at(key);
    if (!v.is_object() || !v.contains("re") || !v.contains("im"))
        throw usage_error("'" + key + "' must be an object {\"re\": ..., \"im\": ...}");
    return {v.at("re").get<double>(), v.at("im").get<double>()};
}

void load_config_file(const std::string& path, RunConfig& cfg, std::optional<double>& kappa) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw usage_error(std::string("config parse error: ") + e.what());
    }
    try {
        if (j.contains("family")) cfg.family = family_kind_from_string(j.at("family"));
        if (j.contains("g")) cfg.params.g = parse_complex(j, "g");
        if (j.contains("delta")) cfg.params.delta = j.at("delta").get<double>();
        if (j.contains("Delta")) cfg.params.Delta = j.at("Delta").get<double>();
        if (j.contains("omega1")) cfg.params.Omega1 = j.at("omega1").get<double>();
        if (j.contains("kappa")) kappa = j.at("kappa").get<double>();
        if (j.contains("t_max")) cfg.t_max = j.at("t_max").get<double>();
        if (j.contains("points")) cfg.n_points = j.at("points").get<int>();
        if (j.contains("out")) cfg.out_path = j.at("out").get<std::string>();
        if (j.contains("max_p")) cfg.max_p = j.at("max_p").get<int>();
        if (j.contains("R0")) cfg.R0 = parse_complex(j, "R0");
        if (j.contains("R0_prime")) cfg.R0_prime = parse_complex(j, "R0_prime");
        if (j.contains("c1")) cfg.c1 = j.at("c1").get<double>();
        if (j.contains("c2")) cfg.c2 = j.at("c2").get<double>();
        if (j.contains("thresholds")) {
            const json& t = j.at("thresholds");
            if (t.contains("propagator")) cfg.thresholds.propagator = t.at("propagator");
            if (t.contains("unitarity")) cfg.thresholds.unitarity = t.at("unitarity");
            if (t.contains("ermakov")) cfg.thresholds.ermakov = t.at("ermakov");
            if (t.contains("schrodinger")) cfg.thresholds.schrodinger = t.at("schrodinger");
        }
        if (j.contains("scan")) {
            const json& s = j.at("scan");
            if (s.contains("kappa")) cfg.kappa_list = s.at("kappa").get<std::vector<double>>();
            if (s.contains("omega1")) cfg.omega1_list = s.at("omega1").get<std::vector<double>>();
            if (s.contains("delta")) cfg.delta_list = s.at("delta").get<std::vector<double>>();
            if (s.contains("g_re")) cfg.g_re_list = s.at("g_re").get<std::vector<double>>();
            if (s.contains("g_im")) cfg.g_im_list = s.at("g_im").get<std::vector<double>>();
        }
    } catch (const json::exception& e) {
        throw usage_error(std::string("config field error: ") + e.what());
    }
}

} // namespace

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

FamilyKind family_kind_from_string(const std::string& name) {
    if (name == "circular") return FamilyKind::circular;
    if (name == "decaying") return FamilyKind::decaying;
    if (name == "oscillating") return FamilyKind::oscillating;
    if (name == "custom-pinney") return FamilyKind::custom_pinney;
    throw usage_error("unknown family: " + name);
}

std::string to_string(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::circular: return "circular";
        case FamilyKind::decaying: return "decaying";
        case FamilyKind::oscillating: return "oscillating";
        case FamilyKind::custom_pinney: return "custom-pinney";
    }
    return "?";
}

void RunConfig::validate() const {
    if (n_points < 2) throw usage_error("points must be at least 2");
    if (t_max < 0.0) throw usage_error("t-max must be positive");
    if (!(thresholds.propagator > 0.0) || !(thresholds.unitarity > 0.0) ||
        !(thresholds.ermakov > 0.0) || !(thresholds.schrodinger > 0.0))
        throw usage_error("verification tolerances must be positive");
    if (max_p < 1) throw usage_error("max-p must be at least 1");
    if (family == FamilyKind::oscillating && !params.Omega1 && kappa_list.empty() &&
        omega1_list.empty())
        throw usage_error("oscillating family requires --omega1 or --kappa");
    if (family == FamilyKind::custom_pinney && (!params.Omega1 || !R0 || !R0_prime))
        throw usage_error("custom-pinney requires --omega1, R0 and R0_prime");
}

FamilyBundle make_bundle(const RunConfig& config) {
    config.validate();
    FamilyBundle bundle;
    switch (config.family) {
        case FamilyKind::circular: bundle = circular_family(config.params); break;
        case FamilyKind::decaying: bundle = decaying_family(config.params); break;
        case FamilyKind::oscillating: bundle = oscillating_family(config.params); break;
        case FamilyKind::custom_pinney:
            bundle = custom_pinney_family(*config.params.Omega1, *config.R0, *config.R0_prime,
                                          config.params.Delta, config.c1, config.c2);
            break;
    }
    if (config.corrupt_alpha != 1.0) {
        const CplxFn base = bundle.alpha;
        const double k = config.corrupt_alpha;
        bundle.alpha = [base, k](double t) { return k * base(t); };
    }
    return bundle;
}

int cmd_synth(const RunConfig& config) {
    const FamilyBundle bundle = make_bundle(config);
    const double t_max = resolve_t_max(config, bundle);
    std::string text = "t,re_R,im_R,abs_R,re_V,im_V,re_alpha,im_alpha,re_delta_f,im_delta_f,"
                       "re_beta,im_beta\n";
    for (double t : linspace(t_max, config.n_points)) {
        const cplx r = bundle.R(t);
        const cplx v = bundle.V(t);
        const FactorizationTriple trip = bundle.triple(t);
        text += csv_join({format_number(t), format_number(r.real()), format_number(r.imag()),
                          format_number(std::abs(r)), format_number(v.real()),
                          format_number(v.imag()), format_number(trip.alpha.real()),
                          format_number(trip.alpha.imag()), format_number(trip.delta_f.real()),
                          format_number(trip.delta_f.imag()), format_number(trip.beta.real()),
                          format_number(trip.beta.imag())});
    }
    write_text_file(config.out_path.empty() ? "synth.csv" : config.out_path, text);
    return 0;
}

int cmd_evolve(const RunConfig& config) {
    const FamilyBundle bundle = make_bundle(config);
    const double t_max = resolve_t_max(config, bundle);
    std::string text = "t,re_R,im_R,abs_R,re_V,im_V,cp2,cq2,P,unitarity_defect\n";
    for (double t : linspace(t_max, config.n_points)) {
        const cplx r = bundle.R(t);
        const cplx v = bundle.V(t);
        const QubitState psi = bundle.state(t);
        const double cp2 = std::norm(psi.cp);
        const double cq2 = std::norm(psi.cq);
        const double defect = unitarity_defect(bundle.propagator(t));
        text += csv_join({format_number(t), format_number(r.real()), format_number(r.imag()),
                          format_number(std::abs(r)), format_number(v.real()),
                          format_number(v.imag()), format_number(cp2), format_number(cq2),
                          format_number(cp2 - cq2), format_number(defect)});
    }
    write_text_file(config.out_path.empty() ? "evolve.csv" : config.out_path, text);
    return 0;
}

int cmd_verify(const RunConfig& config) {
    const FamilyBundle bundle = make_bundle(config);
    IntegrationConfig icfg;
    icfg.t_max = resolve_t_max(config, bundle);
    icfg.n_samples = config.n_points;
    const VerificationReport report = verify_family(bundle, icfg, config.thresholds);

    std::ostringstream os;
    os << "family: " << bundle.name << "\n";
    os << "grid: " << report.grid.size() << " samples on [0, " << format_number(icfg.t_max)
       << "]\n";
    os << "max_propagator_error: " << format_number(report.max_propagator_error)
       << " (threshold " << format_number(config.thresholds.propagator) << ")\n";
    os << "max_unitarity_defect: " << format_number(report.max_unitarity_defect)
       << " (threshold " << format_number(config.thresholds.unitarity) << ")\n";
    os << "max_ermakov_residual: " << format_number(report.max_ermakov_residual)
       << " (threshold " << format_number(config.thresholds.ermakov) << ")\n";
    os << "max_schrodinger_residual: " << format_number(report.max_schrodinger_residual)
       << " (threshold " << format_number(config.thresholds.schrodinger) << ")\n";
    os << "pass: " << (report.pass ? "true" : "false") << "\n";
    std::cout << os.str();
    if (!config.out_path.empty()) write_text_file(config.out_path, os.str());
    return report.pass ? 0 : 1;
}

int cmd_scan(const RunConfig& config) {
    config.validate();
    std::vector<double> g_res = config.g_re_list.empty()
                                    ? std::vector<double>{config.params.g.real()}
                                    : config.g_re_list;
    std::vector<double> g_ims = config.g_im_list.empty()
                                    ? std::vector<double>{config.params.g.imag()}
                                    : config.g_im_list;
    std::vector<double> deltas = config.delta_list.empty()
                                     ? std::vector<double>{config.params.delta}
                                     : config.delta_list;
    // One frequency axis: explicit Omega1 values, kappa values, or the scalar config.
    std::vector<double> kappas = config.kappa_list;
    std::vector<double> omega1s = config.omega1_list;
    std::size_t freq_cells = std::max<std::size_t>(1, kappas.size() + omega1s.size());
    const std::size_t cells = g_res.size() * g_ims.size() * deltas.size() * freq_cells;
    if (cells > 10000) throw usage_error("scan grid exceeds 10^4 cells");

    std::string text = "omega0,kappa,p,P_min,P_period\n";
    auto emit_row = [&](const FamilyParams& params) {
        FamilyBundle bundle;
        RunConfig cell = config;
        cell.params = params;
        bundle = make_bundle(cell);
        const double O0 = bundle.ermakov.Omega0;
        std::string kappa_cell = "-";
        std::string period_cell = "inf";
        double p_min;
        double tau = bundle.characteristic_period;
        if (config.family == FamilyKind::decaying) {
            p_min = (0.25 * params.delta * params.delta - std::norm(params.g)) / (O0 * O0);
        } else if (config.family == FamilyKind::custom_pinney) {
            // general initial data shifts the minima; locate them numerically
            p_min = 1.0;
            for (int k = 0; k <= 4096; ++k)
                p_min = std::min(p_min, bundle.population(tau * k / 4096.0));
            kappa_cell = format_number(O0 / *cell.params.Omega1);
            period_cell = format_number(tau);
        } else {
            const double d2 = params.delta * params.delta;
            const double g4 = 4.0 * std::norm(params.g);
            p_min = (d2 - g4) / (d2 + g4);
            if (config.family == FamilyKind::oscillating)
                kappa_cell = format_number(params.kappa());
            else
                kappa_cell = format_number(1.0);
            // P has period pi/Omega1 (oscillating) or pi/Omega0 (circular);
            // the same value is the mu-period fed to the closure test.
            if (config.family == FamilyKind::circular) tau = std::numbers::pi / O0;
            period_cell = format_number(tau);
        }
        std::string p_cell = "none";
        if (config.family != FamilyKind::decaying) {
            const auto spec = check_periodicity(bundle.ermakov, tau, config.max_p);
            if (spec) p_cell = std::to_string(spec->p);
        }
        text += csv_join({format_number(O0), kappa_cell, p_cell, format_number(p_min),
                          period_cell});
    };

    for (double gre : g_res)
        for (double gim : g_ims)
            for (double d : deltas) {
                FamilyParams params = config.params;
                params.g = cplx(gre, gim);
                params.delta = d;
                if (config.family != FamilyKind::oscillating) {
                    emit_row(params);
                    continue;
                }
                if (kappas.empty() && omega1s.empty()) {
                    emit_row(params);
                    continue;
                }
                for (double k : kappas) {
                    params.Omega1 = params.Omega0() / k;
                    emit_row(params);
                }
                for (double o1 : omega1s) {
                    params.Omega1 = o1;
                    emit_row(params);
                }
            }
    write_text_file(config.out_path.empty() ? "scan.csv" : config.out_path, text);
    return 0;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"exactly solvable two-level driving fields"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    std::optional<std::string> family_name;
    std::optional<double> g_re, g_im, delta, Delta, omega1, kappa, t_max;
    std::optional<int> points, max_p;
    std::optional<std::string> out;
    std::optional<double> tol_prop, tol_unit, tol_erm, tol_schro, corrupt_alpha;
    std::optional<double> r0_re, r0_im, r0p_re, r0p_im, c1, c2;
    std::vector<double> kappa_list, omega1_list, delta_list, g_re_list, g_im_list;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file (flags override)");
        sub->add_option("--family", family_name, "circular|decaying|oscillating|custom-pinney");
        sub->add_option("--g-re", g_re, "Re g");
        sub->add_option("--g-im", g_im, "Im g");
        sub->add_option("--delta", delta, "detuning");
        sub->add_option("--Delta", Delta, "level splitting");
        sub->add_option("--omega1", omega1, "prescribed oscillator frequency");
        sub->add_option("--kappa", kappa, "Omega0/Omega1 (alternative to --omega1)");
        sub->add_option("--t-max", t_max, "grid end (default: 5 characteristic periods)");
        sub->add_option("--points", points, "grid points (>= 2)");
        sub->add_option("--out", out, "output file");
        sub->add_option("--max-p", max_p, "periodicity search bound");
        sub->add_option("--tol-propagator", tol_prop, "propagator error threshold");
        sub->add_option("--tol-unitarity", tol_unit, "unitarity defect threshold");
        sub->add_option("--tol-ermakov", tol_erm, "Ermakov residual threshold");
        sub->add_option("--tol-schrodinger", tol_schro, "Schrodinger residual threshold");
        sub->add_option("--r0-re", r0_re, "Re R(0) (custom-pinney)");
        sub->add_option("--r0-im", r0_im, "Im R(0) (custom-pinney)");
        sub->add_option("--r0p-re", r0p_re, "Re R'(0) (custom-pinney)");
        sub->add_option("--r0p-im", r0p_im, "Im R'(0) (custom-pinney)");
        sub->add_option("--c1", c1, "Pinney constant c1 (custom-pinney)");
        sub->add_option("--c2", c2, "Pinney constant c2 (custom-pinney)");
        sub->add_option("--corrupt-alpha", corrupt_alpha,
                        "testing aid: scale the closed-form alpha")
            ->group("");
    };

    CLI::App* synth = app.add_subcommand("synth", "emit field + factorization CSV");
    CLI::App* evolve = app.add_subcommand("evolve", "emit state + population inversion CSV");
    CLI::App* verify = app.add_subcommand("verify", "oracle comparison report");
    CLI::App* scan = app.add_subcommand("scan", "parameter sweep summary table");
    for (CLI::App* sub : {synth, evolve, verify, scan}) add_common(sub);
    scan->add_option("--kappa-list", kappa_list, "kappa sweep values")->delimiter(',');
    scan->add_option("--omega1-list", omega1_list, "Omega1 sweep values")->delimiter(',');
    scan->add_option("--delta-list", delta_list, "delta sweep values")->delimiter(',');
    scan->add_option("--g-re-list", g_re_list, "Re g sweep values")->delimiter(',');
    scan->add_option("--g-im-list", g_im_list, "Im g sweep values")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        std::optional<double> kappa_from_file;
        if (!config_path.empty()) load_config_file(config_path, cfg, kappa_from_file);
        if (family_name) cfg.family = family_kind_from_string(*family_name);
        if (g_re) cfg.params.g = cplx(*g_re, cfg.params.g.imag());
        if (g_im) cfg.params.g = cplx(cfg.params.g.real(), *g_im);
        if (delta) cfg.params.delta = *delta;
        if (Delta) cfg.params.Delta = *Delta;
        if (omega1) cfg.params.Omega1 = *omega1;
        if (kappa) {
            if (!(*kappa > 0.0)) throw usage_error("kappa must be positive");
            cfg.params.Omega1 = cfg.params.Omega0() / *kappa;
        } else if (!omega1 && kappa_from_file) {
            if (!(*kappa_from_file > 0.0)) throw usage_error("kappa must be positive");
            cfg.params.Omega1 = cfg.params.Omega0() / *kappa_from_file;
        }
        if (t_max) cfg.t_max = *t_max;
        if (points) cfg.n_points = *points;
        if (out) cfg.out_path = *out;
        if (max_p) cfg.max_p = *max_p;
        if (tol_prop) cfg.thresholds.propagator = *tol_prop;
        if (tol_unit) cfg.thresholds.unitarity = *tol_unit;
        if (tol_erm) cfg.thresholds.ermakov = *tol_erm;
        if (tol_schro) cfg.thresholds.schrodinger = *tol_schro;
        if (corrupt_alpha) cfg.corrupt_alpha = *corrupt_alpha;
        if (r0_re || r0_im) cfg.R0 = cplx(r0_re.value_or(0.0), r0_im.value_or(0.0));
        if (r0p_re || r0p_im) cfg.R0_prime = cplx(r0p_re.value_or(0.0), r0p_im.value_or(0.0));
        if (c1) cfg.c1 = *c1;
        if (c2) cfg.c2 = *c2;
        if (!kappa_list.empty()) cfg.kappa_list = kappa_list;
        if (!omega1_list.empty()) cfg.omega1_list = omega1_list;
        if (!delta_list.empty()) cfg.delta_list = delta_list;
        if (!g_re_list.empty()) cfg.g_re_list = g_re_list;
        if (!g_im_list.empty()) cfg.g_im_list = g_im_list;

        if (cfg.out_path.empty()) {
            if (synth->parsed()) cfg.out_path = "synth.csv";
            if (evolve->parsed()) cfg.out_path = "evolve.csv";
            if (scan->parsed()) cfg.out_path = "scan.csv";
        }
        cfg.validate();
        if (synth->parsed()) return cmd_synth(cfg);
        if (evolve->parsed()) return cmd_evolve(cfg);
        if (verify->parsed()) return cmd_verify(cfg);
        if (scan->parsed()) return cmd_scan(cfg);
        throw usage_error("no subcommand given");
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace qdrive
