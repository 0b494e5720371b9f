// bsnoise command-line front end: spatial noise scans, oracle validation
// runs, and feedback sweeps, emitting CSV/JSON artifacts.
//
// Exit codes: 0 success, 1 validation failure, 2 usage error, 3 bad config,
// 4 truncation guard.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bsnoise/analytic.hpp"
#include "bsnoise/config.hpp"
#include "bsnoise/feedback.hpp"
#include "bsnoise/fock.hpp"
#include "bsnoise/mc.hpp"
#include "bsnoise/mode_algebra.hpp"
#include "bsnoise/validation.hpp"

namespace {

using namespace bsnoise;

constexpr int kExitPass = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitTruncation = 4;

struct ConfigFlags {
    std::string config_path;
    std::optional<double> T, k, omega, z1, z2, Z1, Z2;
    std::optional<double> alpha_re, alpha_im, E_unit, v_b2, v_1sq, v_2sq;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
    cmd->add_option("--config", flags.config_path,
                    "JSON config file (explicit flags override it)");
    cmd->add_option("--T", flags.T, "beam-splitter transmittance");
    cmd->add_option("--k", flags.k, "wavenumber");
    cmd->add_option("--omega", flags.omega, "angular frequency");
    cmd->add_option("--z1", flags.z1, "probe distance at port a1");
    cmd->add_option("--z2", flags.z2, "probe distance at port a2");
    cmd->add_option("--Z1", flags.Z1, "carrier path length to port a1");
    cmd->add_option("--Z2", flags.Z2, "carrier path length to port a2");
    cmd->add_option("--alpha_re", flags.alpha_re, "coherent amplitude, real");
    cmd->add_option("--alpha_im", flags.alpha_im, "coherent amplitude, imag");
    cmd->add_option("--E_unit", flags.E_unit, "single-photon field scale");
    cmd->add_option("--v_b2", flags.v_b2, "vacuum weight of mode b");
    cmd->add_option("--v_1sq", flags.v_1sq, "vacuum weight of port a1");
    cmd->add_option("--v_2sq", flags.v_2sq, "vacuum weight of port a2");
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

OpticalConfig resolve_config(const ConfigFlags& flags) {
    OpticalConfig cfg;
    if (!flags.config_path.empty()) {
        cfg = config_from_json_text(slurp(flags.config_path));
    }
    if (flags.T) cfg.transmittance = *flags.T;
    if (flags.k) cfg.wavenumber = *flags.k;
    if (flags.omega) cfg.angular_frequency = *flags.omega;
    if (flags.z1) cfg.z1 = *flags.z1;
    if (flags.z2) cfg.z2 = *flags.z2;
    if (flags.Z1) cfg.Z1 = *flags.Z1;
    if (flags.Z2) cfg.Z2 = *flags.Z2;
    if (flags.alpha_re) cfg.alpha.real(*flags.alpha_re);
    if (flags.alpha_im) cfg.alpha.imag(*flags.alpha_im);
    if (flags.E_unit) cfg.field_unit = *flags.E_unit;
    if (flags.v_b2) cfg.weights.b = *flags.v_b2;
    if (flags.v_1sq) cfg.weights.a1 = *flags.v_1sq;
    if (flags.v_2sq) cfg.weights.a2 = *flags.v_2sq;
    return validate(cfg);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << content;
}

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// --- scan --------------------------------------------------------------------

struct ScanArgs {
    ConfigFlags cfg;
    std::string port;
    double z_min = 0.0;
    double z_max = 0.0;
    std::size_t steps = 101;
    std::string out = "scan.csv";
    std::string json_out;
};

int run_scan(const ScanArgs& args) {
    const OpticalConfig cfg = resolve_config(args.cfg);
    const analytic::Port port =
        args.port == "a1" ? analytic::Port::a1 : analytic::Port::a2;

    const analytic::ScanResult scan = analytic::scan_variance(
        cfg, port, analytic::uniform_grid(args.z_min, args.z_max, args.steps));
    write_file(args.out, analytic::scan_to_csv(scan));
    if (!args.json_out.empty()) {
        write_file(args.json_out, analytic::scan_to_json(scan));
    }

    const analytic::ScanResult extrema =
        analytic::find_extrema(cfg, args.z_min, args.z_max, port);
    double lo = scan.rows.front().report.total;
    double hi = lo;
    for (const analytic::ScanRow& r : scan.rows) {
        lo = std::min(lo, r.report.total);
        hi = std::max(hi, r.report.total);
    }
    const double sql = sql_baseline(cfg);

    std::printf("scan port %s: %zu points over [%g, %g]\n",
                analytic::port_name(port), scan.rows.size(), args.z_min,
                args.z_max);
    std::printf("nodes:");
    for (double z : extrema.nodes) std::printf(" %.12g", z);
    std::printf("\nantinodes:");
    for (double z : extrema.antinodes) std::printf(" %.12g", z);
    std::printf("\nmin total = %s, max total = %s, sql = %s\n", fmt17(lo).c_str(),
                fmt17(hi).c_str(), fmt17(sql).c_str());
    std::printf("sub-SQL at minimum: %s\n", lo < sql ? "yes" : "no");
    std::printf("wrote %s\n", args.out.c_str());
    if (!args.json_out.empty()) std::printf("wrote %s\n", args.json_out.c_str());
    return kExitPass;
}

// --- scan-photocurrent ---------------------------------------------------------

int run_scan_photocurrent(const ScanArgs& args) {
    const OpticalConfig cfg = resolve_config(args.cfg);
    const std::vector<double> grid =
        analytic::uniform_grid(args.z_min, args.z_max, args.steps);

    // open-port shot-noise benchmark at standard (unit) vacuum weights
    const double open = analytic::photocurrent_variance_open(
        std::norm(cfg.alpha), cfg.transmittance, OpenPortWeights{});

    std::string csv = "z,total,carrier,standing,open_port,sub_shot\n";
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (double z : grid) {
        OpticalConfig probe = cfg;
        probe.z1 = z;
        const analytic::PhotocurrentReport rep =
            analytic::photocurrent_variance_mirror(probe);
        csv += fmt17(z) + ',' + fmt17(rep.total) + ',' + fmt17(rep.carrier) +
               ',' + fmt17(rep.standing) + ',' + fmt17(open) + ',' +
               (rep.total < open ? "true" : "false") + '\n';
        lo = first ? rep.total : std::min(lo, rep.total);
        hi = first ? rep.total : std::max(hi, rep.total);
        first = false;
    }
    write_file(args.out, csv);
    std::printf("photocurrent scan: %zu points over [%g, %g]\n", grid.size(),
                args.z_min, args.z_max);
    std::printf("min total = %s, max total = %s, open-port = %s\n",
                fmt17(lo).c_str(), fmt17(hi).c_str(), fmt17(open).c_str());
    std::printf("sub-shot at minimum: %s\n", lo < open ? "yes" : "no");
    std::printf("wrote %s\n", args.out.c_str());
    return kExitPass;
}

// --- mc-validate ----------------------------------------------------------------

struct McArgs {
    std::size_t n = 1'000'000;
    std::uint64_t seed = 42;
    bool decorrelate = false;
    bool gaussian = false;
    std::string csv_out;
};

int run_mc_validate(const McArgs& args) {
    validation::McParams params;
    params.n_samples = args.n;
    params.seed = args.seed;
    params.decorrelate_phases = args.decorrelate;
    params.amplitude_model = args.gaussian ? mc::AmplitudeModel::gaussian
                                           : mc::AmplitudeModel::fixed;

    const validation::SuiteReport grid = validation::mc_convergence_grid(params);
    const validation::SuiteReport fit = validation::mc_modulation_check(params);
    std::fputs(validation::suite_to_text(grid).c_str(), stdout);
    std::fputs(validation::suite_to_text(fit).c_str(), stdout);

    if (!args.csv_out.empty()) {
        OpticalConfig cfg;
        cfg.transmittance = 0.5;
        cfg.alpha = 2.0;
        mc::EnsembleSpec spec;
        spec.n_samples = params.n_samples;
        spec.seed = params.seed;
        spec.amplitude_model = params.amplitude_model;
        spec.decorrelate_phases = params.decorrelate_phases;
        std::vector<double> grid_z;
        for (int i = 0; i < 8; ++i) {
            grid_z.push_back(i * 3.14159265358979323846 / 8.0);
        }
        const auto points =
            mc::scan_mc(cfg, spec, grid_z, analytic::Port::a1, 0.4);
        write_file(args.csv_out, mc::scan_mc_to_csv(points));
        write_file(args.csv_out + ".json",
                   mc::scan_mc_sidecar_json(spec, analytic::Port::a1));
        std::printf("wrote %s (+ .json sidecar)\n", args.csv_out.c_str());
    }
    return (grid.pass() && fit.pass()) ? kExitPass : kExitValidationFailure;
}

// --- fock-validate ----------------------------------------------------------------

struct FockArgs {
    int dim = 40;
    std::vector<double> alphas{0.5, 1.0, 2.0};
    std::string histogram_out;
};

int run_fock_validate(const FockArgs& args) {
    for (double a : args.alphas) {
        if (!(a >= 0.0 && a <= 2.0)) {
            throw fock::TruncationError(
                "oracle runs are guarded to |alpha| <= 2; got " +
                std::to_string(a) +
                " (raise --dim and rebuild the guard before going higher)");
        }
    }
    const validation::SuiteReport fields =
        validation::fock_field_agreement(args.dim, args.alphas);
    const validation::SuiteReport slopes =
        validation::fock_photocurrent_slopes(args.dim);
    std::fputs(validation::suite_to_text(fields).c_str(), stdout);
    std::fputs(validation::suite_to_text(slopes).c_str(), stdout);

    bool pass = fields.pass() && slopes.pass();
    // convergence run compares dim against dim+10 at |alpha| up to 2; only
    // meaningful when both fit under the deficit guard and the amplitude cap
    if (fock::coherent_truncation_deficit(4.0, args.dim) <=
            fock::kDeficitGuard &&
        args.dim + 10 <= 100) {
        const validation::SuiteReport conv =
            validation::fock_convergence(args.dim);
        std::fputs(validation::suite_to_text(conv).c_str(), stdout);
        pass = pass && conv.pass();
    } else {
        std::printf("(skipping convergence run: dim %d too small for the "
                    "|alpha| <= 2 sweep)\n", args.dim);
    }

    if (!args.histogram_out.empty()) {
        fock::TruncationSpec spec;
        spec.dim = args.dim;
        spec.modes = {modal::mode("b"), modal::mode("a1"), modal::mode("a2")};
        const fock::StateVector psi = fock::build_coherent(
            {{modal::mode("b"), args.alphas.empty() ? 1.0 : args.alphas.back()}},
            spec);
        write_file(args.histogram_out, fock::occupation_histograms_csv(psi));
        std::printf("wrote %s\n", args.histogram_out.c_str());
    }
    return pass ? kExitPass : kExitValidationFailure;
}

// --- feedback ----------------------------------------------------------------------

struct FeedbackArgs {
    ConfigFlags cfg;
    std::vector<double> gains{0.0, 1.0, 10.0, 100.0, 1e4, 1e6};
    double probe_z1 = 0.0;
    double out_z2 = 0.0;
    double eta = 1.0;
    std::string out = "feedback.csv";
    std::string json_out;
};

int run_feedback(const FeedbackArgs& args) {
    const OpticalConfig cfg = resolve_config(args.cfg);
    feedback::FeedbackSpec spec;
    spec.probe_z1 = args.probe_z1;
    spec.out_probe_z2 = args.out_z2;
    spec.detection_efficiency = args.eta;

    const auto sweep = feedback::gain_sweep(cfg, spec, args.gains);
    write_file(args.out, feedback::sweep_to_csv(sweep));
    if (!args.json_out.empty()) {
        write_file(args.json_out, feedback::sweep_to_json(sweep));
    }
    std::printf("gain sweep: %zu points, probe z1=%g, out z2=%g, eta=%g\n",
                sweep.size(), args.probe_z1, args.out_z2, args.eta);
    std::printf("out-of-loop variance: %s at g=%g -> %s at g=%g (sql %s)\n",
                fmt17(sweep.front().out_a2).c_str(), sweep.front().gain,
                fmt17(sweep.back().out_a2).c_str(), sweep.back().gain,
                fmt17(sweep.back().sql).c_str());
    std::printf("wrote %s\n", args.out.c_str());
    return kExitPass;
}

// --- report -------------------------------------------------------------------------

struct ReportArgs {
    std::string out = "report.json";
    std::size_t n = 200'000;
    std::uint64_t seed = 42;
    int dim = 40;
};

int run_report(const ReportArgs& args) {
    std::vector<validation::SuiteReport> suites;
    suites.push_back(validation::analytic_identity_suite(1000, args.seed));
    suites.push_back(validation::modal_equivalence_suite(1000, args.seed));
    suites.push_back(validation::node_profile_suite());
    suites.push_back(validation::photocurrent_contrast_suite());
    suites.push_back(validation::feedback_suite());
    suites.push_back(
        validation::fock_field_agreement(args.dim, {0.5, 1.0, 2.0}));
    suites.push_back(validation::fock_photocurrent_slopes(args.dim));
    suites.push_back(validation::fock_convergence(30));

    validation::McParams params;
    params.n_samples = args.n;
    params.seed = args.seed;
    suites.push_back(validation::mc_convergence_grid(params));
    suites.push_back(validation::mc_modulation_check(params));
    suites.push_back(validation::mc_negative_control(params));

    bool all = true;
    nlohmann::json doc;
    doc["suites"] = nlohmann::json::array();
    for (const validation::SuiteReport& s : suites) {
        std::fputs(validation::suite_to_text(s).c_str(), stdout);
        doc["suites"].push_back(
            nlohmann::json::parse(validation::suite_to_json(s)));
        all = all && s.pass();
    }
    doc["pass"] = all;
    doc["seed"] = args.seed;
    doc["n_samples"] = args.n;
    doc["dim"] = args.dim;
    write_file(args.out, doc.dump(2));
    std::printf("overall: %s; wrote %s\n", all ? "PASS" : "FAIL",
                args.out.c_str());
    return all ? kExitPass : kExitValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum-noise calculator for a mirror-terminated beam "
                 "splitter: analytic scans, ensemble and number-basis "
                 "oracles, feedback model"};
    app.require_subcommand(1);

    ScanArgs scan_args;
    CLI::App* scan = app.add_subcommand(
        "scan", "Spatial scan of the output-port field variance");
    scan->add_option("--port", scan_args.port, "output port")
        ->required()
        ->check(CLI::IsMember({"a1", "a2"}));
    scan->add_option("--z-min", scan_args.z_min, "scan start")->required();
    scan->add_option("--z-max", scan_args.z_max, "scan end")->required();
    scan->add_option("--steps", scan_args.steps, "grid points")
        ->check(CLI::Range(std::size_t{1}, std::size_t{10'000'000}));
    scan->add_option("--out", scan_args.out, "CSV output path");
    scan->add_option("--json", scan_args.json_out, "optional JSON output path");
    add_config_flags(scan, scan_args.cfg);

    ScanArgs pc_args;
    CLI::App* scan_pc = app.add_subcommand(
        "scan-photocurrent",
        "Spatial scan of the mirror-port photocurrent variance");
    scan_pc->add_option("--z-min", pc_args.z_min, "scan start")->required();
    scan_pc->add_option("--z-max", pc_args.z_max, "scan end")->required();
    scan_pc->add_option("--steps", pc_args.steps, "grid points")
        ->check(CLI::Range(std::size_t{1}, std::size_t{10'000'000}));
    scan_pc->add_option("--out", pc_args.out, "CSV output path");
    add_config_flags(scan_pc, pc_args.cfg);

    McArgs mc_args;
    CLI::App* mcv = app.add_subcommand(
        "mc-validate", "Ensemble sampler against the closed forms");
    mcv->add_option("--n", mc_args.n, "samples per cell")
        ->check(CLI::Range(std::size_t{10'000}, std::size_t{1'000'000'000}));
    mcv->add_option("--seed", mc_args.seed, "master seed");
    mcv->add_flag("--decorrelate-phases", mc_args.decorrelate,
                  "test hook: break the shared mirror-side phase draw");
    mcv->add_flag("--gaussian-amplitudes", mc_args.gaussian,
                  "half-normal amplitude model");
    mcv->add_option("--csv", mc_args.csv_out,
                    "write the modulation scan points to CSV");

    FockArgs fock_args;
    CLI::App* fkv = app.add_subcommand(
        "fock-validate", "Number-basis oracle against the moment rules");
    fkv->add_option("--dim", fock_args.dim, "per-mode Fock dimension")
        ->check(CLI::Range(2, 100));
    fkv->add_option("--alpha", fock_args.alphas, "coherent amplitudes to test");
    fkv->add_option("--histogram", fock_args.histogram_out,
                    "dump occupation histograms to CSV");

    FeedbackArgs fb_args;
    CLI::App* fb = app.add_subcommand(
        "feedback", "Steady-state loop model gain sweep");
    fb->add_option("--gains", fb_args.gains, "gain grid");
    fb->add_option("--probe-z1", fb_args.probe_z1, "in-loop probe position");
    fb->add_option("--out-z2", fb_args.out_z2, "out-of-loop probe position");
    fb->add_option("--eta", fb_args.eta, "detection efficiency in (0,1]");
    fb->add_option("--out", fb_args.out, "CSV output path");
    fb->add_option("--json", fb_args.json_out, "optional JSON output path");
    add_config_flags(fb, fb_args.cfg);

    ReportArgs rep_args;
    CLI::App* rep = app.add_subcommand(
        "report", "Run every suite with fixed seeds; aggregate JSON verdict");
    rep->add_option("--out", rep_args.out, "JSON output path");
    rep->add_option("--n", rep_args.n, "ensemble samples per cell")
        ->check(CLI::Range(std::size_t{10'000}, std::size_t{1'000'000'000}));
    rep->add_option("--seed", rep_args.seed, "master seed");
    rep->add_option("--dim", rep_args.dim, "oracle Fock dimension")
        ->check(CLI::Range(2, 100));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (scan->parsed()) return run_scan(scan_args);
        if (scan_pc->parsed()) return run_scan_photocurrent(pc_args);
        if (mcv->parsed()) return run_mc_validate(mc_args);
        if (fkv->parsed()) return run_fock_validate(fock_args);
        if (fb->parsed()) return run_feedback(fb_args);
        if (rep->parsed()) return run_report(rep_args);
    } catch (const fock::TruncationError& e) {
        std::fprintf(stderr, "truncation guard: %s\n", e.what());
        return kExitTruncation;
    } catch (const fock::DimensionCapError& e) {
        std::fprintf(stderr, "truncation guard: %s\n", e.what());
        return kExitTruncation;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const EmptyRangeError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidationFailure;
    }
    return kExitUsage;
}
