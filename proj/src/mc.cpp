#include "bsnoise/mc.hpp"

#include <cmath>
#include <cstdio>
#include <future>
#include <random>

#include <json.hpp>

namespace bsnoise::mc {

namespace {

constexpr std::size_t kChunk = 1u << 16;
constexpr double kTwoPi = 6.283185307179586476925286766559;

std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Engine of one sample chunk; a function of (seed, chunk) only, so the
/// stream is independent of scheduling.
std::mt19937_64 chunk_engine(std::uint64_t seed, std::uint64_t chunk) {
    std::uint64_t state = seed ^ (0xD1B54A32D192ED03ULL * (chunk + 1));
    return std::mt19937_64(splitmix64(state));
}

struct PowerSums {
    long double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    std::size_t n = 0;

    void add(double x) {
        const long double v = x;
        const long double v2 = v * v;
        s1 += v;
        s2 += v2;
        s3 += v2 * v;
        s4 += v2 * v2;
        ++n;
    }
};

EnsembleStats finalize(const PowerSums& acc) {
    EnsembleStats out;
    out.n = acc.n;
    if (acc.n == 0) return out;
    const long double n = static_cast<long double>(acc.n);
    const long double mean = acc.s1 / n;
    out.mean = static_cast<double>(mean);
    if (acc.n < 2) return out;

    const long double m2 = acc.s2 / n - mean * mean;
    const long double m4 = acc.s4 / n - 4.0L * mean * (acc.s3 / n) +
                           6.0L * mean * mean * (acc.s2 / n) -
                           3.0L * mean * mean * mean * mean;
    const long double var = m2 * n / (n - 1.0L);
    out.variance = static_cast<double>(var);
    const long double var_of_var =
        (m4 - (n - 3.0L) / (n - 1.0L) * m2 * m2) / n;
    out.variance_stderr = var_of_var > 0.0L
                              ? static_cast<double>(std::sqrt(
                                    static_cast<double>(var_of_var)))
                              : 0.0;
    return out;
}

template <typename DrawFn>
EnsembleStats run_ensemble(const EnsembleSpec& spec, DrawFn&& draw) {
    if (spec.n_samples < 1) {
        throw ConfigError("ensemble needs at least one sample");
    }
    PowerSums acc;
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t chunks = (spec.n_samples + kChunk - 1) / kChunk;
    for (std::size_t c = 0; c < chunks; ++c) {
        std::mt19937_64 eng = chunk_engine(spec.seed, c);
        const std::size_t count =
            std::min(kChunk, spec.n_samples - c * kChunk);
        for (std::size_t i = 0; i < count; ++i) {
            acc.add(draw(eng, phase, gauss));
        }
    }
    return finalize(acc);
}

/// One vacuum sinusoid amplitude: fixed sqrt-of-weight scale, or half-normal
/// with the same mean square.
template <typename Engine, typename Gauss>
double draw_amplitude(const EnsembleSpec& spec, double base, Engine& eng,
                      Gauss& gauss) {
    if (spec.amplitude_model == AmplitudeModel::fixed) return base;
    return std::abs(gauss(eng)) * base;
}

}  // namespace

EnsembleStats sample_free_field(const OpticalConfig& cfg,
                                const EnsembleSpec& spec, double t, double z) {
    const double fwd = cfg.angular_frequency * t - cfg.wavenumber * z;
    const double bwd = cfg.angular_frequency * t + cfg.wavenumber * z;
    const double carrier =
        cfg.field_unit * std::abs(cfg.alpha) *
        std::sin(fwd + std::arg(cfg.alpha));
    const double amp_base = cfg.field_unit * std::sqrt(cfg.weights.b);

    return run_ensemble(spec, [&](auto& eng, auto& phase, auto& gauss) {
        const double phi_f = phase(eng);
        const double a_f = draw_amplitude(spec, amp_base, eng, gauss);
        const double phi_b = phase(eng);
        const double a_b = draw_amplitude(spec, amp_base, eng, gauss);
        return carrier + a_f * std::sin(fwd + phi_f) +
               a_b * std::sin(bwd + phi_b);
    });
}

EnsembleStats sample_field_e1(const OpticalConfig& cfg,
                              const EnsembleSpec& spec, double t) {
    const double T = cfg.transmittance;
    const double R = cfg.reflectance();
    const double rt = std::sqrt(T);
    const double rrt = std::sqrt(R * T);
    const double wt = cfg.angular_frequency * t;
    const double carrier_phase = wt - cfg.wavenumber * cfg.Z1;
    const double bwd = wt + cfg.wavenumber * cfg.z1;
    const double fwd = wt - cfg.wavenumber * cfg.z1;
    const double carrier = cfg.field_unit * std::abs(cfg.alpha) *
                           std::sin(carrier_phase + std::arg(cfg.alpha));
    const double amp_b = cfg.field_unit * std::sqrt(cfg.weights.b);
    const double amp_1 = cfg.field_unit * std::sqrt(cfg.weights.a1);
    const double amp_2 = cfg.field_unit * std::sqrt(cfg.weights.a2);

    return run_ensemble(spec, [&](auto& eng, auto& phase, auto& gauss) {
        const double phi_b = phase(eng);
        const double a_b = draw_amplitude(spec, amp_b, eng, gauss);
        const double phi_1 = phase(eng);
        const double a_1 = draw_amplitude(spec, amp_1, eng, gauss);
        // shared draw between the forward and reflected mirror-side terms
        const double phi_1r = spec.decorrelate_phases ? phase(eng) : phi_1;
        const double phi_2 = phase(eng);
        const double a_2 = draw_amplitude(spec, amp_2, eng, gauss);
        return rt * (carrier + a_b * std::sin(carrier_phase + phi_b)) +
               a_1 * (std::sin(bwd + phi_1) - R * std::sin(fwd + phi_1r)) -
               rrt * a_2 * std::sin(fwd + phi_2);
    });
}

EnsembleStats sample_field_e2(const OpticalConfig& cfg,
                              const EnsembleSpec& spec, double t) {
    const double T = cfg.transmittance;
    const double R = cfg.reflectance();
    const double rr = std::sqrt(R);
    const double rrt = std::sqrt(R * T);
    const double wt = cfg.angular_frequency * t;
    const double carrier_phase = wt - cfg.wavenumber * cfg.Z2;
    const double bwd = wt + cfg.wavenumber * cfg.z2;
    const double fwd = wt - cfg.wavenumber * cfg.z2;
    const double carrier = cfg.field_unit * std::abs(cfg.alpha) *
                           std::sin(carrier_phase + std::arg(cfg.alpha));
    const double amp_b = cfg.field_unit * std::sqrt(cfg.weights.b);
    const double amp_1 = cfg.field_unit * std::sqrt(cfg.weights.a1);
    const double amp_2 = cfg.field_unit * std::sqrt(cfg.weights.a2);

    return run_ensemble(spec, [&](auto& eng, auto& phase, auto& gauss) {
        const double phi_b = phase(eng);
        const double a_b = draw_amplitude(spec, amp_b, eng, gauss);
        const double phi_2 = phase(eng);
        const double a_2 = draw_amplitude(spec, amp_2, eng, gauss);
        const double phi_2r = spec.decorrelate_phases ? phase(eng) : phi_2;
        const double phi_1 = phase(eng);
        const double a_1 = draw_amplitude(spec, amp_1, eng, gauss);
        return -rr * (carrier + a_b * std::sin(carrier_phase + phi_b)) +
               a_2 * (std::sin(bwd + phi_2) - T * std::sin(fwd + phi_2r)) -
               rrt * a_1 * std::sin(fwd + phi_1);
    });
}

std::vector<ScanPoint> scan_mc(const OpticalConfig& cfg,
                               const EnsembleSpec& spec,
                               const std::vector<double>& z_grid,
                               analytic::Port port, double t) {
    if (z_grid.empty()) {
        throw EmptyRangeError("scan_mc: empty z grid");
    }
    std::vector<std::future<ScanPoint>> futures;
    futures.reserve(z_grid.size());
    for (std::size_t i = 0; i < z_grid.size(); ++i) {
        futures.push_back(std::async(std::launch::async, [&, i]() {
            OpticalConfig probe = cfg;
            (port == analytic::Port::a1 ? probe.z1 : probe.z2) = z_grid[i];
            EnsembleSpec sub = spec;
            sub.seed = spec.seed ^ static_cast<std::uint64_t>(i);
            ScanPoint pt;
            pt.z = z_grid[i];
            if (port == analytic::Port::a1) {
                pt.stats = sample_field_e1(probe, sub, t);
                pt.analytic = analytic::variance_e1(probe).total;
            } else {
                pt.stats = sample_field_e2(probe, sub, t);
                pt.analytic = analytic::variance_e2(probe).total;
            }
            return pt;
        }));
    }
    std::vector<ScanPoint> out;
    out.reserve(z_grid.size());
    for (auto& f : futures) out.push_back(f.get());
    return out;
}

std::string scan_mc_to_csv(const std::vector<ScanPoint>& points) {
    std::string out = "z,mc_variance,stderr,analytic\n";
    char buf[160];
    for (const ScanPoint& p : points) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", p.z,
                      p.stats.variance, p.stats.variance_stderr, p.analytic);
        out += buf;
    }
    return out;
}

std::string scan_mc_sidecar_json(const EnsembleSpec& spec,
                                 analytic::Port port) {
    nlohmann::json doc;
    doc["seed"] = spec.seed;
    doc["n_samples"] = spec.n_samples;
    doc["amplitude_model"] =
        spec.amplitude_model == AmplitudeModel::fixed ? "fixed" : "gaussian";
    doc["decorrelate_phases"] = spec.decorrelate_phases;
    doc["port"] = analytic::port_name(port);
    return doc.dump(2);
}

}  // namespace bsnoise::mc
