#include "bsnoise/analytic.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace bsnoise::analytic {

namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

NoiseReport make_report(const OpticalConfig& cfg, double port_share,
                        double mirror_weight, double mirror_coeff,
                        double kz) {
    const double e2 = cfg.field_unit * cfg.field_unit;
    const double s = std::sin(kz);
    NoiseReport rep;
    rep.sql = sql_baseline(cfg);
    rep.traveling = port_share * rep.sql;
    rep.standing = 2.0 * e2 * mirror_coeff * mirror_weight * s * s;
    rep.total = rep.traveling + rep.standing;
    rep.sub_sql = rep.total < rep.sql;
    return rep;
}

}  // namespace

const char* port_name(Port port) {
    return port == Port::a1 ? "a1" : "a2";
}

NoiseReport variance_e1(const OpticalConfig& cfg) {
    // standing term carries the a1-side vacuum weight, scaled by R
    return make_report(cfg, cfg.transmittance, cfg.weights.a1,
                       cfg.reflectance(), cfg.wavenumber * cfg.z1);
}

NoiseReport variance_e2(const OpticalConfig& cfg) {
    return make_report(cfg, cfg.reflectance(), cfg.weights.a2,
                       cfg.transmittance, cfg.wavenumber * cfg.z2);
}

double variance_e1_raw(const OpticalConfig& cfg) {
    const double e2 = cfg.field_unit * cfg.field_unit;
    const double T = cfg.transmittance;
    const double R = cfg.reflectance();
    const VacuumWeights& w = cfg.weights;
    const double c = std::cos(2.0 * cfg.wavenumber * cfg.z1);
    return 0.5 * e2 *
           ((1.0 + R * R) * w.a1 + T * (R * w.a2 + w.b) - 2.0 * R * w.a1 * c);
}

double variance_e2_raw(const OpticalConfig& cfg) {
    const double e2 = cfg.field_unit * cfg.field_unit;
    const double T = cfg.transmittance;
    const double R = cfg.reflectance();
    const VacuumWeights& w = cfg.weights;
    const double c = std::cos(2.0 * cfg.wavenumber * cfg.z2);
    return 0.5 * e2 *
           ((1.0 + T * T) * w.a2 + R * (T * w.a1 + w.b) - 2.0 * T * w.a2 * c);
}

double semiclassical_variance_e1(const OpticalConfig& cfg) {
    const double e2 = cfg.field_unit * cfg.field_unit;
    const double T = cfg.transmittance;
    const double R = cfg.reflectance();
    const VacuumWeights& w = cfg.weights;
    const double c = std::cos(2.0 * cfg.wavenumber * cfg.z1);
    // ensemble-model ordering of the same three contributions
    return 0.5 * e2 *
           (T * (w.a2 * R + w.b) - 2.0 * w.a1 * R * c + w.a1 * (R * R + 1.0));
}

double semiclassical_variance_e2(const OpticalConfig& cfg) {
    const double e2 = cfg.field_unit * cfg.field_unit;
    const double T = cfg.transmittance;
    const double R = cfg.reflectance();
    const VacuumWeights& w = cfg.weights;
    const double c = std::cos(2.0 * cfg.wavenumber * cfg.z2);
    return 0.5 * e2 *
           (R * (w.a1 * T + w.b) - 2.0 * w.a2 * T * c + w.a2 * (T * T + 1.0));
}

double mean_field_e1(const OpticalConfig& cfg, double t) {
    const double amp = std::sqrt(cfg.transmittance / 2.0) * cfg.field_unit *
                       std::abs(cfg.alpha);
    const double phase = cfg.angular_frequency * t -
                         cfg.wavenumber * cfg.Z1 - std::arg(cfg.alpha);
    return amp * std::sin(phase);
}

double mean_field_e2(const OpticalConfig& cfg, double t) {
    const double amp = std::sqrt(cfg.reflectance() / 2.0) * cfg.field_unit *
                       std::abs(cfg.alpha);
    const double phase = cfg.angular_frequency * t -
                         cfg.wavenumber * cfg.Z2 - std::arg(cfg.alpha);
    return -amp * std::sin(phase);
}

double photocurrent_variance_open(double alpha_sq, double transmittance,
                                  const OpenPortWeights& weights) {
    if (alpha_sq < 0.0) {
        throw ConfigError("|alpha|^2 must be nonnegative");
    }
    const double T = transmittance;
    const double R = 1.0 - T;
    return alpha_sq * T *
           (R * (weights.c_bwd + weights.c_fwd) +
            T * (weights.b_bwd + weights.b_fwd));
}

PhotocurrentReport photocurrent_variance_mirror(const OpticalConfig& cfg) {
    const double T = cfg.transmittance;
    const double R = cfg.reflectance();
    const double e2 = cfg.field_unit * cfg.field_unit;
    const double intensity = e2 * e2 * T * std::norm(cfg.alpha);
    const double s = std::sin(cfg.wavenumber * cfg.z1);
    PhotocurrentReport rep;
    rep.carrier = intensity * T *
                  (cfg.weights.b + R * cfg.weights.a2 + T * cfg.weights.a1);
    rep.standing = intensity * 2.0 * R * cfg.weights.a1 * s * s;
    rep.total = rep.carrier + rep.standing;
    return rep;
}

ScanResult find_extrema(const OpticalConfig& cfg, double z_min, double z_max,
                        Port port) {
    if (!(z_min < z_max)) {
        throw EmptyRangeError("find_extrema: z_min must be below z_max");
    }
    const double k = cfg.wavenumber;
    const double pi = std::acos(-1.0);
    // boundary slack equivalent to the |sin(kz)| classification tolerance
    const double span_eps = std::max(1e-12 * std::max(1.0, std::abs(z_max)),
                                     kNodeTolerance / k);

    ScanResult out;
    out.port = port;

    // nodes at k z = n pi, antinodes at k z = (n + 1/2) pi
    const auto collect = [&](double offset, std::vector<double>& dst) {
        long n = static_cast<long>(
            std::ceil(z_min * k / pi - offset - 1e-12));
        for (;; ++n) {
            const double z = (static_cast<double>(n) + offset) * pi / k;
            if (z < z_min - span_eps) continue;
            if (z > z_max + span_eps) break;
            dst.push_back(z);
        }
    };
    collect(0.0, out.nodes);
    collect(0.5, out.antinodes);

    auto evaluate = [&](double z) {
        OpticalConfig probe = cfg;
        (port == Port::a1 ? probe.z1 : probe.z2) = z;
        return port == Port::a1 ? variance_e1(probe) : variance_e2(probe);
    };
    for (double z : out.nodes) out.rows.push_back({z, evaluate(z)});
    for (double z : out.antinodes) out.rows.push_back({z, evaluate(z)});
    return out;
}

ScanResult scan_variance(const OpticalConfig& cfg, Port port,
                         const std::vector<double>& z_grid) {
    if (z_grid.empty()) {
        throw EmptyRangeError("scan_variance: empty z grid");
    }
    for (std::size_t i = 1; i < z_grid.size(); ++i) {
        if (!(z_grid[i] > z_grid[i - 1])) {
            throw EmptyRangeError("scan_variance: z grid must ascend");
        }
    }
    ScanResult out;
    out.port = port;
    out.rows.reserve(z_grid.size());
    for (double z : z_grid) {
        OpticalConfig probe = cfg;
        (port == Port::a1 ? probe.z1 : probe.z2) = z;
        out.rows.push_back(
            {z, port == Port::a1 ? variance_e1(probe) : variance_e2(probe)});
        const double kz = cfg.wavenumber * z;
        if (std::abs(std::sin(kz)) < kNodeTolerance) {
            out.nodes.push_back(z);
        } else if (std::abs(std::cos(kz)) < kNodeTolerance) {
            out.antinodes.push_back(z);
        }
    }
    return out;
}

std::vector<double> uniform_grid(double z_min, double z_max,
                                 std::size_t steps) {
    if (steps == 0 || !(z_min < z_max)) {
        throw EmptyRangeError("uniform_grid: need steps >= 1 and z_min < z_max");
    }
    std::vector<double> grid(steps);
    if (steps == 1) {
        grid[0] = z_min;
        return grid;
    }
    const double dz = (z_max - z_min) / static_cast<double>(steps - 1);
    for (std::size_t i = 0; i < steps; ++i) {
        grid[i] = z_min + dz * static_cast<double>(i);
    }
    grid.back() = z_max;
    return grid;
}

std::string scan_to_csv(const ScanResult& scan) {
    std::string out = "z,total,traveling,standing,sql,sub_sql\n";
    for (const ScanRow& row : scan.rows) {
        out += fmt17(row.z) + ',' + fmt17(row.report.total) + ',' +
               fmt17(row.report.traveling) + ',' + fmt17(row.report.standing) +
               ',' + fmt17(row.report.sql) + ',' +
               (row.report.sub_sql ? "true" : "false") + '\n';
    }
    return out;
}

std::string scan_to_json(const ScanResult& scan) {
    nlohmann::json doc;
    doc["port"] = port_name(scan.port);
    doc["rows"] = nlohmann::json::array();
    for (const ScanRow& row : scan.rows) {
        doc["rows"].push_back({{"z", row.z},
                               {"total", row.report.total},
                               {"traveling", row.report.traveling},
                               {"standing", row.report.standing},
                               {"sql", row.report.sql},
                               {"sub_sql", row.report.sub_sql}});
    }
    doc["nodes"] = scan.nodes;
    doc["antinodes"] = scan.antinodes;
    return doc.dump(2);
}

}  // namespace bsnoise::analytic
