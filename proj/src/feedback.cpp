#include "bsnoise/feedback.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "bsnoise/analytic.hpp"

namespace bsnoise::feedback {

LoopReport run_loop(const OpticalConfig& cfg, const FeedbackSpec& spec) {
    if (!(spec.gain >= 0.0) || !std::isfinite(spec.gain)) {
        throw GainError("loop gain must be finite and nonnegative");
    }
    const double eta = spec.detection_efficiency;
    if (!(eta > 0.0 && eta <= 1.0)) {
        throw ConfigError("detection efficiency must lie in (0, 1]");
    }

    OpticalConfig probe_in = cfg;
    probe_in.z1 = spec.probe_z1;
    OpticalConfig probe_out = cfg;
    probe_out.z2 = spec.out_probe_z2;

    LoopReport rep;
    rep.gain = spec.gain;
    rep.sql = sql_baseline(cfg);
    rep.open_loop_a2 = analytic::variance_e2(probe_out).total;

    if (spec.gain == 0.0 && eta == 1.0) {
        // open loop: exactly the closed forms
        rep.inloop = analytic::photocurrent_variance_mirror(probe_in).total;
        rep.out_a2 = rep.open_loop_a2;
    } else {
        const double T = cfg.transmittance;
        const double R = cfg.reflectance();
        const double e2 = cfg.field_unit * cfg.field_unit;
        const double common = cfg.weights.b + R * cfg.weights.a2 +
                              T * cfg.weights.a1;
        const double g_eff = eta * spec.gain;
        const double suppression = 1.0 / ((1.0 + g_eff) * (1.0 + g_eff));
        const double penalty = (1.0 - eta) / eta;  // detector vacuum

        const double s_in = std::sin(cfg.wavenumber * spec.probe_z1);
        const double intensity = e2 * e2 * T * std::norm(cfg.alpha);
        rep.inloop = intensity *
                     (T * (common + penalty) * suppression +
                      2.0 * R * cfg.weights.a1 * s_in * s_in);

        const double s_out = std::sin(cfg.wavenumber * spec.out_probe_z2);
        rep.out_a2 = e2 * (0.5 * R * common * suppression +
                           2.0 * T * cfg.weights.a2 * s_out * s_out);
    }
    rep.sub_sql_out = rep.out_a2 < kDeepSubSqlMargin * rep.sql;
    return rep;
}

std::vector<LoopReport> gain_sweep(const OpticalConfig& cfg,
                                   const FeedbackSpec& spec,
                                   const std::vector<double>& gains) {
    if (gains.empty()) {
        throw EmptyRangeError("gain_sweep: empty gain grid");
    }
    std::vector<LoopReport> out;
    out.reserve(gains.size());
    for (double g : gains) {
        FeedbackSpec point = spec;
        point.gain = g;
        out.push_back(run_loop(cfg, point));
    }
    return out;
}

std::string sweep_to_csv(const std::vector<LoopReport>& reports) {
    std::string out = "g,inloop,out_a2,open_loop_a2,sql,sub_sql_out\n";
    char buf[192];
    for (const LoopReport& r : reports) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%s\n",
                      r.gain, r.inloop, r.out_a2, r.open_loop_a2, r.sql,
                      r.sub_sql_out ? "true" : "false");
        out += buf;
    }
    return out;
}

std::string sweep_to_json(const std::vector<LoopReport>& reports) {
    nlohmann::json doc = nlohmann::json::array();
    for (const LoopReport& r : reports) {
        doc.push_back({{"g", r.gain},
                       {"inloop", r.inloop},
                       {"out_a2", r.out_a2},
                       {"open_loop_a2", r.open_loop_a2},
                       {"sql", r.sql},
                       {"sub_sql_out", r.sub_sql_out}});
    }
    return doc.dump(2);
}

}  // namespace bsnoise::feedback
