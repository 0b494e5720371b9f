#include "bsnoise/config.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace bsnoise {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw ConfigError(std::string(name) + " must be finite");
    }
}

}  // namespace

OpticalConfig validate(const OpticalConfig& cfg) {
    require_finite(cfg.transmittance, "T");
    if (cfg.transmittance < 0.0 || cfg.transmittance > 1.0) {
        throw ConfigError("T out of range: transmittance must lie in [0, 1]");
    }
    require_finite(cfg.wavenumber, "k");
    if (cfg.wavenumber <= 0.0) {
        throw ConfigError("k must be positive");
    }
    require_finite(cfg.angular_frequency, "omega");
    if (cfg.angular_frequency <= 0.0) {
        throw ConfigError("omega must be positive");
    }
    require_finite(cfg.field_unit, "E_unit");
    if (cfg.field_unit <= 0.0) {
        throw ConfigError("E_unit must be positive");
    }
    for (auto [v, name] : {std::pair{cfg.z1, "z1"}, {cfg.z2, "z2"},
                           {cfg.Z1, "Z1"}, {cfg.Z2, "Z2"}}) {
        require_finite(v, name);
        if (v < 0.0) {
            throw ConfigError(std::string(name) + " must be nonnegative");
        }
    }
    for (auto [v, name] : {std::pair{cfg.weights.b, "v_b2"},
                           {cfg.weights.a1, "v_1sq"},
                           {cfg.weights.a2, "v_2sq"}}) {
        require_finite(v, name);
        if (v < 0.0) {
            throw ConfigError(std::string("negative vacuum weight ") + name);
        }
    }
    if (!std::isfinite(cfg.alpha.real()) || !std::isfinite(cfg.alpha.imag())) {
        throw ConfigError("alpha must be finite");
    }
    return cfg;
}

double sql_baseline(const OpticalConfig& cfg) {
    const double e2 = cfg.field_unit * cfg.field_unit;
    const double T = cfg.transmittance;
    const double R = cfg.reflectance();
    return 0.5 * e2 *
           (cfg.weights.b + R * cfg.weights.a2 + T * cfg.weights.a1);
}

OpticalConfig config_from_json_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config JSON parse error: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("config JSON must be a flat object");
    }

    OpticalConfig cfg;
    for (const auto& [key, value] : doc.items()) {
        if (!value.is_number()) {
            throw ConfigError("config key '" + key + "' must be a number");
        }
        const double v = value.get<double>();
        if (key == "T") cfg.transmittance = v;
        else if (key == "k") cfg.wavenumber = v;
        else if (key == "omega") cfg.angular_frequency = v;
        else if (key == "z1") cfg.z1 = v;
        else if (key == "z2") cfg.z2 = v;
        else if (key == "Z1") cfg.Z1 = v;
        else if (key == "Z2") cfg.Z2 = v;
        else if (key == "alpha_re") cfg.alpha.real(v);
        else if (key == "alpha_im") cfg.alpha.imag(v);
        else if (key == "E_unit") cfg.field_unit = v;
        else if (key == "v_b2") cfg.weights.b = v;
        else if (key == "v_1sq") cfg.weights.a1 = v;
        else if (key == "v_2sq") cfg.weights.a2 = v;
        else throw ConfigError("unknown config key '" + key + "'");
    }
    return validate(cfg);
}

std::string config_to_json_text(const OpticalConfig& cfg) {
    nlohmann::json doc;
    doc["T"] = cfg.transmittance;
    doc["k"] = cfg.wavenumber;
    doc["omega"] = cfg.angular_frequency;
    doc["z1"] = cfg.z1;
    doc["z2"] = cfg.z2;
    doc["Z1"] = cfg.Z1;
    doc["Z2"] = cfg.Z2;
    doc["alpha_re"] = cfg.alpha.real();
    doc["alpha_im"] = cfg.alpha.imag();
    doc["E_unit"] = cfg.field_unit;
    doc["v_b2"] = cfg.weights.b;
    doc["v_1sq"] = cfg.weights.a1;
    doc["v_2sq"] = cfg.weights.a2;
    return doc.dump(2);
}

}  // namespace bsnoise
