#include <doctest.h>

#include <cmath>

#include "bsnoise/config.hpp"

using namespace bsnoise;

TEST_CASE("well-formed default config validates") {
    OpticalConfig cfg;
    CHECK_NOTHROW(validate(cfg));
    cfg.transmittance = 0.5;
    cfg.wavenumber = 1.0;
    const OpticalConfig out = validate(cfg);
    CHECK(out.transmittance == 0.5);
}

TEST_CASE("transmittance outside [0,1] is rejected, not clamped") {
    OpticalConfig cfg;
    cfg.transmittance = 1.3;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg.transmittance = -0.01;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("negative vacuum weight is rejected") {
    OpticalConfig cfg;
    cfg.weights.a1 = -0.1;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("non-positive scales are rejected") {
    OpticalConfig cfg;
    cfg.wavenumber = 0.0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg.wavenumber = 1.0;
    cfg.field_unit = 0.0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg.field_unit = 1.0;
    cfg.angular_frequency = -2.0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg.angular_frequency = 1.0;
    cfg.z1 = -0.5;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("reflectance is derived, never stored") {
    OpticalConfig cfg;
    for (double T : {0.0, 0.3, 0.5, 0.7, 1.0}) {
        cfg.transmittance = T;
        CHECK(cfg.reflectance() == 1.0 - T);
    }
}

TEST_CASE("sql baseline at unit weights") {
    OpticalConfig cfg;
    cfg.transmittance = 0.5;
    CHECK(sql_baseline(cfg) == doctest::Approx(1.0).epsilon(1e-15));

    // invariant under T when all weights are equal
    for (double T : {0.0, 0.17, 0.5, 0.99, 1.0}) {
        cfg.transmittance = T;
        CHECK(sql_baseline(cfg) == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("sql baseline with asymmetric weights") {
    OpticalConfig cfg;
    cfg.transmittance = 0.3;
    cfg.weights.b = 2.0;
    cfg.weights.a1 = 1.0;
    cfg.weights.a2 = 1.0;
    // 0.5 * (2 + 0.7 + 0.3)
    CHECK(sql_baseline(cfg) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("sql baseline scales as the field unit squared") {
    OpticalConfig cfg;
    const double base = sql_baseline(cfg);
    cfg.field_unit = 2.0;
    CHECK(sql_baseline(cfg) == doctest::Approx(4.0 * base).epsilon(1e-15));
    cfg.field_unit = 0.5;
    CHECK(sql_baseline(cfg) == doctest::Approx(0.25 * base).epsilon(1e-15));
}

TEST_CASE("config parses from the flat JSON document") {
    const std::string text = R"({
        "T": 0.25, "k": 2.0, "omega": 3.0,
        "z1": 0.1, "z2": 0.2, "Z1": 0.3, "Z2": 0.4,
        "alpha_re": 1.5, "alpha_im": -0.5, "E_unit": 1.25,
        "v_b2": 2.0, "v_1sq": 0.5, "v_2sq": 0.0
    })";
    const OpticalConfig cfg = config_from_json_text(text);
    CHECK(cfg.transmittance == 0.25);
    CHECK(cfg.wavenumber == 2.0);
    CHECK(cfg.angular_frequency == 3.0);
    CHECK(cfg.z1 == 0.1);
    CHECK(cfg.Z2 == 0.4);
    CHECK(cfg.alpha == std::complex<double>{1.5, -0.5});
    CHECK(cfg.field_unit == 1.25);
    CHECK(cfg.weights.b == 2.0);
    CHECK(cfg.weights.a2 == 0.0);
}

TEST_CASE("missing JSON keys fall back to defaults") {
    const OpticalConfig cfg = config_from_json_text(R"({"T": 0.75})");
    CHECK(cfg.transmittance == 0.75);
    CHECK(cfg.wavenumber == 1.0);
    CHECK(cfg.weights.a1 == 1.0);
}

TEST_CASE("unknown or malformed JSON keys are rejected") {
    CHECK_THROWS_AS(config_from_json_text(R"({"transmittance": 0.5})"),
                    ConfigError);
    CHECK_THROWS_AS(config_from_json_text(R"({"T": "half"})"), ConfigError);
    CHECK_THROWS_AS(config_from_json_text("not json"), ConfigError);
    CHECK_THROWS_AS(config_from_json_text(R"({"T": 1.5})"), ConfigError);
}

TEST_CASE("config JSON round-trips") {
    OpticalConfig cfg;
    cfg.transmittance = 0.3;
    cfg.wavenumber = 6.2831853;
    cfg.alpha = {0.25, -1.75};
    cfg.weights.a2 = 1.5;
    const OpticalConfig back = config_from_json_text(config_to_json_text(cfg));
    CHECK(back.transmittance == cfg.transmittance);
    CHECK(back.wavenumber == cfg.wavenumber);
    CHECK(back.alpha == cfg.alpha);
    CHECK(back.weights.a2 == cfg.weights.a2);
}
