#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "bsnoise/analytic.hpp"
#include "bsnoise/feedback.hpp"

using namespace bsnoise;

namespace {

constexpr double kPi = 3.14159265358979323846;

OpticalConfig loop_config() {
    OpticalConfig cfg;
    cfg.transmittance = 0.5;
    cfg.alpha = 10.0;
    return cfg;
}

}  // namespace

TEST_CASE("zero gain reproduces the closed forms identically") {
    const OpticalConfig cfg = loop_config();
    feedback::FeedbackSpec spec;
    spec.probe_z1 = 0.7;
    spec.out_probe_z2 = 1.3;
    const feedback::LoopReport rep = feedback::run_loop(cfg, spec);

    OpticalConfig probe = cfg;
    probe.z2 = spec.out_probe_z2;
    CHECK(rep.out_a2 == analytic::variance_e2(probe).total);
    CHECK(rep.open_loop_a2 == rep.out_a2);

    probe = cfg;
    probe.z1 = spec.probe_z1;
    CHECK(rep.inloop == analytic::photocurrent_variance_mirror(probe).total);
    CHECK(rep.sql == sql_baseline(cfg));
}

TEST_CASE("gain divides the common-mode term by (1+g)^2") {
    const OpticalConfig cfg = loop_config();
    feedback::FeedbackSpec spec;  // node probe: no standing floor
    const auto sweep = feedback::gain_sweep(cfg, spec, {0.0, 1.0, 10.0});
    CHECK(sweep[1].inloop / sweep[0].inloop ==
          doctest::Approx(0.25).epsilon(1e-13));
    CHECK(sweep[2].inloop / sweep[0].inloop ==
          doctest::Approx(1.0 / 121.0).epsilon(1e-13));
    CHECK(sweep[1].out_a2 / sweep[0].out_a2 ==
          doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("node sweep is monotone nonincreasing") {
    const OpticalConfig cfg = loop_config();
    feedback::FeedbackSpec spec;
    const auto sweep = feedback::gain_sweep(
        cfg, spec, {0.0, 0.1, 0.5, 1.0, 3.0, 10.0, 1e2, 1e4, 1e6});
    for (std::size_t i = 1; i < sweep.size(); ++i) {
        CHECK(sweep[i].inloop <= sweep[i - 1].inloop);
        CHECK(sweep[i].out_a2 <= sweep[i - 1].out_a2);
    }
}

TEST_CASE("large gain drives a node out-probe deep below the baseline") {
    const OpticalConfig cfg = loop_config();
    feedback::FeedbackSpec spec;
    spec.gain = 1e6;
    const feedback::LoopReport rep = feedback::run_loop(cfg, spec);
    // (R/2) sigma^2 / (1+g)^2 with sigma^2 = 2
    CHECK(rep.out_a2 == doctest::Approx(1.0 / 1.000002e12).epsilon(1e-6));
    CHECK(rep.out_a2 < 0.1 * rep.sql);
    CHECK(rep.sub_sql_out);
}

TEST_CASE("an antinode out-probe keeps the standing floor") {
    const OpticalConfig cfg = loop_config();
    feedback::FeedbackSpec spec;
    spec.gain = 1e6;
    spec.out_probe_z2 = kPi / 2.0;
    const feedback::LoopReport rep = feedback::run_loop(cfg, spec);
    // floor 2 T v_2^2 E^2 = 1.0 = sql: no net benefit off-node
    CHECK(rep.out_a2 >= rep.sql);
    CHECK(rep.out_a2 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_FALSE(rep.sub_sql_out);
}

TEST_CASE("an antinode in-loop probe has an irreducible floor") {
    const OpticalConfig cfg = loop_config();
    feedback::FeedbackSpec spec;
    spec.probe_z1 = kPi / 2.0;
    const double intensity = cfg.transmittance * std::norm(cfg.alpha);
    const double floor = intensity * 2.0 * cfg.reflectance() * cfg.weights.a1;
    for (double g : {0.0, 1.0, 100.0, 1e9}) {
        spec.gain = g;
        const feedback::LoopReport rep = feedback::run_loop(cfg, spec);
        CHECK(rep.inloop >= floor);
    }
    spec.gain = 1e12;
    CHECK(feedback::run_loop(cfg, spec).inloop ==
          doctest::Approx(floor).epsilon(1e-6));
}

TEST_CASE("lower detection efficiency never helps the out-of-loop port") {
    const OpticalConfig cfg = loop_config();
    feedback::FeedbackSpec spec;
    spec.gain = 10.0;
    double last = -1.0;
    for (double eta : {0.2, 0.5, 0.8, 1.0}) {
        spec.detection_efficiency = eta;
        const feedback::LoopReport rep = feedback::run_loop(cfg, spec);
        if (last >= 0.0) CHECK(rep.out_a2 <= last);
        last = rep.out_a2;
    }

    // eta = 1 with nonzero gain matches the closed model exactly
    spec.detection_efficiency = 1.0;
    const double common = 2.0;  // unit weights
    const double expect = 0.5 * cfg.reflectance() * common / (11.0 * 11.0);
    CHECK(feedback::run_loop(cfg, spec).out_a2 ==
          doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("the detector penalty raises the measured channel") {
    const OpticalConfig cfg = loop_config();
    feedback::FeedbackSpec ideal;
    ideal.gain = 5.0;
    feedback::FeedbackSpec lossy = ideal;
    lossy.detection_efficiency = 0.5;
    // g_eff halves and (1-eta)/eta = 1 adds a unit of vacuum to the bracket
    const auto a = feedback::run_loop(cfg, ideal);
    const auto b = feedback::run_loop(cfg, lossy);
    CHECK(b.inloop > a.inloop);
}

TEST_CASE("invalid loop parameters are rejected") {
    const OpticalConfig cfg = loop_config();
    feedback::FeedbackSpec spec;
    spec.gain = -1.0;
    CHECK_THROWS_AS(feedback::run_loop(cfg, spec), feedback::GainError);
    spec.gain = 1.0;
    spec.detection_efficiency = 0.0;
    CHECK_THROWS_AS(feedback::run_loop(cfg, spec), ConfigError);
    spec.detection_efficiency = 1.2;
    CHECK_THROWS_AS(feedback::run_loop(cfg, spec), ConfigError);
    spec.detection_efficiency = 1.0;
    CHECK_THROWS_AS(feedback::gain_sweep(cfg, spec, {}), EmptyRangeError);
}

TEST_CASE("sweep serialization formats") {
    const OpticalConfig cfg = loop_config();
    const auto sweep =
        feedback::gain_sweep(cfg, feedback::FeedbackSpec{}, {0.0, 1.0});
    const std::string csv = feedback::sweep_to_csv(sweep);
    CHECK(csv.rfind("g,inloop,out_a2,open_loop_a2,sql,sub_sql_out\n", 0) == 0);

    const nlohmann::json doc =
        nlohmann::json::parse(feedback::sweep_to_json(sweep));
    REQUIRE(doc.size() == 2);
    for (const char* key :
         {"g", "inloop", "out_a2", "open_loop_a2", "sql", "sub_sql_out"}) {
        CHECK(doc[0].contains(key));
    }
}
