#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "bsnoise/analytic.hpp"
#include "bsnoise/fock.hpp"
#include "bsnoise/mode_algebra.hpp"

using namespace bsnoise;
using namespace bsnoise::modal;

namespace {

constexpr double kPi = 3.14159265358979323846;

fock::TruncationSpec three_mode(int dim) {
    fock::TruncationSpec spec;
    spec.dim = dim;
    spec.modes = {mode("b"), mode("a1"), mode("a2")};
    return spec;
}

fock::StateVector coherent_b(Complex alpha, int dim) {
    return fock::build_coherent({{mode("b"), alpha}}, three_mode(dim));
}

}  // namespace

TEST_CASE("vacuum build is the lowest basis vector") {
    const fock::StateVector psi = fock::build_coherent({}, three_mode(4));
    CHECK(psi.amplitudes[0] == Complex{1.0, 0.0});
    CHECK(psi.amplitudes.tail(psi.amplitudes.size() - 1).norm() == 0.0);
}

TEST_CASE("coherent occupancy is Poissonian in the mean") {
    const fock::StateVector psi = coherent_b(1.0, 30);
    CHECK(fock::number_mean(psi, mode("b")) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(fock::number_mean(psi, mode("a1")) == 0.0);
}

TEST_CASE("coherent states are annihilation eigenstates") {
    for (double a : {0.5, 1.0, 2.0}) {
        const Complex alpha = std::polar(a, 0.9);
        const fock::StateVector psi = coherent_b(alpha, 40);
        CHECK(std::abs(fock::annihilation_mean(psi, mode("b")) - alpha) <
              1e-9);
    }
}

TEST_CASE("state norm sits within the truncation deficit") {
    const fock::StateVector psi = coherent_b(2.0, 40);
    const double deficit = fock::coherent_truncation_deficit(4.0, 40);
    CHECK(psi.norm_sq() <= 1.0 + 1e-15);
    CHECK(psi.norm_sq() >= 1.0 - deficit - 1e-15);
}

TEST_CASE("deficit guard and dimension cap") {
    CHECK_THROWS_AS(coherent_b(1.0, 3), fock::TruncationError);

    fock::TruncationSpec four;
    four.dim = 40;
    four.modes = {mode("bF"), mode("bB"), mode("cF"), mode("cB")};
    CHECK_THROWS_AS(four.total_dimension(), fock::DimensionCapError);
    CHECK_THROWS_AS(fock::build_coherent({}, four), fock::DimensionCapError);

    // the same four modes fit at a smaller per-mode dimension
    four.dim = 25;
    CHECK(four.total_dimension() == 390625);
}

TEST_CASE("deficit decreases with dimension and grows with amplitude") {
    const double d30 = fock::coherent_truncation_deficit(4.0, 30);
    const double d40 = fock::coherent_truncation_deficit(4.0, 40);
    CHECK(d40 < d30);
    CHECK(fock::coherent_truncation_deficit(0.0, 10) == 0.0);
    CHECK(fock::coherent_truncation_deficit(1.0, 3) ==
          doctest::Approx(1.0 - std::exp(-1.0) * 2.5).epsilon(1e-12));
}

TEST_CASE("commutator expectation is one away from the edge") {
    const fock::StateVector psi = coherent_b(1.0, 30);
    CHECK(fock::commutator_mean(psi, mode("b")) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fock::commutator_mean(psi, mode("a1")) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("field variance matches the moment rule") {
    OpticalConfig cfg;
    cfg.transmittance = 0.5;
    cfg.z1 = 0.7;
    cfg.Z1 = 1.1;
    for (double a : {0.5, 2.0}) {
        const Complex alpha = std::polar(a, 0.4);
        cfg.alpha = alpha;
        const fock::StateVector psi = coherent_b(alpha, 40);
        const LinearFieldForm e1 = build_field_e1(cfg, 0.9);
        CHECK(std::abs(fock::field_variance(e1, psi) -
                       variance(e1, mirror_state(cfg))) < 1e-8);
    }
}

TEST_CASE("completed operator mean is twice the coefficient-rule mean") {
    OpticalConfig cfg;
    cfg.transmittance = 0.5;
    cfg.z1 = 0.3;
    cfg.Z1 = 0.9;
    cfg.alpha = std::polar(1.0, 0.2);
    const fock::StateVector psi = coherent_b(cfg.alpha, 40);
    const LinearFieldForm e1 = build_field_e1(cfg, 1.3);
    CHECK(fock::field_mean(e1, psi) ==
          doctest::Approx(2.0 * mean(e1, mirror_state(cfg))).epsilon(1e-9));
}

TEST_CASE("built field matrices are Hermitian") {
    OpticalConfig cfg;
    cfg.transmittance = 0.4;
    cfg.z1 = 0.6;
    cfg.alpha = 0.5;
    const LinearFieldForm e1 = build_field_e1(cfg, 0.2);

    fock::TruncationSpec small = three_mode(12);  // 1728 amplitudes
    const Eigen::MatrixXcd m = fock::materialize_field(e1, small);
    CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-14);

    // matrix-free adjoint identity on random vectors in the large space
    const fock::TruncationSpec spec = three_mode(40);
    std::mt19937_64 eng(5);
    std::normal_distribution<double> g(0.0, 1.0);
    fock::StateVector u{spec, Eigen::VectorXcd(
                                  static_cast<Eigen::Index>(
                                      spec.total_dimension()))};
    fock::StateVector v = u;
    for (Eigen::Index i = 0; i < u.amplitudes.size(); ++i) {
        u.amplitudes[i] = Complex{g(eng), g(eng)};
        v.amplitudes[i] = Complex{g(eng), g(eng)};
    }
    const Complex lhs = u.amplitudes.dot(fock::apply_field(e1, v).amplitudes);
    const Complex rhs =
        std::conj(v.amplitudes.dot(fock::apply_field(e1, u).amplitudes));
    CHECK(std::abs(lhs - rhs) / std::abs(lhs) < 1e-12);
}

TEST_CASE("dense materialization is capped") {
    const LinearFieldForm e1 = build_field_e1(OpticalConfig{}, 0.0);
    CHECK_THROWS_AS(fock::materialize_field(e1, three_mode(20)),
                    fock::DimensionCapError);
}

TEST_CASE("operators reject modes outside the truncation") {
    LinearFieldForm stray;
    stray.set(mode("q"), Complex{1.0, 0.0});
    const fock::StateVector psi = fock::build_coherent({}, three_mode(4));
    CHECK_THROWS_AS(fock::apply_field(stray, psi),
                    fock::DimensionMismatchError);
    CHECK_THROWS_AS(fock::number_mean(psi, mode("q")),
                    fock::DimensionMismatchError);
}

TEST_CASE("photocurrent variance on vacuum vanishes") {
    OpticalConfig cfg;
    cfg.transmittance = 0.5;
    const fock::StateVector vac = fock::build_coherent({}, three_mode(12));
    const Coefficients plus = mirror_photocurrent_positive_part(cfg, 0.0);
    CHECK(std::abs(fock::photocurrent_variance_exact(plus, vac)) <= 1e-12);
    CHECK(std::abs(fock::photocurrent_mean(plus, vac)) <= 1e-12);
}

TEST_CASE("photocurrent variance matches the coherent moment rule") {
    OpticalConfig cfg;
    cfg.transmittance = 0.5;
    cfg.z1 = kPi / 4.0;
    cfg.alpha = std::polar(1.5, 0.3);
    const fock::StateVector psi = coherent_b(cfg.alpha, 40);
    const Coefficients plus = mirror_photocurrent_positive_part(cfg, 0.21);
    const double exact = fock::photocurrent_variance_exact(plus, psi);
    const double rule = photocurrent_variance(plus, mirror_state(cfg));
    CHECK(std::abs(exact - rule) < 1e-8);
}

TEST_CASE("open-port photocurrent in a four-mode space") {
    fock::TruncationSpec spec;
    spec.dim = 18;
    spec.modes = {mode("bF"), mode("bB"), mode("cF"), mode("cB")};
    const Complex alpha = 1.0;
    const fock::StateVector psi =
        fock::build_coherent({{mode("bF"), alpha}}, spec);
    const Coefficients plus =
        open_port_photocurrent_positive_part(0.5, 1.0, 0.3, 0.7);
    const double exact = fock::photocurrent_variance_exact(plus, psi);
    CHECK(exact == doctest::Approx(analytic::photocurrent_variance_open(
                       1.0, 0.5, OpenPortWeights{}))
                       .epsilon(1e-9));
}

TEST_CASE("occupation histogram sums to one and peaks near the mean") {
    const fock::StateVector psi = coherent_b(2.0, 40);
    const std::vector<double> dist =
        fock::occupation_distribution(psi, mode("b"));
    double sum = 0.0;
    for (double p : dist) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    // Poisson(4): mode at n = 3, 4
    CHECK(dist[4] > dist[10]);
    CHECK(dist[3] > dist[0]);

    const std::string csv = fock::occupation_histograms_csv(psi);
    CHECK(csv.rfind("mode,n,probability\n", 0) == 0);
}
