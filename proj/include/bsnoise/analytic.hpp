#pragma once

#include <string>
#include <vector>

#include "bsnoise/config.hpp"

namespace bsnoise::analytic {

/// Which beam-splitter output port a scan or report refers to.
enum class Port { a1, a2 };

const char* port_name(Port port);

/// Field variance at one output port, decomposed by noise source.
///
/// `traveling` is the position-independent share carried over from the input
/// side (T or R times the free-space baseline); `standing` is the
/// sin²(k z)-modulated contribution of the mirror-side vacuum. The total is
/// their sum by construction.
struct NoiseReport {
    double total = 0.0;
    double traveling = 0.0;
    double standing = 0.0;
    double sql = 0.0;
    bool sub_sql = false;
};

struct ScanRow {
    double z = 0.0;
    NoiseReport report;
};

/// Sampled z-grid of noise reports with the classified standing-wave
/// extremum positions. Grid points land in `nodes` when |sin(k z)| < tol
/// and in `antinodes` when |cos(k z)| < tol.
struct ScanResult {
    Port port = Port::a1;
    std::vector<ScanRow> rows;
    std::vector<double> nodes;
    std::vector<double> antinodes;
};

/// Classification tolerance on |sin(k z)| (resp. |cos|). The closed forms are
/// exact; the tolerance only absorbs floating-point error in k*z.
inline constexpr double kNodeTolerance = 1e-9;

/// Field variance at port a1:
///
///   total = E² [ (T/2)(v_b² + R v₂² + T v₁²) + 2 R v₁² sin²(k z1) ]
///
/// traveling = T * sql_baseline, standing = 2 E² R v₁² sin²(k z1).
/// Independent of omega, t, alpha and its phase.
NoiseReport variance_e1(const OpticalConfig& cfg);

/// Port-a2 companion: (T ↔ R, v₁ ↔ v₂, z1 → z2).
NoiseReport variance_e2(const OpticalConfig& cfg);

/// The same a1 variance on its pre-rearrangement code path,
///
///   (E²/2) [ (1 + R²) v₁² + T (R v₂² + v_b²) - 2 R v₁² cos(2 k z1) ],
///
/// kept separate so the algebraic identity with variance_e1 can be tested
/// rather than assumed.
double variance_e1_raw(const OpticalConfig& cfg);

/// a2 twin of variance_e1_raw.
double variance_e2_raw(const OpticalConfig& cfg);

/// Phase-ensemble (semiclassical) variance at port a1,
///
///   (E²/2) [ T (v₂² R + v_b²) - 2 v₁² R cos(2 k z1) + v₁² (R² + 1) ],
///
/// i.e. the ensemble model's expression with amplitude-squared averages
/// identified with the vacuum weights. Numerically identical to
/// variance_e1_raw; kept as a third independent route.
double semiclassical_variance_e1(const OpticalConfig& cfg);

/// a2 twin of semiclassical_variance_e1.
double semiclassical_variance_e2(const OpticalConfig& cfg);

/// Mean field at port a1 at time t:  (sqrt(T)/sqrt(2)) E |alpha| sin(omega t - k Z1 - theta).
double mean_field_e1(const OpticalConfig& cfg, double t);

/// Mean field at port a2 at time t: -(sqrt(R)/sqrt(2)) E |alpha| sin(omega t - k Z2 - theta).
double mean_field_e2(const OpticalConfig& cfg, double t);

/// Shot-noise variance of the photocurrent at port a1 with the second input
/// port open (no mirror):
///
///   |alpha|² T [ R (v_cB² + v_cF²) + T (v_bB² + v_bF²) ]
///
/// Position-free by construction; expressed at unit field scale.
double photocurrent_variance_open(double alpha_sq, double transmittance,
                                  const OpenPortWeights& weights);

/// Photocurrent variance at port a1 with the mirror in place, decomposed the
/// same way as the field variance.
struct PhotocurrentReport {
    double total = 0.0;
    double carrier = 0.0;   // T|alpha|² * T (v_b² + R v₂² + T v₁²) * E⁴
    double standing = 0.0;  // T|alpha|² * 2 R v₁² sin²(k z1) * E⁴
};

/// Mirror-port photocurrent variance:
///
///   E⁴ T |alpha|² [ T (v_b² + R v₂² + T v₁²) + 2 R v₁² sin²(k z1) ]
///
/// At k z1 = n·pi the standing term vanishes and (weights 1, E = 1) the total
/// is T times the open-port value; at antinodes it equals the open-port value.
PhotocurrentReport photocurrent_variance_mirror(const OpticalConfig& cfg);

/// Lists every node (k z = n·pi) and antinode (k z = (n+1/2)·pi) inside
/// [z_min, z_max] and attaches the port report evaluated at each position.
/// Throws EmptyRangeError when z_min >= z_max.
ScanResult find_extrema(const OpticalConfig& cfg, double z_min, double z_max,
                        Port port = Port::a1);

/// Evaluates the port variance over an ascending z-grid and classifies grid
/// points that fall on nodes/antinodes. Throws EmptyRangeError on an empty or
/// non-ascending grid.
ScanResult scan_variance(const OpticalConfig& cfg, Port port,
                         const std::vector<double>& z_grid);

/// Convenience: uniform grid of `steps` points spanning [z_min, z_max].
std::vector<double> uniform_grid(double z_min, double z_max, std::size_t steps);

/// CSV with header `z,total,traveling,standing,sql,sub_sql`, one row per grid
/// point, floats printed with 17 significant digits.
std::string scan_to_csv(const ScanResult& scan);

/// JSON document with the same keys per row plus `nodes` and `antinodes`
/// arrays.
std::string scan_to_json(const ScanResult& scan);

}  // namespace bsnoise::analytic
