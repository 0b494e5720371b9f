#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bsnoise/analytic.hpp"
#include "bsnoise/config.hpp"

namespace bsnoise::mc {

/// How the per-member amplitude of each vacuum sinusoid is drawn. Both models
/// satisfy <A sin> = 0 and the same <A²>, so they agree on every variance.
enum class AmplitudeModel {
    fixed,     // constant amplitude, random phase only
    gaussian,  // half-normal amplitude with matching mean square
};

/// Ensemble parameters. Identical spec (and config) gives a bitwise-identical
/// sample stream: sampling is chunked with counter-derived substreams, so the
/// stream does not depend on how work is scheduled.
struct EnsembleSpec {
    std::size_t n_samples = 1'000'000;
    std::uint64_t seed = 42;
    AmplitudeModel amplitude_model = AmplitudeModel::fixed;
    /// Test hook: draw independent phases for the forward and reflected
    /// mirror-side terms, which destroys the sin²(k z) modulation.
    bool decorrelate_phases = false;
};

/// Sample moments of the field ensemble at one (t, z) point.
struct EnsembleStats {
    double mean = 0.0;
    double variance = 0.0;          // unbiased (n-1)
    double variance_stderr = 0.0;   // from the fourth central moment
    std::size_t n = 0;
};

/// Free traveling field: carrier E|alpha| sin(wt - kz + theta) plus one
/// forward and one backward vacuum sinusoid with uniform random phases.
/// Variance converges to (E²/2)(v_b² + v_b²) -- both directions carry the
/// mode-b weight -- independent of the carrier amplitude.
EnsembleStats sample_free_field(const OpticalConfig& cfg,
                                const EnsembleSpec& spec, double t, double z);

/// Port-a1 field of the mirror setup. The forward and reflected mirror-side
/// terms share one phase draw; that correlation is what produces the
/// cos(2 k z1) interference. Variance converges to
/// semiclassical_variance_e1(cfg).
EnsembleStats sample_field_e1(const OpticalConfig& cfg,
                              const EnsembleSpec& spec, double t);

/// Port-a2 companion.
EnsembleStats sample_field_e2(const OpticalConfig& cfg,
                              const EnsembleSpec& spec, double t);

struct ScanPoint {
    double z = 0.0;
    EnsembleStats stats;
    double analytic = 0.0;
};

/// Ensemble scan over a z-grid; grid point i uses substream seed ⊕ i, so any
/// sub-grid reproduces the same per-point values. Throws EmptyRangeError on
/// an empty grid.
std::vector<ScanPoint> scan_mc(const OpticalConfig& cfg,
                               const EnsembleSpec& spec,
                               const std::vector<double>& z_grid,
                               analytic::Port port, double t = 0.0);

/// CSV with header `z,mc_variance,stderr,analytic`.
std::string scan_mc_to_csv(const std::vector<ScanPoint>& points);

/// Reproducibility sidecar: seed, sample count, amplitude model, port.
std::string scan_mc_sidecar_json(const EnsembleSpec& spec, analytic::Port port);

}  // namespace bsnoise::mc
