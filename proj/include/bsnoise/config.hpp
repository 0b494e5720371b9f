#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace bsnoise {

/// Thrown when a configuration violates its invariants (bad transmittance,
/// negative vacuum weight, non-positive wavenumber or field unit).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown by range-taking operations (scans, sweeps) on an empty or
/// descending range.
class EmptyRangeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Per-mode vacuum weights v².
///
/// The quantum value is 1 for every mode (⟨a a†⟩ = 1 on vacuum); the weights
/// are kept adjustable so that tests can attribute noise to individual
/// sources by zeroing the others. `b` rides with the coherent carrier,
/// `a1`/`a2` are the vacuum modes entering from the output ports.
struct VacuumWeights {
    double b = 1.0;
    double a1 = 1.0;
    double a2 = 1.0;
};

/// Vacuum weights for the open-port (no mirror) photocurrent geometry, where
/// both beam-splitter inputs carry independent forward/backward modes.
struct OpenPortWeights {
    double b_fwd = 1.0;
    double b_bwd = 1.0;
    double c_fwd = 1.0;
    double c_bwd = 1.0;
};

/// All physical parameters of the beam-splitter-plus-mirror setup.
///
/// Reflectance is always derived as R = 1 - T and never stored, so R + T = 1
/// cannot be violated. Lengths z1/z2 are measured from the mirror-side
/// reference to the probes at ports a1/a2; Z1/Z2 are the independent
/// propagation distances of the coherent carrier to those ports (Z1 is not
/// assumed to equal z1 plus any fixed offset).
struct OpticalConfig {
    double transmittance = 0.5;       // T in [0, 1]
    double wavenumber = 1.0;          // k > 0, rad / length
    double angular_frequency = 1.0;   // omega > 0; enters phases only
    double z1 = 0.0;                  // probe distance at port a1
    double z2 = 0.0;                  // probe distance at port a2
    double Z1 = 0.0;                  // carrier path length to port a1
    double Z2 = 0.0;                  // carrier path length to port a2
    std::complex<double> alpha{0.0, 0.0};  // coherent amplitude of mode b
    double field_unit = 1.0;          // single-photon field scale (> 0)
    VacuumWeights weights{};

    double reflectance() const { return 1.0 - transmittance; }
};

/// Checks every invariant and returns the config unchanged.
/// Throws ConfigError naming the offending field otherwise.
OpticalConfig validate(const OpticalConfig& cfg);

/// Free-space coherent-state field variance used as the standard-quantum-limit
/// reference:
///
///   sql = (E²/2) (v_b² + R v₂² + T v₁²)
///
/// Independent of alpha, position and time; equals E² when all weights are 1.
double sql_baseline(const OpticalConfig& cfg);

/// Parses a flat key-value JSON document with keys exactly
///   T, k, omega, z1, z2, Z1, Z2, alpha_re, alpha_im, E_unit,
///   v_b2, v_1sq, v_2sq
/// (all optional, defaults as in OpticalConfig). Unknown keys are rejected.
/// The result is validated before it is returned.
OpticalConfig config_from_json_text(const std::string& text);

/// Serializes a config to the flat JSON document accepted by
/// config_from_json_text.
std::string config_to_json_text(const OpticalConfig& cfg);

}  // namespace bsnoise
