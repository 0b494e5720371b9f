#pragma once

#include <complex>
#include <map>
#include <stdexcept>
#include <string>

#include "bsnoise/config.hpp"

namespace bsnoise::modal {

using Complex = std::complex<double>;

class UnknownModeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Opaque bosonic mode label ("b", "a1", "a2", "c", with an F/B direction
/// suffix where a port carries both propagation directions). Ordered so that
/// serialization is deterministic.
struct ModeId {
    std::string label;

    friend auto operator<=>(const ModeId&, const ModeId&) = default;
};

inline ModeId mode(std::string label) { return ModeId{std::move(label)}; }

using Coefficients = std::map<ModeId, Complex>;

/// Hermitian field operator stored through its annihilation-side
/// coefficients:  E = sum_i ( c_i a_i + conj(c_i) a_i† ).
///
/// Hermiticity is structural -- only c_i is stored. Time and position live
/// inside the phases of the coefficients. Zero coefficients are dropped.
class LinearFieldForm {
public:
    LinearFieldForm() = default;
    explicit LinearFieldForm(Coefficients terms);

    void set(const ModeId& m, Complex c);
    Complex at(const ModeId& m) const;  // 0 for absent modes
    const Coefficients& terms() const { return terms_; }

private:
    Coefficients terms_;
};

/// Product of coherent states: per mode an amplitude (0 = vacuum) and a
/// vacuum weight v² (quantum value 1). Modes not listed act as vacuum with
/// weight 1.
class CoherentProductState {
public:
    void set_amplitude(const ModeId& m, Complex alpha);
    void set_weight(const ModeId& m, double weight_sq);

    Complex amplitude(const ModeId& m) const;
    double weight(const ModeId& m) const;

    /// Sum of |alpha_i|² over all modes.
    double total_intensity() const;

    const std::map<ModeId, Complex>& amplitudes() const { return amplitudes_; }

private:
    std::map<ModeId, Complex> amplitudes_;
    std::map<ModeId, double> weights_;
};

// -- builders ---------------------------------------------------------------

/// Free traveling field on mode b:  i E ( b e^{-i(wt - kz)} - b† e^{+i(wt - kz)} ).
LinearFieldForm build_field_free(const OpticalConfig& cfg, double t, double z);

/// Free field resolved into forward/backward modes bF, bB, each with
/// coefficient magnitude E/sqrt(2); its variance at unit weights equals the
/// sql baseline. Used when comparing against the baseline convention.
LinearFieldForm build_field_free_bidirectional(const OpticalConfig& cfg,
                                               double t, double z);

/// Output-port field at a1 over modes {b, a1, a2}. Coefficient magnitudes:
///   |c_b|²  = E² T / 2
///   |c_a1|² = (E²/2) (1 + R² - 2 R cos 2 k z1)
///   |c_a2|² = E² R T / 2
LinearFieldForm build_field_e1(const OpticalConfig& cfg, double t);

/// Output-port field at a2 (T ↔ R, z1 → z2, carrier sign flipped).
LinearFieldForm build_field_e2(const OpticalConfig& cfg, double t);

/// Positive-frequency (annihilation) part of the detected field at port a1
/// with the second beam-splitter input open: four modes bF, bB, cF, cB with
/// coefficient magnitudes E sqrt(T), E sqrt(T), E sqrt(R), E sqrt(R).
Coefficients open_port_photocurrent_positive_part(double transmittance,
                                                  double field_unit, double t,
                                                  double z1,
                                                  double angular_frequency = 1.0,
                                                  double wavenumber = 1.0);

/// Positive-frequency part of the detected field at port a1 with the mirror
/// in place, over modes {b, a1, a2}. The a1 coefficient folds the
/// forward/reflected standing-wave interference into one effective magnitude,
///   |c_a1|² = E² (T² + 2 R sin² k z1),
/// so the detected-intensity noise carries the carrier bracket plus the
/// 2 R v₁² sin²(k z1) modulation. |c_b|² = E² T, |c_a2|² = E² R T.
Coefficients mirror_photocurrent_positive_part(const OpticalConfig& cfg,
                                               double t);

/// Coherent product state for the mirror setup: mode b carries cfg.alpha and
/// weight v_b²; a1, a2 are vacuum with weights v₁², v₂².
CoherentProductState mirror_state(const OpticalConfig& cfg);

/// State for the open-port setup: bF coherent, bB/cF/cB vacuum, weights from
/// `weights`.
CoherentProductState open_port_state(Complex alpha,
                                     const OpenPortWeights& weights);

// -- beam splitter ----------------------------------------------------------

/// Mode pair naming for a beam-splitter application.
struct BeamSplitterPorts {
    ModeId in_1{"b"};
    ModeId in_2{"c"};
    ModeId out_1{"a1"};
    ModeId out_2{"a2"};
};

/// Rewrites a form over (in_1, in_2) onto (out_1, out_2) through the
/// orthogonal mixing  a1 = sqrt(T) b + sqrt(R) c,  a2 = -sqrt(R) b + sqrt(T) c.
/// Preserves |c|² summed over the pair. Throws UnknownModeError when an
/// output label is already taken by an unrelated term.
LinearFieldForm apply_beam_splitter(const LinearFieldForm& form,
                                    double transmittance,
                                    const BeamSplitterPorts& ports = {});

/// Same mixing applied to state amplitudes (and convex mixing of the vacuum
/// weights); preserves total intensity.
CoherentProductState apply_beam_splitter(const CoherentProductState& state,
                                         double transmittance,
                                         const BeamSplitterPorts& ports = {});

// -- moments ----------------------------------------------------------------

/// Mean field:  Re( sum_i c_i alpha_i ).
double mean(const LinearFieldForm& form, const CoherentProductState& state);

/// Field variance by the coherent-state moment rule:
///   Var(E) = sum_i |c_i|² v_i².
/// Nonnegative, independent of every amplitude.
double variance(const LinearFieldForm& form, const CoherentProductState& state);

/// Detected-intensity (photocurrent) variance of I = E(-) E(+) on a coherent
/// product state:
///   Var(I) = |sum_i c_i alpha_i|² · sum_j |c_j|² v_j²
/// with c the positive-part coefficients. Leading order in intensity, which
/// for coherent inputs is the whole story at v² = 1.
double photocurrent_variance(const Coefficients& positive_part,
                             const CoherentProductState& state);

/// Mean detected intensity |sum_i c_i alpha_i|².
double photocurrent_mean(const Coefficients& positive_part,
                         const CoherentProductState& state);

// -- serialization ----------------------------------------------------------

/// `{"terms":[{"mode":"a1","re":...,"im":...},...]}`, modes in label order.
std::string form_to_json(const LinearFieldForm& form);
LinearFieldForm form_from_json(const std::string& text);

}  // namespace bsnoise::modal
