#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bsnoise/config.hpp"
#include "bsnoise/mc.hpp"

namespace bsnoise::validation {

/// One check: a computed value against its reference, with the absolute or
/// relative error actually compared and the tolerance it was compared to.
struct CheckRow {
    std::string label;
    double value = 0.0;
    double reference = 0.0;
    double error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct SuiteReport {
    std::string name;
    std::vector<CheckRow> rows;
    /// Statistical suites tolerate this many failing rows (binomial slack).
    std::size_t allowed_failures = 0;

    std::size_t failures() const;
    bool pass() const { return failures() <= allowed_failures; }
    double max_error() const;
};

/// Plain-text table, one row per check plus a PASS/FAIL trailer.
std::string suite_to_text(const SuiteReport& report);

/// JSON object {"name":..,"pass":..,"rows":[{label,value,reference,error,
/// tolerance,pass},..]}.
std::string suite_to_json(const SuiteReport& report);

// -- closed-form / moment-engine suites --------------------------------------

/// Randomized-tuple identity checks: expanded vs decomposed variances at
/// both ports, the phase-ensemble route, and the conservation relation
/// traveling(a1)/T = traveling(a2)/R = sql (traveling derived through the
/// expanded route so the comparison is not circular). Relative tolerance 1e-12.
SuiteReport analytic_identity_suite(std::size_t tuples, std::uint64_t seed);

/// Moment-engine cross-check against the closed forms on the same randomized
/// tuples: field variances (1e-12 relative) and means on a 32-point time grid
/// (1e-12 absolute).
SuiteReport modal_equivalence_suite(std::size_t tuples, std::uint64_t seed);

/// The T = 1/2 spatial profile over one wavelength: minima T·sql at nodes,
/// maxima (T·sql + 2R E²) at antinodes, both exact to 1e-12, and strict
/// sub-baseline totals at the nodes.
SuiteReport node_profile_suite();

/// Open-port vs mirror-port photocurrent contrast for T in {0.25, 0.5, 0.75}:
/// open value 2T|alpha|² and position-free, node/open ratio T, antinode/open
/// ratio 1, all to 1e-12.
SuiteReport photocurrent_contrast_suite();

/// Loop-model checks: open-loop consistency at g = 0, monotone node-probe
/// sweep, deep out-of-loop suppression at g = 1e6 for a node out-probe, and
/// the antinode out-probe floor at the baseline.
SuiteReport feedback_suite();

// -- Fock-oracle suites -------------------------------------------------------

/// Field variances of the built port forms vs the moment rule over a spread
/// of (alpha, T, k z1) cases at unit weights. Absolute tolerance `tolerance`.
SuiteReport fock_field_agreement(int dim, const std::vector<double>& alphas,
                                 double tolerance = 1e-8);

/// Intensity-noise slope against |alpha|² at k z1 in {0, pi/4, pi/2} for
/// T = 1/2, fitted over |alpha| in {0.5, 1, 1.5, 2}; compared to the
/// closed-form slopes {0.5, 0.75, 1.0} at relative tolerance `rel_tolerance`.
SuiteReport fock_photocurrent_slopes(int dim, double rel_tolerance = 0.02);

/// Truncation convergence: field variances move by less than 1e-9 between
/// dim and dim+10 for |alpha| <= 2.
SuiteReport fock_convergence(int dim);

// -- Monte-Carlo suites --------------------------------------------------------

struct McParams {
    std::size_t n_samples = 1'000'000;
    std::uint64_t seed = 42;
    mc::AmplitudeModel amplitude_model = mc::AmplitudeModel::fixed;
    bool decorrelate_phases = false;
};

/// 16-cell (T, k z1) grid: ensemble variance within 5 standard errors of the
/// closed form, with one failing cell allowed.
SuiteReport mc_convergence_grid(const McParams& params);

/// Weighted least-squares fit of offset + amplitude·sin²(k z).
struct ModulationFit {
    double offset = 0.0;
    double amplitude = 0.0;
    double offset_sigma = 0.0;
    double amplitude_sigma = 0.0;
};

ModulationFit fit_standing_modulation(const std::vector<mc::ScanPoint>& points,
                                      double wavenumber);

/// Fits the spatial modulation of an ensemble z-scan and compares the fitted
/// amplitude to the closed-form 2E²Rv₁² at five fitted sigmas. With
/// params.decorrelate_phases the modulation collapses and the check fails,
/// which is the intended negative control.
SuiteReport mc_modulation_check(const McParams& params);

/// Negative control run: forces decorrelated phases and requires the fitted
/// modulation amplitude to be consistent with zero at three fitted sigmas.
SuiteReport mc_negative_control(const McParams& params);

}  // namespace bsnoise::validation
