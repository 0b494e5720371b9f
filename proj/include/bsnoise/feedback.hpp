#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "bsnoise/config.hpp"

namespace bsnoise::feedback {

class GainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Steady-state proportional loop acting on the photocurrent measured at
/// port a1. The loop divides the common-mode share of the noise -- the
/// carrier-borne bracket v_b² + R v₂² + T v₁² -- by (1+g)²; the mirror-side
/// standing terms are not inside the loop and pass through unchanged.
///
/// Detection inefficiency is modeled as a beam splitter of transmittance eta
/// in front of the detector: the loop gain is reduced to eta·g and the
/// measured channel picks up a (1-eta)/eta unit-vacuum penalty.
struct FeedbackSpec {
    double gain = 0.0;                  // g >= 0
    double probe_z1 = 0.0;              // in-loop probe position
    double out_probe_z2 = 0.0;          // out-of-loop probe position
    double detection_efficiency = 1.0;  // eta in (0, 1]
};

/// In-loop vs out-of-loop variances at one gain.
/// sub_sql_out marks a deep reduction: out_a2 below one tenth of the
/// baseline, the margin the node-selectivity claim is judged at.
struct LoopReport {
    double gain = 0.0;
    double inloop = 0.0;           // measured photocurrent variance
    double out_a2 = 0.0;           // field variance at port a2
    double open_loop_a2 = 0.0;     // same probe with the loop open
    double sql = 0.0;
    bool sub_sql_out = false;
};

/// Margin factor for sub_sql_out.
inline constexpr double kDeepSubSqlMargin = 0.1;

/// Evaluates the loop model. At g = 0 and eta = 1 this takes the open-loop
/// code path, so it reproduces the closed-form variances identically.
/// Throws GainError on negative or non-finite gain.
LoopReport run_loop(const OpticalConfig& cfg, const FeedbackSpec& spec);

/// run_loop across an ascending gain grid. Throws EmptyRangeError on an
/// empty grid.
std::vector<LoopReport> gain_sweep(const OpticalConfig& cfg,
                                   const FeedbackSpec& spec,
                                   const std::vector<double>& gains);

/// CSV with header `g,inloop,out_a2,open_loop_a2,sql,sub_sql_out`.
std::string sweep_to_csv(const std::vector<LoopReport>& reports);

/// JSON array with the same keys per entry.
std::string sweep_to_json(const std::vector<LoopReport>& reports);

}  // namespace bsnoise::feedback
