#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bsnoise/mode_algebra.hpp"

namespace bsnoise::fock {

using Complex = std::complex<double>;

/// Coherent amplitude too large for the requested per-mode dimension
/// (truncation deficit above the guard threshold).
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Product Hilbert space would exceed the amplitude cap.
class DimensionCapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operator and state built on different truncations.
class DimensionMismatchError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Maximum truncation deficit tolerated when building a coherent state.
inline constexpr double kDeficitGuard = 1e-10;

/// Per-mode Fock dimension plus the ordered mode list of the product space.
struct TruncationSpec {
    int dim = 40;
    std::vector<modal::ModeId> modes;
    std::size_t amplitude_cap = 1'000'000;

    /// dim^n; throws DimensionCapError beyond amplitude_cap.
    std::size_t total_dimension() const;
    /// Position of a mode in the ordering; throws DimensionMismatchError if absent.
    std::size_t index_of(const modal::ModeId& m) const;

    friend bool operator==(const TruncationSpec& a, const TruncationSpec& b) {
        return a.dim == b.dim && a.modes == b.modes;
    }
};

/// State vector over the product number basis. The squared norm of a coherent
/// product state equals one minus its total truncation deficit.
struct StateVector {
    TruncationSpec spec;
    Eigen::VectorXcd amplitudes;

    double norm_sq() const { return amplitudes.squaredNorm(); }
};

/// Probability weight of a coherent state above the Fock cutoff:
/// the Poisson(|alpha|²) tail at n >= dim. Evaluated from the tail series
/// directly, so tiny deficits do not cancel away.
double coherent_truncation_deficit(double alpha_sq, int dim);

/// Product coherent state |alpha_1> ⊗ ... over spec.modes; modes without a
/// listed amplitude are vacuum. Throws TruncationError when any per-mode
/// deficit exceeds kDeficitGuard, DimensionCapError when the space is too big.
StateVector build_coherent(
    const std::vector<std::pair<modal::ModeId, Complex>>& amplitudes,
    TruncationSpec spec);

// -- operator application (matrix-free) -------------------------------------

StateVector apply_annihilation(const StateVector& psi, const modal::ModeId& m);
StateVector apply_creation(const StateVector& psi, const modal::ModeId& m);

/// E|psi> for the Hermitian form  E = sum_i ( c_i a_i + conj(c_i) a_i† ).
StateVector apply_field(const modal::LinearFieldForm& form,
                        const StateVector& psi);

/// E(+)|psi> = sum_i c_i a_i |psi>.
StateVector apply_positive_part(const modal::Coefficients& positive_part,
                                const StateVector& psi);

/// E(-)|psi> = sum_i conj(c_i) a_i† |psi>.
StateVector apply_negative_part(const modal::Coefficients& positive_part,
                                const StateVector& psi);

// -- expectation values ------------------------------------------------------

/// <n> of one mode.
double number_mean(const StateVector& psi, const modal::ModeId& m);

/// <a> of one mode (alpha for a coherent state, up to truncation).
Complex annihilation_mean(const StateVector& psi, const modal::ModeId& m);

/// <a a† - a† a>; 1 on states far from the truncation edge.
double commutator_mean(const StateVector& psi, const modal::ModeId& m);

/// <psi|E|psi> / <psi|psi> of the Hermitian form (twice the coefficient-rule
/// mean, which follows the half/real-part convention of the closed forms).
double field_mean(const modal::LinearFieldForm& form, const StateVector& psi);

/// <E²> - <E>² by direct contraction.
double field_variance(const modal::LinearFieldForm& form,
                      const StateVector& psi);

/// <I> for I = E(-) E(+).
double photocurrent_mean(const modal::Coefficients& positive_part,
                         const StateVector& psi);

/// Exact <I²> - <I>² in the truncated space.
double photocurrent_variance_exact(const modal::Coefficients& positive_part,
                                   const StateVector& psi);

// -- introspection -----------------------------------------------------------

/// Dense matrix of the Hermitian form; only for small spaces
/// (total dimension <= 2048), used by structural tests.
Eigen::MatrixXcd materialize_field(const modal::LinearFieldForm& form,
                                   const TruncationSpec& spec);

/// Marginal occupation distribution P(n) of one mode.
std::vector<double> occupation_distribution(const StateVector& psi,
                                            const modal::ModeId& m);

/// CSV dump `mode,n,probability` of the occupation histograms of every mode.
std::string occupation_histograms_csv(const StateVector& psi);

}  // namespace bsnoise::fock
