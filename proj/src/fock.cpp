#include "bsnoise/fock.hpp"

#include <cmath>
#include <cstdio>

namespace bsnoise::fock {

namespace {

/// Stride of mode `j` in the row-major product basis (first mode slowest).
std::size_t stride_of(const TruncationSpec& spec, std::size_t j) {
    std::size_t s = 1;
    for (std::size_t i = j + 1; i < spec.modes.size(); ++i) {
        s *= static_cast<std::size_t>(spec.dim);
    }
    return s;
}

void check_form_modes(const TruncationSpec& spec,
                      const modal::Coefficients& terms) {
    for (const auto& [m, c] : terms) {
        spec.index_of(m);  // throws if absent
    }
}

}  // namespace

std::size_t TruncationSpec::total_dimension() const {
    if (dim < 2) {
        throw DimensionCapError("per-mode dimension must be at least 2");
    }
    std::size_t total = 1;
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (total > amplitude_cap / static_cast<std::size_t>(dim)) {
            throw DimensionCapError(
                "product space exceeds the amplitude cap of " +
                std::to_string(amplitude_cap));
        }
        total *= static_cast<std::size_t>(dim);
    }
    return total;
}

std::size_t TruncationSpec::index_of(const modal::ModeId& m) const {
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (modes[i] == m) return i;
    }
    throw DimensionMismatchError("mode '" + m.label +
                                 "' is not part of the truncation");
}

double coherent_truncation_deficit(double alpha_sq, int dim) {
    if (alpha_sq < 0.0) {
        throw TruncationError("|alpha|^2 must be nonnegative");
    }
    if (alpha_sq == 0.0) return 0.0;
    // Poisson tail P(N >= dim): leading term exp(-l) l^dim / dim!, then the
    // remaining factors 1 + l/(dim+1) + l^2/((dim+1)(dim+2)) + ...
    const double log_lead = -alpha_sq +
                            static_cast<double>(dim) * std::log(alpha_sq) -
                            std::lgamma(static_cast<double>(dim) + 1.0);
    long double term = 1.0L;
    long double series = 1.0L;
    for (int j = 1; j < 10000; ++j) {
        term *= static_cast<long double>(alpha_sq) /
                static_cast<long double>(dim + j);
        series += term;
        if (term < 1e-20L * series) break;
    }
    return std::exp(log_lead) * static_cast<double>(series);
}

StateVector build_coherent(
    const std::vector<std::pair<modal::ModeId, Complex>>& amplitudes,
    TruncationSpec spec) {
    spec.total_dimension();  // enforce the amplitude cap before allocating

    // per-mode coherent expansions
    std::vector<Eigen::VectorXcd> columns;
    columns.reserve(spec.modes.size());
    for (const modal::ModeId& m : spec.modes) {
        Complex alpha{0.0, 0.0};
        for (const auto& [am, aval] : amplitudes) {
            if (am == m) alpha = aval;
        }
        const double deficit = coherent_truncation_deficit(std::norm(alpha),
                                                           spec.dim);
        if (deficit > kDeficitGuard) {
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "truncation insufficient for |alpha|=%.3g at dim=%d "
                          "(deficit %.3g, guard %.3g); increase the dimension "
                          "or reduce the amplitude",
                          std::abs(alpha), spec.dim, deficit, kDeficitGuard);
            throw TruncationError(buf);
        }
        Eigen::VectorXcd col(spec.dim);
        Complex term = std::exp(-0.5 * std::norm(alpha));  // n = 0
        for (int n = 0; n < spec.dim; ++n) {
            col[n] = term;
            term *= alpha / std::sqrt(static_cast<double>(n + 1));
        }
        columns.push_back(std::move(col));
    }

    // outer product in mode order
    Eigen::VectorXcd v(1);
    v[0] = Complex{1.0, 0.0};
    for (const Eigen::VectorXcd& col : columns) {
        Eigen::VectorXcd next(v.size() * col.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            for (Eigen::Index n = 0; n < col.size(); ++n) {
                next[i * col.size() + n] = v[i] * col[n];
            }
        }
        v = std::move(next);
    }
    return StateVector{std::move(spec), std::move(v)};
}

StateVector apply_annihilation(const StateVector& psi, const modal::ModeId& m) {
    const std::size_t j = psi.spec.index_of(m);
    const std::size_t stride = stride_of(psi.spec, j);
    const std::size_t dim = static_cast<std::size_t>(psi.spec.dim);
    StateVector out{psi.spec, Eigen::VectorXcd::Zero(psi.amplitudes.size())};
    for (std::size_t idx = 0; idx < static_cast<std::size_t>(psi.amplitudes.size()); ++idx) {
        const std::size_t n = (idx / stride) % dim;
        if (n > 0) {
            out.amplitudes[static_cast<Eigen::Index>(idx - stride)] +=
                std::sqrt(static_cast<double>(n)) *
                psi.amplitudes[static_cast<Eigen::Index>(idx)];
        }
    }
    return out;
}

StateVector apply_creation(const StateVector& psi, const modal::ModeId& m) {
    const std::size_t j = psi.spec.index_of(m);
    const std::size_t stride = stride_of(psi.spec, j);
    const std::size_t dim = static_cast<std::size_t>(psi.spec.dim);
    StateVector out{psi.spec, Eigen::VectorXcd::Zero(psi.amplitudes.size())};
    for (std::size_t idx = 0; idx < static_cast<std::size_t>(psi.amplitudes.size()); ++idx) {
        const std::size_t n = (idx / stride) % dim;
        if (n + 1 < dim) {
            out.amplitudes[static_cast<Eigen::Index>(idx + stride)] +=
                std::sqrt(static_cast<double>(n + 1)) *
                psi.amplitudes[static_cast<Eigen::Index>(idx)];
        }
    }
    return out;
}

StateVector apply_field(const modal::LinearFieldForm& form,
                        const StateVector& psi) {
    check_form_modes(psi.spec, form.terms());
    StateVector out{psi.spec, Eigen::VectorXcd::Zero(psi.amplitudes.size())};
    for (const auto& [m, c] : form.terms()) {
        out.amplitudes += c * apply_annihilation(psi, m).amplitudes;
        out.amplitudes += std::conj(c) * apply_creation(psi, m).amplitudes;
    }
    return out;
}

StateVector apply_positive_part(const modal::Coefficients& positive_part,
                                const StateVector& psi) {
    check_form_modes(psi.spec, positive_part);
    StateVector out{psi.spec, Eigen::VectorXcd::Zero(psi.amplitudes.size())};
    for (const auto& [m, c] : positive_part) {
        out.amplitudes += c * apply_annihilation(psi, m).amplitudes;
    }
    return out;
}

StateVector apply_negative_part(const modal::Coefficients& positive_part,
                                const StateVector& psi) {
    check_form_modes(psi.spec, positive_part);
    StateVector out{psi.spec, Eigen::VectorXcd::Zero(psi.amplitudes.size())};
    for (const auto& [m, c] : positive_part) {
        out.amplitudes += std::conj(c) * apply_creation(psi, m).amplitudes;
    }
    return out;
}

double number_mean(const StateVector& psi, const modal::ModeId& m) {
    const StateVector lowered = apply_annihilation(psi, m);
    return lowered.norm_sq() / psi.norm_sq();
}

Complex annihilation_mean(const StateVector& psi, const modal::ModeId& m) {
    const StateVector lowered = apply_annihilation(psi, m);
    return psi.amplitudes.dot(lowered.amplitudes) / psi.norm_sq();
}

double commutator_mean(const StateVector& psi, const modal::ModeId& m) {
    const double lower = apply_annihilation(psi, m).norm_sq();
    const double raise = apply_creation(psi, m).norm_sq();
    return (raise - lower) / psi.norm_sq();
}

double field_mean(const modal::LinearFieldForm& form, const StateVector& psi) {
    const StateVector applied = apply_field(form, psi);
    return psi.amplitudes.dot(applied.amplitudes).real() / psi.norm_sq();
}

double field_variance(const modal::LinearFieldForm& form,
                      const StateVector& psi) {
    const StateVector applied = apply_field(form, psi);
    const double n2 = psi.norm_sq();
    const double second = applied.norm_sq() / n2;
    const double first = psi.amplitudes.dot(applied.amplitudes).real() / n2;
    return second - first * first;
}

double photocurrent_mean(const modal::Coefficients& positive_part,
                         const StateVector& psi) {
    const StateVector plus = apply_positive_part(positive_part, psi);
    return plus.norm_sq() / psi.norm_sq();
}

double photocurrent_variance_exact(const modal::Coefficients& positive_part,
                                   const StateVector& psi) {
    const StateVector plus = apply_positive_part(positive_part, psi);
    const StateVector current = apply_negative_part(positive_part, plus);
    const double n2 = psi.norm_sq();
    const double second = current.norm_sq() / n2;
    const double first = psi.amplitudes.dot(current.amplitudes).real() / n2;
    return second - first * first;
}

Eigen::MatrixXcd materialize_field(const modal::LinearFieldForm& form,
                                   const TruncationSpec& spec) {
    const std::size_t total = spec.total_dimension();
    if (total > 2048) {
        throw DimensionCapError(
            "dense materialization limited to 2048 amplitudes");
    }
    Eigen::MatrixXcd mat(total, total);
    for (std::size_t col = 0; col < total; ++col) {
        StateVector basis{spec, Eigen::VectorXcd::Zero(
                                     static_cast<Eigen::Index>(total))};
        basis.amplitudes[static_cast<Eigen::Index>(col)] = 1.0;
        mat.col(static_cast<Eigen::Index>(col)) =
            apply_field(form, basis).amplitudes;
    }
    return mat;
}

std::vector<double> occupation_distribution(const StateVector& psi,
                                            const modal::ModeId& m) {
    const std::size_t j = psi.spec.index_of(m);
    const std::size_t stride = stride_of(psi.spec, j);
    const std::size_t dim = static_cast<std::size_t>(psi.spec.dim);
    std::vector<double> dist(dim, 0.0);
    for (std::size_t idx = 0; idx < static_cast<std::size_t>(psi.amplitudes.size()); ++idx) {
        dist[(idx / stride) % dim] +=
            std::norm(psi.amplitudes[static_cast<Eigen::Index>(idx)]);
    }
    const double n2 = psi.norm_sq();
    for (double& p : dist) p /= n2;
    return dist;
}

std::string occupation_histograms_csv(const StateVector& psi) {
    std::string out = "mode,n,probability\n";
    char buf[64];
    for (const modal::ModeId& m : psi.spec.modes) {
        const std::vector<double> dist = occupation_distribution(psi, m);
        for (std::size_t n = 0; n < dist.size(); ++n) {
            std::snprintf(buf, sizeof(buf), "%s,%zu,%.17g\n", m.label.c_str(),
                          n, dist[n]);
            out += buf;
        }
    }
    return out;
}

}  // namespace bsnoise::fock
