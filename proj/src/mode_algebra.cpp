#include "bsnoise/mode_algebra.hpp"

#include <cmath>

#include <json.hpp>

namespace bsnoise::modal {

namespace {

using namespace std::complex_literals;

Complex phasor(double phase) {
    return {std::cos(phase), std::sin(phase)};
}

void check_splitter_args(double transmittance, const BeamSplitterPorts& p) {
    if (!(transmittance >= 0.0 && transmittance <= 1.0)) {
        throw ConfigError("beam splitter transmittance must lie in [0, 1]");
    }
    if (p.in_1 == p.in_2 || p.out_1 == p.out_2) {
        throw UnknownModeError("beam splitter ports must name distinct modes");
    }
}

}  // namespace

LinearFieldForm::LinearFieldForm(Coefficients terms) {
    for (auto& [m, c] : terms) {
        set(m, c);
    }
}

void LinearFieldForm::set(const ModeId& m, Complex c) {
    if (c == Complex{0.0, 0.0}) {
        terms_.erase(m);
    } else {
        terms_[m] = c;
    }
}

Complex LinearFieldForm::at(const ModeId& m) const {
    const auto it = terms_.find(m);
    return it == terms_.end() ? Complex{0.0, 0.0} : it->second;
}

void CoherentProductState::set_amplitude(const ModeId& m, Complex alpha) {
    amplitudes_[m] = alpha;
}

void CoherentProductState::set_weight(const ModeId& m, double weight_sq) {
    if (!(weight_sq >= 0.0)) {
        throw ConfigError("vacuum weight must be nonnegative");
    }
    weights_[m] = weight_sq;
}

Complex CoherentProductState::amplitude(const ModeId& m) const {
    const auto it = amplitudes_.find(m);
    return it == amplitudes_.end() ? Complex{0.0, 0.0} : it->second;
}

double CoherentProductState::weight(const ModeId& m) const {
    const auto it = weights_.find(m);
    return it == weights_.end() ? 1.0 : it->second;
}

double CoherentProductState::total_intensity() const {
    double sum = 0.0;
    for (const auto& [m, alpha] : amplitudes_) {
        sum += std::norm(alpha);
    }
    return sum;
}

// -- builders ---------------------------------------------------------------

LinearFieldForm build_field_free(const OpticalConfig& cfg, double t, double z) {
    const double phase = cfg.angular_frequency * t - cfg.wavenumber * z;
    LinearFieldForm form;
    form.set(mode("b"), 1i * cfg.field_unit * phasor(-phase));
    return form;
}

LinearFieldForm build_field_free_bidirectional(const OpticalConfig& cfg,
                                               double t, double z) {
    const double wt = cfg.angular_frequency * t;
    const double kz = cfg.wavenumber * z;
    const Complex scale = 1i * cfg.field_unit / std::sqrt(2.0);
    LinearFieldForm form;
    form.set(mode("bF"), scale * phasor(-(wt - kz)));
    form.set(mode("bB"), scale * phasor(-(wt + kz)));
    return form;
}

LinearFieldForm build_field_e1(const OpticalConfig& cfg, double t) {
    const double T = cfg.transmittance;
    const double R = cfg.reflectance();
    const double wt = cfg.angular_frequency * t;
    const double k = cfg.wavenumber;
    // creation-side coefficients; stored as their conjugates
    const Complex pref = -1i * cfg.field_unit / std::sqrt(2.0);
    const Complex d_b = pref * std::sqrt(T) * phasor(wt - k * cfg.Z1);
    const Complex d_a1 =
        pref * (phasor(wt + k * cfg.z1) - R * phasor(wt - k * cfg.z1));
    const Complex d_a2 = pref * (-std::sqrt(R * T)) * phasor(wt - k * cfg.z1);
    LinearFieldForm form;
    form.set(mode("b"), std::conj(d_b));
    form.set(mode("a1"), std::conj(d_a1));
    form.set(mode("a2"), std::conj(d_a2));
    return form;
}

LinearFieldForm build_field_e2(const OpticalConfig& cfg, double t) {
    const double T = cfg.transmittance;
    const double R = cfg.reflectance();
    const double wt = cfg.angular_frequency * t;
    const double k = cfg.wavenumber;
    const Complex pref = -1i * cfg.field_unit / std::sqrt(2.0);
    const Complex d_b = pref * (-std::sqrt(R)) * phasor(wt - k * cfg.Z2);
    const Complex d_a2 =
        pref * (phasor(wt + k * cfg.z2) - T * phasor(wt - k * cfg.z2));
    const Complex d_a1 = pref * (-std::sqrt(R * T)) * phasor(wt - k * cfg.z2);
    LinearFieldForm form;
    form.set(mode("b"), std::conj(d_b));
    form.set(mode("a1"), std::conj(d_a1));
    form.set(mode("a2"), std::conj(d_a2));
    return form;
}

Coefficients open_port_photocurrent_positive_part(double transmittance,
                                                  double field_unit, double t,
                                                  double z1,
                                                  double angular_frequency,
                                                  double wavenumber) {
    if (!(transmittance >= 0.0 && transmittance <= 1.0)) {
        throw ConfigError("transmittance must lie in [0, 1]");
    }
    const double R = 1.0 - transmittance;
    const double fwd = angular_frequency * t - wavenumber * z1;
    const double bwd = angular_frequency * t + wavenumber * z1;
    Coefficients c;
    c[mode("bF")] = field_unit * std::sqrt(transmittance) * phasor(-fwd);
    c[mode("bB")] = field_unit * std::sqrt(transmittance) * phasor(-bwd);
    c[mode("cF")] = field_unit * std::sqrt(R) * phasor(-fwd);
    c[mode("cB")] = field_unit * std::sqrt(R) * phasor(-bwd);
    return c;
}

Coefficients mirror_photocurrent_positive_part(const OpticalConfig& cfg,
                                               double t) {
    const double T = cfg.transmittance;
    const double R = cfg.reflectance();
    const double wt = cfg.angular_frequency * t;
    const double k = cfg.wavenumber;
    const double s = std::sin(k * cfg.z1);
    Coefficients c;
    c[mode("b")] = cfg.field_unit * std::sqrt(T) * phasor(-(wt - k * cfg.Z1));
    // forward/reflected interference folded into one effective magnitude
    c[mode("a1")] = cfg.field_unit * std::sqrt(T * T + 2.0 * R * s * s) *
                    phasor(-(wt + k * cfg.z1));
    c[mode("a2")] =
        -cfg.field_unit * std::sqrt(R * T) * phasor(-(wt - k * cfg.z1));
    return c;
}

CoherentProductState mirror_state(const OpticalConfig& cfg) {
    CoherentProductState state;
    state.set_amplitude(mode("b"), cfg.alpha);
    state.set_weight(mode("b"), cfg.weights.b);
    state.set_weight(mode("a1"), cfg.weights.a1);
    state.set_weight(mode("a2"), cfg.weights.a2);
    return state;
}

CoherentProductState open_port_state(Complex alpha,
                                     const OpenPortWeights& weights) {
    CoherentProductState state;
    state.set_amplitude(mode("bF"), alpha);
    state.set_weight(mode("bF"), weights.b_fwd);
    state.set_weight(mode("bB"), weights.b_bwd);
    state.set_weight(mode("cF"), weights.c_fwd);
    state.set_weight(mode("cB"), weights.c_bwd);
    return state;
}

// -- beam splitter ----------------------------------------------------------

LinearFieldForm apply_beam_splitter(const LinearFieldForm& form,
                                    double transmittance,
                                    const BeamSplitterPorts& ports) {
    check_splitter_args(transmittance, ports);
    for (const ModeId& out : {ports.out_1, ports.out_2}) {
        if (out != ports.in_1 && out != ports.in_2 &&
            form.at(out) != Complex{0.0, 0.0}) {
            throw UnknownModeError("output mode '" + out.label +
                                   "' already carries an unrelated term");
        }
    }
    const double rt = std::sqrt(transmittance);
    const double rr = std::sqrt(1.0 - transmittance);
    const Complex c1 = form.at(ports.in_1);
    const Complex c2 = form.at(ports.in_2);

    LinearFieldForm out = form;
    out.set(ports.in_1, 0.0);
    out.set(ports.in_2, 0.0);
    out.set(ports.out_1, rt * c1 + rr * c2);
    out.set(ports.out_2, -rr * c1 + rt * c2);
    return out;
}

CoherentProductState apply_beam_splitter(const CoherentProductState& state,
                                         double transmittance,
                                         const BeamSplitterPorts& ports) {
    check_splitter_args(transmittance, ports);
    const double T = transmittance;
    const double R = 1.0 - T;
    const double rt = std::sqrt(T);
    const double rr = std::sqrt(R);

    CoherentProductState out = state;
    const Complex a1 = state.amplitude(ports.in_1);
    const Complex a2 = state.amplitude(ports.in_2);
    const double w1 = state.weight(ports.in_1);
    const double w2 = state.weight(ports.in_2);

    for (const ModeId& o : {ports.out_1, ports.out_2}) {
        if (o != ports.in_1 && o != ports.in_2 &&
            (state.amplitude(o) != Complex{0.0, 0.0} ||
             state.weight(o) != 1.0)) {
            throw UnknownModeError("output mode '" + o.label +
                                   "' already present in state");
        }
    }

    out.set_amplitude(ports.in_1, 0.0);
    out.set_amplitude(ports.in_2, 0.0);
    out.set_weight(ports.in_1, 1.0);
    out.set_weight(ports.in_2, 1.0);
    out.set_amplitude(ports.out_1, rt * a1 + rr * a2);
    out.set_amplitude(ports.out_2, -rr * a1 + rt * a2);
    out.set_weight(ports.out_1, T * w1 + R * w2);
    out.set_weight(ports.out_2, R * w1 + T * w2);
    return out;
}

// -- moments ----------------------------------------------------------------

double mean(const LinearFieldForm& form, const CoherentProductState& state) {
    Complex sum{0.0, 0.0};
    for (const auto& [m, c] : form.terms()) {
        sum += c * state.amplitude(m);
    }
    return sum.real();
}

double variance(const LinearFieldForm& form,
                const CoherentProductState& state) {
    double var = 0.0;
    for (const auto& [m, c] : form.terms()) {
        var += std::norm(c) * state.weight(m);
    }
    return var;
}

double photocurrent_mean(const Coefficients& positive_part,
                         const CoherentProductState& state) {
    Complex sum{0.0, 0.0};
    for (const auto& [m, c] : positive_part) {
        sum += c * state.amplitude(m);
    }
    return std::norm(sum);
}

double photocurrent_variance(const Coefficients& positive_part,
                             const CoherentProductState& state) {
    double weighted = 0.0;
    for (const auto& [m, c] : positive_part) {
        weighted += std::norm(c) * state.weight(m);
    }
    return photocurrent_mean(positive_part, state) * weighted;
}

// -- serialization ----------------------------------------------------------

std::string form_to_json(const LinearFieldForm& form) {
    nlohmann::json doc;
    doc["terms"] = nlohmann::json::array();
    for (const auto& [m, c] : form.terms()) {
        doc["terms"].push_back(
            {{"mode", m.label}, {"re", c.real()}, {"im", c.imag()}});
    }
    return doc.dump(2);
}

LinearFieldForm form_from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text);
    LinearFieldForm form;
    for (const auto& term : doc.at("terms")) {
        form.set(mode(term.at("mode").get<std::string>()),
                 Complex{term.at("re").get<double>(),
                         term.at("im").get<double>()});
    }
    return form;
}

}  // namespace bsnoise::modal
