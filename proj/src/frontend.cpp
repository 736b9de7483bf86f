#include "wursim/frontend.hpp"

#include <algorithm>
#include <cmath>

#include "wursim/errors.hpp"

namespace wursim {

void TransducerModel::validate() const {
    if (!(resonance_freq > 0.0)) throw ConfigError("transducer.resonance_freq must be > 0");
    if (!(bandwidth > 0.0)) throw ConfigError("transducer.bandwidth must be > 0");
    if (!(sensitivity > 0.0)) throw ConfigError("transducer.sensitivity must be > 0");
}

double RectifierModel::apply(double v) const {
    const double mag = std::abs(v);
    const double drop = mag < transistor_vth ? diode_drop : residual_drop;
    return std::max(0.0, mag - drop);
}

void RectifierModel::validate() const {
    if (!(residual_drop > 0.0 && residual_drop < diode_drop)) {
        throw ConfigError("rectifier: require 0 < residual_drop < diode_drop");
    }
    if (!(transistor_vth > 0.0)) throw ConfigError("rectifier.transistor_vth must be > 0");
}

void DemodParams::validate() const {
    if (!(bandpass_center > 0.0)) throw ConfigError("demod.bandpass_center must be > 0");
    if (!(bandpass_q > 0.0)) throw ConfigError("demod.bandpass_q must be > 0");
    if (!(insertion_gain > 0.0)) throw ConfigError("demod.insertion_gain must be > 0");
    if (!(input_clamp > 0.0)) throw ConfigError("demod.input_clamp must be > 0");
    if (!(envelope_tau > 0.0)) throw ConfigError("demod.envelope_tau must be > 0");
    if (!(fast_tau > 0.0 && fast_tau < slow_tau)) {
        throw ConfigError("demod: require 0 < fast_tau < slow_tau");
    }
    if (!(hysteresis >= 0.0)) throw ConfigError("demod.hysteresis must be >= 0");
}

std::size_t DigitalTrace::rising_edges() const {
    return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [](const Edge& e) { return e.level; }));
}

bool DigitalTrace::level_at(double t) const {
    bool level = initial_level;
    for (const auto& e : edges) {
        if (e.time > t) break;
        level = e.level;
    }
    return level;
}

namespace {

void require_volts(const Waveform& w, const char* stage) {
    if (w.unit != Unit::Volts) {
        throw UnitError(std::string(stage) + ": expected a volts waveform, got " + std::string(to_string(w.unit)));
    }
}

Waveform volts_like(const Waveform& in) {
    Waveform out;
    out.sample_rate = in.sample_rate;
    out.unit = Unit::Volts;
    out.samples.resize(in.size());
    return out;
}

}  // namespace

Waveform transduce(const Waveform& pressure, const TransducerModel& t) {
    if (pressure.unit != Unit::Pressure) {
        throw UnitError("transduce: expected a pressure waveform, got " + std::string(to_string(pressure.unit)));
    }
    t.validate();
    auto filter = Biquad::bandpass(t.resonance_freq, t.q(), pressure.sample_rate);
    Waveform out = volts_like(pressure);
    for (std::size_t n = 0; n < pressure.size(); ++n) {
        out.samples[n] = t.sensitivity * filter.process(pressure.samples[n]);
    }
    return out;
}

Waveform rectify(const Waveform& v, const RectifierModel& r) {
    require_volts(v, "rectify");
    r.validate();
    Waveform out = volts_like(v);
    std::transform(v.samples.begin(), v.samples.end(), out.samples.begin(), [&](double x) { return r.apply(x); });
    return out;
}

Waveform bandpass(const Waveform& v, const DemodParams& p) {
    require_volts(v, "bandpass");
    p.validate();
    auto filter = Biquad::bandpass(p.bandpass_center, p.bandpass_q, v.sample_rate);
    Waveform out = volts_like(v);
    for (std::size_t n = 0; n < v.size(); ++n) out.samples[n] = p.insertion_gain * filter.process(v.samples[n]);
    return out;
}

Waveform envelope(const Waveform& v, const DemodParams& p) {
    require_volts(v, "envelope");
    p.validate();
    OnePole lp(p.envelope_tau, v.sample_rate);
    Waveform out = volts_like(v);
    for (std::size_t n = 0; n < v.size(); ++n) {
        out.samples[n] = std::min(lp.process(std::max(0.0, v.samples[n])), p.input_clamp);
    }
    return out;
}

DigitalTrace comparator(const Waveform& env, const DemodParams& p) {
    require_volts(env, "comparator");
    p.validate();
    Comparator cmp(p, env.sample_rate);
    DigitalTrace trace;
    for (std::size_t n = 0; n < env.size(); ++n) {
        if (auto level = cmp.process(env.samples[n])) trace.edges.push_back({env.time_of(n), *level});
    }
    return trace;
}

}  // namespace wursim
