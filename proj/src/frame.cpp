#include "wursim/frame.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wursim/errors.hpp"

namespace wursim {

std::array<bool, kFrameBits> WakeupFrame::bits() const {
    std::array<bool, kFrameBits> out{};
    out[0] = true;
    out[1] = true;
    for (int k = 0; k < kUuidBits; ++k) {
        out[kSyncBits + k] = ((uuid >> (kUuidBits - 1 - k)) & 1U) != 0;
    }
    return out;
}

int WakeupFrame::ones_count() const {
    int n = 0;
    for (bool b : bits()) n += b ? 1 : 0;
    return n;
}

void WakeupFrame::validate() const {
    if (!(preamble_duration >= 0.0) || !std::isfinite(preamble_duration)) {
        throw ConfigError("frame.preamble_duration must be >= 0");
    }
    if (!(bit_rate > 0.0) || !std::isfinite(bit_rate)) {
        throw ConfigError("frame.bit_rate must be > 0");
    }
    if (guard_slots < 0) throw ConfigError("frame.guard_slots must be >= 0");
}

void ModulationParams::validate() const {
    if (!(carrier_freq > 0.0)) throw ConfigError("modulation.carrier_freq must be > 0");
    if (!(sample_rate >= 4.0 * carrier_freq)) {
        throw ConfigError("modulation.sample_rate must be >= 4 x carrier_freq (got " +
                          std::to_string(sample_rate) + " Hz for a " +
                          std::to_string(carrier_freq) + " Hz carrier)");
    }
    if (!(pulse_duty > 0.0 && pulse_duty <= 1.0)) {
        throw ConfigError("modulation.pulse_duty must be in (0, 1]");
    }
    if (!std::isfinite(tx_amplitude) || tx_amplitude < 0.0) {
        throw ConfigError("modulation.tx_amplitude must be finite and >= 0");
    }
}

namespace {

std::size_t to_index(double seconds, double sample_rate) {
    return static_cast<std::size_t>(std::llround(seconds * sample_rate));
}

std::size_t burst_length(const WakeupFrame& frame, const ModulationParams& params) {
    return to_index(params.pulse_duty * frame.bit_period(), params.sample_rate);
}

void write_carrier(std::vector<double>& out, std::size_t begin, std::size_t end,
                   const ModulationParams& params) {
    const double w = 2.0 * std::numbers::pi * params.carrier_freq / params.sample_rate;
    for (std::size_t n = begin; n < end; ++n) {
        out[n] = params.tx_amplitude * std::sin(w * static_cast<double>(n - begin));
    }
}

}  // namespace

std::size_t slot_start_index(const WakeupFrame& frame, const ModulationParams& params, int slot) {
    return to_index(frame.preamble_duration + frame.guard_duration() + slot * frame.bit_period(),
                    params.sample_rate);
}

Waveform modulate_frame(const WakeupFrame& frame, const ModulationParams& params) {
    frame.validate();
    params.validate();

    Waveform w;
    w.sample_rate = params.sample_rate;
    w.unit = Unit::Pressure;
    w.samples.assign(to_index(frame.duration(), params.sample_rate), 0.0);

    write_carrier(w.samples, 0, to_index(frame.preamble_duration, params.sample_rate), params);

    const auto bits = frame.bits();
    const std::size_t burst = burst_length(frame, params);
    for (int k = 0; k < kFrameBits; ++k) {
        if (!bits[k]) continue;
        const std::size_t begin = slot_start_index(frame, params, k);
        const std::size_t slot_end = std::min(slot_start_index(frame, params, k + 1), w.size());
        write_carrier(w.samples, begin, std::min(begin + burst, slot_end), params);
    }
    return w;
}

double pulse_energy(const WakeupFrame& frame, const ModulationParams& params) {
    frame.validate();
    params.validate();
    const std::size_t burst = burst_length(frame, params);
    const double w = 2.0 * std::numbers::pi * params.carrier_freq / params.sample_rate;
    double acc = 0.0;
    for (std::size_t n = 0; n < burst; ++n) {
        const double s = params.tx_amplitude * std::sin(w * static_cast<double>(n));
        acc += s * s;
    }
    return acc / params.sample_rate;
}

double frame_energy(const WakeupFrame& frame, const ModulationParams& params) {
    return signal_energy(modulate_frame(frame, params));
}

}  // namespace wursim
