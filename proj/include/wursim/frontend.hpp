#pragma once

#include <optional>
#include <vector>

#include "wursim/filters.hpp"
#include "wursim/waveform.hpp"

namespace wursim {

/// Resonant piezo receiver: second-order band-pass at resonance, unity gain
/// there, scaled by the sensitivity.
struct TransducerModel {
    double resonance_freq = 28'000.0;  // Hz
    double bandwidth = 4'000.0;        // Hz (-3 dB), Q = resonance / bandwidth
    double sensitivity = 1.0;          // V per pressure unit

    [[nodiscard]] double q() const { return resonance_freq / bandwidth; }
    void validate() const;
};

/// Schottky full-wave bridge with a MOSFET negative-voltage converter: the
/// diodes set the drop until the signal exceeds the transistor threshold.
struct RectifierModel {
    double diode_drop = 0.3;      // V
    double transistor_vth = 0.6;  // V
    double residual_drop = 0.05;  // V, once the transistors conduct

    [[nodiscard]] double apply(double v) const;
    void validate() const;
};

struct DemodParams {
    double bandpass_center = 28'000.0;  // Hz
    double bandpass_q = 5.0;
    double insertion_gain = 1.0;    // matching network, linear
    double input_clamp = 1.8;       // V, comparator inputs cannot exceed the rail
    double envelope_tau = 0.1e-3;   // s
    double fast_tau = 0.05e-3;      // s, comparator + input
    double slow_tau = 1.0e-3;       // s, comparator - input
    double hysteresis = 10e-3;      // V

    void validate() const;
};

/// Comparator output transition at `time` to `level`.
struct Edge {
    double time = 0.0;
    bool level = false;

    bool operator==(const Edge&) const = default;
};

struct DigitalTrace {
    bool initial_level = false;
    std::vector<Edge> edges;

    [[nodiscard]] std::size_t rising_edges() const;
    /// Level held at time t (edges at exactly t already applied).
    [[nodiscard]] bool level_at(double t) const;
};

/// Streaming dual-time-constant comparator. The + input follows the
/// envelope through the fast RC, the - input through the slow RC; the
/// output latches between the +/-hysteresis thresholds.
class Comparator {
public:
    Comparator(const DemodParams& p, double sample_rate)
        : fast_(p.fast_tau, sample_rate), slow_(p.slow_tau, sample_rate), hysteresis_(p.hysteresis) {}

    /// Returns the new level when the output toggles.
    std::optional<bool> process(double env) {
        const double diff = fast_.process(env) - slow_.process(env);
        if (!level_ && diff > hysteresis_) {
            level_ = true;
            return level_;
        }
        if (level_ && diff < -hysteresis_) {
            level_ = false;
            return level_;
        }
        return std::nullopt;
    }

    [[nodiscard]] bool level() const { return level_; }

private:
    OnePole fast_;
    OnePole slow_;
    double hysteresis_;
    bool level_ = false;
};

Waveform transduce(const Waveform& pressure, const TransducerModel& t);
Waveform rectify(const Waveform& v, const RectifierModel& r);
Waveform bandpass(const Waveform& v, const DemodParams& p);
/// One-pole low-pass of the rectified signal; the output is limited to
/// input_clamp.
Waveform envelope(const Waveform& v, const DemodParams& p);
DigitalTrace comparator(const Waveform& env, const DemodParams& p);

}  // namespace wursim
