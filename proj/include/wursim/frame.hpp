#pragma once

#include <array>
#include <cstdint>

#include "wursim/waveform.hpp"

namespace wursim {

inline constexpr int kSyncBits = 2;
inline constexpr int kUuidBits = 8;
inline constexpr int kFrameBits = kSyncBits + kUuidBits;

/// Wake-up frame: a power-delivering preamble tone, two sync ones, then the
/// 8-bit UUID (MSB first).
struct WakeupFrame {
    std::uint8_t uuid = 0;
    double preamble_duration = 0.0;  // s
    double bit_rate = 200.0;         // bit/s
    // Silent bit slots between the preamble and the first sync bit. Only
    // inserted when there is a preamble; lets preamble echoes die out before
    // the sync bits.
    int guard_slots = 2;

    [[nodiscard]] double bit_period() const { return 1.0 / bit_rate; }
    [[nodiscard]] double guard_duration() const {
        return preamble_duration > 0.0 ? guard_slots * bit_period() : 0.0;
    }
    [[nodiscard]] double duration() const {
        return preamble_duration + guard_duration() + kFrameBits / bit_rate;
    }
    /// Sync bits followed by the UUID, transmission order.
    [[nodiscard]] std::array<bool, kFrameBits> bits() const;
    [[nodiscard]] int ones_count() const;

    void validate() const;
};

struct ModulationParams {
    double carrier_freq = 28'000.0;  // Hz
    double sample_rate = 224'000.0;  // Hz
    double pulse_duty = 0.5;         // fraction of a bit slot carrying carrier for a 1
    double tx_amplitude = 1.0;       // source amplitude, pressure units

    void validate() const;
};

/// OOK synthesis: continuous carrier for the preamble, the silent guard,
/// then ten bit slots.
/// A 1-slot starts with a carrier burst of pulse_duty x bit period (phase
/// reset at the burst start); a 0-slot is exactly zero.
Waveform modulate_frame(const WakeupFrame& frame, const ModulationParams& params);

/// Energy of a single 1-bit burst (squared samples / sample rate).
double pulse_energy(const WakeupFrame& frame, const ModulationParams& params);

double frame_energy(const WakeupFrame& frame, const ModulationParams& params);

/// Sample index at which bit slot `slot` (0 = first sync bit) begins.
std::size_t slot_start_index(const WakeupFrame& frame, const ModulationParams& params, int slot);

}  // namespace wursim
