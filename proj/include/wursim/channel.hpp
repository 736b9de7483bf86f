#pragma once

#include <cstdint>
#include <vector>

#include "wursim/waveform.hpp"

namespace wursim {

/// Discrete reflected path, relative to the direct path.
struct Echo {
    double extra_path = 0.0;  // m, > 0
    double gain = 0.0;        // [0, 1)
};

/// Shallow-water link: power-law spreading, constant absorption at the
/// carrier, boundary coupling on both transducer faces, discrete echoes and
/// white Gaussian noise.
struct ChannelModel {
    double distance = 1.0;              // m
    double sound_speed = 1630.0;        // m/s
    double spreading_exponent = 2.0;    // 1 cylindrical, 2 spherical
    double absorption_db_per_km = 1.0;  // dB/km at the carrier
    double coupling = 0.993;            // boundary transmission coefficient
    std::vector<Echo> echoes;
    double noise_rms = 0.0;
    std::uint64_t rng_seed = 0;

    void validate() const;

    /// Linear amplitude factor of the direct path.
    [[nodiscard]] double direct_gain() const;
    [[nodiscard]] double direct_delay() const { return distance / sound_speed; }
};

/// Sum of delayed, attenuated copies of `tx` (direct + echoes) plus noise.
/// Delays are rounded to whole samples; the output is extended so the
/// latest copy is not truncated.
Waveform propagate(const Waveform& tx, const ChannelModel& ch);

/// Extra propagation time of a reflected path.
double echo_delay(double extra_path, double sound_speed);

/// Extra path length at which an echo lands exactly one bit period later.
double critical_reflection_distance(double bit_rate, double sound_speed);

}  // namespace wursim
