#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace wursim {

enum class Unit { Pressure, Volts };

std::string_view to_string(Unit unit);

/// Uniformly sampled real signal tagged with its physical unit.
struct Waveform {
    double sample_rate = 0.0;
    std::vector<double> samples;
    Unit unit = Unit::Pressure;

    [[nodiscard]] std::size_t size() const { return samples.size(); }
    [[nodiscard]] double duration() const {
        return sample_rate > 0.0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }
    [[nodiscard]] double time_of(std::size_t index) const {
        return static_cast<double>(index) / sample_rate;
    }

    /// Throws ConfigError if sample_rate <= 0 or any sample is not finite.
    void validate() const;
};

/// Sum of squared samples divided by the sample rate.
double signal_energy(const Waveform& w);

}  // namespace wursim
