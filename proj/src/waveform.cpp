#include "wursim/waveform.hpp"

#include <cmath>
#include <string>

#include "wursim/errors.hpp"

namespace wursim {

std::string_view to_string(Unit unit) {
    switch (unit) {
        case Unit::Pressure: return "pressure";
        case Unit::Volts: return "volts";
    }
    return "unknown";
}

void Waveform::validate() const {
    if (!(sample_rate > 0.0) || !std::isfinite(sample_rate)) {
        throw ConfigError("waveform sample_rate must be positive");
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!std::isfinite(samples[i])) {
            throw ConfigError("waveform sample " + std::to_string(i) + " is not finite");
        }
    }
}

double signal_energy(const Waveform& w) {
    double acc = 0.0;
    for (double s : w.samples) acc += s * s;
    return acc / w.sample_rate;
}

}  // namespace wursim
