#include "wursim/channel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "wursim/errors.hpp"

namespace wursim {

void ChannelModel::validate() const {
    if (!(distance > 0.0) || !std::isfinite(distance)) throw ConfigError("channel.distance must be > 0");
    if (!(sound_speed > 0.0)) throw ConfigError("channel.sound_speed must be > 0");
    if (!(spreading_exponent >= 0.0)) throw ConfigError("channel.spreading_exponent must be >= 0");
    if (!(absorption_db_per_km >= 0.0)) throw ConfigError("channel.absorption_db_per_km must be >= 0");
    if (!(coupling > 0.0 && coupling <= 1.0)) throw ConfigError("channel.coupling must be in (0, 1]");
    if (!(noise_rms >= 0.0) || !std::isfinite(noise_rms)) throw ConfigError("channel.noise_rms must be >= 0");
    for (std::size_t i = 0; i < echoes.size(); ++i) {
        const auto& e = echoes[i];
        const std::string at = "channel.echoes[" + std::to_string(i) + "]";
        if (!(e.extra_path > 0.0)) throw ConfigError(at + ".extra_path must be > 0");
        if (!(e.gain >= 0.0 && e.gain < 1.0)) throw ConfigError(at + ".gain must be in [0, 1)");
    }
}

double ChannelModel::direct_gain() const {
    const double spreading = std::pow(distance, -spreading_exponent);
    const double absorption = std::pow(10.0, -absorption_db_per_km * distance / 20.0 / 1000.0);
    return coupling * coupling * spreading * absorption;
}

Waveform propagate(const Waveform& tx, const ChannelModel& ch) {
    tx.validate();
    ch.validate();

    struct Tap {
        std::size_t delay;
        double gain;
    };
    const double g0 = ch.direct_gain();
    const auto to_samples = [&](double seconds) {
        return static_cast<std::size_t>(std::llround(seconds * tx.sample_rate));
    };
    std::vector<Tap> taps{{to_samples(ch.direct_delay()), g0}};
    for (const auto& e : ch.echoes) {
        taps.push_back({to_samples(ch.direct_delay() + echo_delay(e.extra_path, ch.sound_speed)), g0 * e.gain});
    }
    std::size_t max_delay = 0;
    for (const auto& t : taps) max_delay = std::max(max_delay, t.delay);

    Waveform rx;
    rx.sample_rate = tx.sample_rate;
    rx.unit = tx.unit;
    rx.samples.assign(tx.size() + max_delay, 0.0);
    for (const auto& t : taps) {
        if (t.gain == 0.0) continue;
        for (std::size_t n = 0; n < tx.size(); ++n) rx.samples[n + t.delay] += t.gain * tx.samples[n];
    }

    if (ch.noise_rms > 0.0) {
        std::mt19937_64 rng(ch.rng_seed);
        std::normal_distribution<double> noise(0.0, ch.noise_rms);
        for (double& s : rx.samples) s += noise(rng);
    }
    return rx;
}

double echo_delay(double extra_path, double sound_speed) {
    if (!(extra_path > 0.0) || !(sound_speed > 0.0)) {
        throw DomainError("echo_delay: extra_path and sound_speed must be > 0");
    }
    return extra_path / sound_speed;
}

double critical_reflection_distance(double bit_rate, double sound_speed) {
    if (!(bit_rate > 0.0) || !(sound_speed > 0.0)) {
        throw DomainError("critical_reflection_distance: bit_rate and sound_speed must be > 0");
    }
    // One bit period times the sound speed, as a single correctly rounded division.
    return sound_speed / bit_rate;
}

}  // namespace wursim
