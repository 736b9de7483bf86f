#include "wursim/decoder.hpp"

#include <cmath>
#include <string>

#include "wursim/errors.hpp"
#include "wursim/frame.hpp"

namespace wursim {

void DecoderConfig::validate() const {
    if (!(sample_offset > 0.0 && sample_offset <= 1.0)) throw ConfigError("decoder.sample_offset must be in (0, 1]");
    if (!(max_sync_interval > 0.0)) throw ConfigError("decoder.max_sync_interval must be > 0");
}

std::string_view to_string(DecoderPhase phase) {
    switch (phase) {
        case DecoderPhase::AwaitFirstEdge: return "await_first_edge";
        case DecoderPhase::AwaitSecondEdge: return "await_second_edge";
        case DecoderPhase::Sampling: return "sampling";
        case DecoderPhase::Decided: return "decided";
    }
    return "unknown";
}

DecoderState DecoderState::power_on(double t, bool level) {
    DecoderState s;
    s.level = level;
    s.last_time = t;
    return s;
}

double sampling_instant(const DecoderState& state, const DecoderConfig& cfg, int bit) {
    return state.reference_edge_time + (bit + cfg.sample_offset) * state.reference_period;
}

namespace {

// Takes every pending sample strictly before t (or at t when inclusive) at
// the currently held level.
void take_samples(DecoderState& s, const DecoderConfig& cfg, double t, bool inclusive) {
    while (s.phase == DecoderPhase::Sampling) {
        const double instant = sampling_instant(s, cfg, s.bits_sampled);
        if (instant > t || (!inclusive && instant == t)) return;
        s.shift_register = static_cast<std::uint8_t>((s.shift_register << 1) | (s.level ? 1U : 0U));
        ++s.bits_sampled;
        if (s.bits_sampled == kUuidBits) {
            s.phase = DecoderPhase::Decided;
            s.match = s.shift_register == cfg.assigned_uuid;
            s.decision_time = instant;
        }
    }
}

void expire_sync(DecoderState& s, const DecoderConfig& cfg, double t) {
    if (s.phase == DecoderPhase::AwaitSecondEdge && t - s.first_edge_time > cfg.max_sync_interval) {
        s.phase = DecoderPhase::AwaitFirstEdge;
    }
}

}  // namespace

DecoderState decoder_feed(const DecoderState& state, const DecoderConfig& cfg, const DecoderEvent& event) {
    if (event.time < state.last_time) {
        throw ProtocolError("decoder event at t=" + std::to_string(event.time) + " precedes last event at t=" +
                            std::to_string(state.last_time));
    }
    DecoderState s = state;
    s.last_time = event.time;
    if (s.phase == DecoderPhase::Decided) {
        if (event.kind == DecoderEvent::Kind::Edge) s.level = event.level;
        return s;
    }

    if (event.kind == DecoderEvent::Kind::Tick) {
        take_samples(s, cfg, event.time, true);
        expire_sync(s, cfg, event.time);
        return s;
    }

    take_samples(s, cfg, event.time, false);
    expire_sync(s, cfg, event.time);

    const bool rising = !s.level && event.level;
    const bool falling = s.level && !event.level && s.rise_seen;
    s.level = event.level;
    if (rising) s.rise_seen = true;
    if (!falling) return s;

    switch (s.phase) {
        case DecoderPhase::AwaitFirstEdge:
            s.first_edge_time = event.time;
            s.phase = DecoderPhase::AwaitSecondEdge;
            break;
        case DecoderPhase::AwaitSecondEdge:
            if (event.time <= s.first_edge_time) break;
            s.reference_edge_time = event.time;
            s.reference_period = event.time - s.first_edge_time;
            s.bits_sampled = 0;
            s.shift_register = 0;
            s.phase = DecoderPhase::Sampling;
            break;
        case DecoderPhase::Sampling:
        case DecoderPhase::Decided:
            break;
    }
    return s;
}

bool wake_output(const DecoderState& state) {
    return state.phase == DecoderPhase::Decided && state.match;
}

}  // namespace wursim
