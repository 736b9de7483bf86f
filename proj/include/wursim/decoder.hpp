#pragma once

#include <cstdint>
#include <string_view>

namespace wursim {

struct DecoderConfig {
    std::uint8_t assigned_uuid = 0;
    double max_sync_interval = 40e-3;  // s, timeout waiting for the second sync edge
    double sample_offset = 0.75;       // fraction of the reference period after each slot boundary

    void validate() const;
};

enum class DecoderPhase { AwaitFirstEdge, AwaitSecondEdge, Sampling, Decided };

std::string_view to_string(DecoderPhase phase);

/// Comparator transition (Edge) or a pure time advance (Tick). Ticks let the
/// decoder take level samples and expire timeouts while the line is quiet.
struct DecoderEvent {
    enum class Kind { Edge, Tick };
    Kind kind = Kind::Tick;
    double time = 0.0;
    bool level = false;  // new comparator level, Edge only

    static DecoderEvent edge(double t, bool level) { return {Kind::Edge, t, level}; }
    static DecoderEvent tick(double t) { return {Kind::Tick, t, false}; }
};

/// Adaptive-rate address decoder.
///
/// The two sync ones are timed by their trailing (falling) comparator edges;
/// their spacing becomes the reference period T. Payload bit k (MSB first)
/// is the comparator level held at t2 + (k + sample_offset) * T, t2 being
/// the second sync edge. A falling edge only counts when its rising edge was
/// observed too, so a preamble already on at power-up is skipped.
struct DecoderState {
    DecoderPhase phase = DecoderPhase::AwaitFirstEdge;
    bool level = false;              // comparator level as last seen
    bool rise_seen = false;          // current high period began while powered
    double last_time = 0.0;
    double first_edge_time = 0.0;
    double reference_edge_time = 0.0;
    double reference_period = 0.0;   // valid once phase >= Sampling
    int bits_sampled = 0;
    std::uint8_t shift_register = 0;
    bool match = false;
    double decision_time = 0.0;

    /// Fresh decoder powered up at time t with the comparator at `level`.
    static DecoderState power_on(double t, bool level);
};

/// Time at which payload bit `bit` is sampled; meaningful once Sampling.
double sampling_instant(const DecoderState& state, const DecoderConfig& cfg, int bit);

DecoderState decoder_feed(const DecoderState& state, const DecoderConfig& cfg, const DecoderEvent& event);

/// True iff the decoder has decided on a UUID match.
bool wake_output(const DecoderState& state);

}  // namespace wursim
