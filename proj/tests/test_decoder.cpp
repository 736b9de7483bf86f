#include <doctest.h>

#include <algorithm>
#include <vector>

#include "wursim/decoder.hpp"
#include "wursim/errors.hpp"

using namespace wursim;

namespace {

struct Interval {
    double on, off;
};

// High intervals of an ideal comparator for the 10-bit frame starting at t0:
// each 1-bit is high for duty*T from its slot start. Extra copies delayed by
// `echo` model a reflection; overlapping intervals merge.
std::vector<Interval> frame_intervals(std::uint8_t uuid, double T, double t0, double duty = 0.5,
                                      double echo = -1.0) {
    std::vector<Interval> iv;
    for (int k = 0; k < 10; ++k) {
        const bool one = k < 2 || ((uuid >> (9 - k)) & 1);
        if (!one) continue;
        const double on = t0 + k * T;
        iv.push_back({on, on + duty * T});
        if (echo > 0.0) iv.push_back({on + echo, on + echo + duty * T});
    }
    std::sort(iv.begin(), iv.end(), [](auto& a, auto& b) { return a.on < b.on; });
    std::vector<Interval> merged;
    for (const auto& i : iv) {
        if (!merged.empty() && i.on <= merged.back().off) {
            merged.back().off = std::max(merged.back().off, i.off);
        } else {
            merged.push_back(i);
        }
    }
    return merged;
}

std::vector<DecoderEvent> to_events(const std::vector<Interval>& iv, double t_end) {
    std::vector<DecoderEvent> ev;
    for (const auto& i : iv) {
        ev.push_back(DecoderEvent::edge(i.on, true));
        ev.push_back(DecoderEvent::edge(i.off, false));
    }
    ev.push_back(DecoderEvent::tick(t_end));
    return ev;
}

DecoderState run(const DecoderConfig& cfg, const std::vector<DecoderEvent>& ev, DecoderState s = {}) {
    for (const auto& e : ev) s = decoder_feed(s, cfg, e);
    return s;
}

DecoderState decode(std::uint8_t sent, std::uint8_t assigned, double T, double echo = -1.0) {
    DecoderConfig cfg;
    cfg.assigned_uuid = assigned;
    return run(cfg, to_events(frame_intervals(sent, T, 0.0, 0.5, echo), 12 * T));
}

}  // namespace

TEST_CASE("sync at 5 ms, payload 0xA5, assigned 0xA5 wakes") {
    const auto s = decode(0xA5, 0xA5, 5e-3);
    CHECK(s.phase == DecoderPhase::Decided);
    CHECK(s.reference_period == doctest::Approx(5e-3));
    CHECK(s.shift_register == 0xA5);
    CHECK(wake_output(s));
}

TEST_CASE("same stream, assigned 0x5A, does not wake") {
    const auto s = decode(0xA5, 0x5A, 5e-3);
    CHECK(s.phase == DecoderPhase::Decided);
    CHECK_FALSE(s.match);
    CHECK_FALSE(wake_output(s));
}

TEST_CASE("100 bps stream decodes with the same config") {
    const auto s = decode(0xA5, 0xA5, 10e-3);
    CHECK(s.reference_period == doctest::Approx(10e-3));
    CHECK(wake_output(s));
}

TEST_CASE("wake output is false before the decision") {
    DecoderConfig cfg;
    cfg.assigned_uuid = 0xA5;
    const auto ev = to_events(frame_intervals(0xA5, 5e-3, 0.0), 60e-3);
    DecoderState s;
    for (const auto& e : ev) {
        s = decoder_feed(s, cfg, e);
        if (s.phase == DecoderPhase::Sampling && s.bits_sampled == 3) CHECK_FALSE(wake_output(s));
        if (s.phase != DecoderPhase::Decided) CHECK_FALSE(wake_output(s));
    }
    CHECK(wake_output(s));
}

TEST_CASE("sampling instants sit at t2 + (k + offset) T") {
    DecoderConfig cfg;
    DecoderState s;
    s.reference_edge_time = 7.5e-3;
    s.reference_period = 5e-3;
    CHECK(sampling_instant(s, cfg, 0) == doctest::Approx(7.5e-3 + 0.75 * 5e-3));
    CHECK(sampling_instant(s, cfg, 7) == doctest::Approx(7.5e-3 + 7.75 * 5e-3));
}

TEST_CASE("rate adaptivity: every uuid for periods from 2.5 to 10 ms") {
    for (double T : {2.5e-3, 3.3e-3, 4.1e-3, 5e-3, 6.7e-3, 8.2e-3, 10e-3}) {
        int wrong = 0;
        for (int u = 0; u < 256; ++u) {
            const auto s = decode(static_cast<std::uint8_t>(u), static_cast<std::uint8_t>(u), T);
            if (!wake_output(s) || s.shift_register != u) ++wrong;
        }
        INFO("T = " << T);
        CHECK(wrong == 0);
    }
}

TEST_CASE("uniqueness: exactly one received uuid wakes a given receiver") {
    for (int assigned : {0x00, 0x01, 0x5A, 0xA5, 0xFF}) {
        int wakes = 0;
        for (int sent = 0; sent < 256; ++sent) {
            wakes += wake_output(decode(static_cast<std::uint8_t>(sent), static_cast<std::uint8_t>(assigned), 5e-3));
        }
        CHECK(wakes == 1);
    }
}

TEST_CASE("a 3.1 ms echo never reaches a sampling instant") {
    int changed = 0;
    for (int u = 0; u < 256; ++u) {
        const auto s = decode(static_cast<std::uint8_t>(u), static_cast<std::uint8_t>(u), 5e-3, 3.1e-3);
        if (!wake_output(s)) ++changed;
    }
    CHECK(changed == 0);
}

TEST_CASE("a one-bit-period echo corrupts every frame with a 1->0 transition") {
    for (int u = 0; u < 256; ++u) {
        const auto s = decode(static_cast<std::uint8_t>(u), static_cast<std::uint8_t>(u), 5e-3, 5e-3);
        // The sync bits always end in a 1, so only 0xFF has no 1->0 step.
        if (u == 0xFF) {
            CHECK(wake_output(s));
        } else {
            CHECK_FALSE(wake_output(s));
        }
    }
}

TEST_CASE("out-of-order events are a protocol error") {
    DecoderConfig cfg;
    auto s = decoder_feed({}, cfg, DecoderEvent::edge(1.0, true));
    CHECK_THROWS_AS(decoder_feed(s, cfg, DecoderEvent::edge(0.5, false)), ProtocolError);
    CHECK_THROWS_AS(decoder_feed(s, cfg, DecoderEvent::tick(0.99)), ProtocolError);
}

TEST_CASE("timeout resets sync and a later frame is still accepted") {
    DecoderConfig cfg;
    cfg.assigned_uuid = 0x3C;
    // A lone pulse, then silence past the timeout.
    std::vector<DecoderEvent> ev{DecoderEvent::edge(0.0, true), DecoderEvent::edge(2.5e-3, false),
                                 DecoderEvent::tick(2.5e-3 + cfg.max_sync_interval + 1e-3)};
    auto s = run(cfg, ev);
    CHECK(s.phase == DecoderPhase::AwaitFirstEdge);
    const double t0 = 0.2;
    std::vector<DecoderEvent> frame = to_events(frame_intervals(0x3C, 5e-3, t0), t0 + 60e-3);
    s = run(cfg, frame, s);
    CHECK(wake_output(s));
}

TEST_CASE("a pulse already high at power-up is not a sync edge") {
    DecoderConfig cfg;
    cfg.assigned_uuid = 0xA5;
    // Powered up in the middle of the preamble; its trailing edge comes 10 ms
    // before the first sync bit.
    auto s = DecoderState::power_on(0.04, true);
    s = decoder_feed(s, cfg, DecoderEvent::edge(0.05, false));
    CHECK(s.phase == DecoderPhase::AwaitFirstEdge);
    s = run(cfg, to_events(frame_intervals(0xA5, 5e-3, 0.06), 0.12), s);
    CHECK(wake_output(s));
}

TEST_CASE("decided state ignores further edges") {
    auto s = decode(0xA5, 0xA5, 5e-3);
    DecoderConfig cfg;
    cfg.assigned_uuid = 0xA5;
    s = run(cfg, to_events(frame_intervals(0x00, 5e-3, 1.0), 1.1), s);
    CHECK(wake_output(s));
}

TEST_CASE("config validation") {
    DecoderConfig cfg;
    cfg.sample_offset = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.sample_offset = 1.0;
    CHECK_NOTHROW(cfg.validate());
    cfg.max_sync_interval = 0.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
