#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wursim/errors.hpp"
#include "wursim/frame.hpp"

using namespace wursim;

namespace {

// Independent synthesizer: evaluates the slot layout directly from times
// instead of reusing the library's index helpers.
std::vector<double> oracle_frame(const WakeupFrame& f, const ModulationParams& p) {
    const double fs = p.sample_rate;
    const double w = 2.0 * std::numbers::pi * p.carrier_freq / fs;
    const auto idx = [fs](double t) { return static_cast<long>(std::llround(t * fs)); };
    std::vector<double> x(static_cast<std::size_t>(idx(f.duration())), 0.0);
    for (long n = 0; n < idx(f.preamble_duration); ++n) x[n] = p.tx_amplitude * std::sin(w * n);
    const double T = 1.0 / f.bit_rate;
    const double data_start = f.preamble_duration + (f.preamble_duration > 0 ? f.guard_slots * T : 0.0);
    const long burst = idx(p.pulse_duty * T);
    for (int k = 0; k < kFrameBits; ++k) {
        const bool one = k < kSyncBits || ((f.uuid >> (kFrameBits - 1 - k)) & 1);
        if (!one) continue;
        const long start = idx(data_start + k * T);
        for (long n = 0; n < burst; ++n) x[start + n] = p.tx_amplitude * std::sin(w * n);
    }
    return x;
}

double rms(const std::vector<double>& x, std::size_t begin, std::size_t end) {
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) acc += x[i] * x[i];
    return std::sqrt(acc / static_cast<double>(end - begin));
}

}  // namespace

TEST_CASE("bit order: two sync ones then the UUID MSB first") {
    WakeupFrame f;
    f.uuid = 0xA5;
    const auto b = f.bits();
    const bool expect[kFrameBits] = {1, 1, 1, 0, 1, 0, 0, 1, 0, 1};
    for (int i = 0; i < kFrameBits; ++i) CHECK(b[i] == expect[i]);
    CHECK(f.ones_count() == 6);
}

TEST_CASE("50 ms preamble at 200 bps lasts 100 ms without guard slots") {
    WakeupFrame f;
    f.uuid = 0xA5;
    f.preamble_duration = 0.050;
    f.guard_slots = 0;
    ModulationParams p;
    CHECK(f.duration() == doctest::Approx(0.100).epsilon(1e-12));
    const auto w = modulate_frame(f, p);
    CHECK(std::abs(static_cast<long>(w.size()) - std::lround(p.sample_rate * 0.100)) <= 1);

    f.guard_slots = 2;
    CHECK(f.duration() == doctest::Approx(0.110).epsilon(1e-12));
}

TEST_CASE("no preamble means no guard") {
    WakeupFrame f;
    f.guard_slots = 5;
    CHECK(f.guard_duration() == 0.0);
    CHECK(f.duration() == doctest::Approx(10.0 / 200.0));
}

TEST_CASE("uuid 0x00 without preamble emits nothing outside the sync slots") {
    WakeupFrame f;
    ModulationParams p;
    const auto w = modulate_frame(f, p);
    const std::size_t sync_end = slot_start_index(f, p, kSyncBits);
    double outside = 0.0;
    for (std::size_t i = sync_end; i < w.size(); ++i) outside += w.samples[i] * w.samples[i];
    CHECK(outside == 0.0);
}

TEST_CASE("zero slots are exactly zero for every uuid") {
    ModulationParams p;
    for (int u = 0; u < 256; ++u) {
        WakeupFrame f;
        f.uuid = static_cast<std::uint8_t>(u);
        f.preamble_duration = 0.01;
        const auto w = modulate_frame(f, p);
        const auto bits = f.bits();
        for (int k = 0; k < kFrameBits; ++k) {
            if (bits[k]) continue;
            const auto b = slot_start_index(f, p, k), e = slot_start_index(f, p, k + 1);
            double peak = 0.0;
            for (auto i = b; i < e; ++i) peak = std::max(peak, std::abs(w.samples[i]));
            REQUIRE(peak == 0.0);
        }
    }
}

TEST_CASE("matches the direct-synthesis oracle sample by sample") {
    ModulationParams p;
    p.tx_amplitude = 2.5;
    for (double br : {100.0, 200.0, 400.0}) {
        for (int u : {0x00, 0x5A, 0xA5, 0xFF}) {
            WakeupFrame f;
            f.uuid = static_cast<std::uint8_t>(u);
            f.bit_rate = br;
            f.preamble_duration = 0.02;
            const auto w = modulate_frame(f, p);
            const auto o = oracle_frame(f, p);
            REQUIRE(w.size() == o.size());
            double worst = 0.0;
            for (std::size_t i = 0; i < o.size(); ++i) worst = std::max(worst, std::abs(w.samples[i] - o[i]));
            CHECK(worst < 1e-12);
        }
    }
}

TEST_CASE("uuid 0xFF at duty 0.5: every slot RMS is carrier RMS times sqrt(0.5)") {
    WakeupFrame f;
    f.uuid = 0xFF;
    ModulationParams p;
    p.tx_amplitude = 1.0;
    const auto w = modulate_frame(f, p);
    const auto o = oracle_frame(f, p);
    const double expected = (p.tx_amplitude / std::sqrt(2.0)) * std::sqrt(0.5);
    for (int k = 0; k < kFrameBits; ++k) {
        const auto b = slot_start_index(f, p, k), e = slot_start_index(f, p, k + 1);
        CHECK(rms(w.samples, b, e) == doctest::Approx(rms(o, b, e)).epsilon(1e-12));
        CHECK(rms(w.samples, b, e) == doctest::Approx(expected).epsilon(1e-3));
    }
}

TEST_CASE("frame energy decomposes into preamble plus per-pulse energy") {
    ModulationParams p;
    WakeupFrame zero, full;
    full.uuid = 0xFF;
    const double ep = pulse_energy(zero, p);
    CHECK(frame_energy(zero, p) == doctest::Approx(2.0 * ep).epsilon(1e-12));
    CHECK(frame_energy(full, p) - frame_energy(zero, p) == doctest::Approx(8.0 * ep).epsilon(1e-9));
    CHECK(frame_energy(full, p) > frame_energy(zero, p));
}

TEST_CASE("frame energy agrees with trapezoidal integration of the oracle") {
    WakeupFrame f;
    f.uuid = 0xA5;
    f.preamble_duration = 0.050;
    ModulationParams p;
    p.pulse_duty = 1.0;
    const auto o = oracle_frame(f, p);
    const double dt = 1.0 / p.sample_rate;
    double trap = 0.0;
    for (std::size_t i = 0; i + 1 < o.size(); ++i) trap += 0.5 * (o[i] * o[i] + o[i + 1] * o[i + 1]) * dt;
    // Continuous-time value: A^2/2 per second of carrier.
    const double on_time = 0.050 + f.ones_count() / f.bit_rate;
    CHECK(frame_energy(f, p) == doctest::Approx(trap).epsilon(1e-3));
    CHECK(frame_energy(f, p) == doctest::Approx(0.5 * on_time).epsilon(1e-3));
}

TEST_CASE("invalid modulation parameters are rejected") {
    WakeupFrame f;
    ModulationParams p;
    p.sample_rate = 100'000.0;  // < 4 x 28 kHz
    CHECK_THROWS_AS(modulate_frame(f, p), ConfigError);
    p = {};
    p.pulse_duty = 0.0;
    CHECK_THROWS_AS(modulate_frame(f, p), ConfigError);
    p.pulse_duty = 1.01;
    CHECK_THROWS_AS(modulate_frame(f, p), ConfigError);
    p = {};
    f.bit_rate = 0.0;
    CHECK_THROWS_AS(modulate_frame(f, p), ConfigError);
    f.bit_rate = 200.0;
    f.preamble_duration = -1.0;
    CHECK_THROWS_AS(modulate_frame(f, p), ConfigError);
}
