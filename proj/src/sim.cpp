#include "wursim/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "wursim/errors.hpp"

namespace wursim {

void SimOptions::validate() const {
    if (decimation < 1) throw ConfigError("sim.decimation must be >= 1");
    if (!(input_resistance > 0.0)) throw ConfigError("sim.input_resistance must be > 0");
    if (!(tail_duration >= 0.0)) throw ConfigError("sim.tail_duration must be >= 0");
    if (!(initial_v_cap >= 0.0)) throw ConfigError("sim.initial_v_cap must be >= 0");
}

void Scenario::validate() const {
    frame.validate();
    modulation.validate();
    channel.validate();
    transducer.validate();
    rectifier.validate();
    demod.validate();
    harvester.validate();
    load.validate();
    decoder.validate();
    sim.validate();

    const double carrier_period = 1.0 / modulation.carrier_freq;
    if (!(demod.envelope_tau >= 2.0 * carrier_period)) {
        throw ConfigError("demod.envelope_tau must be >= 2 carrier periods");
    }
    if (!(demod.envelope_tau <= 0.5 * frame.bit_period())) {
        throw ConfigError("demod.envelope_tau must be <= half a bit period");
    }
    if (demod.bandpass_center >= 0.5 * modulation.sample_rate ||
        transducer.resonance_freq >= 0.5 * modulation.sample_rate) {
        throw ConfigError("filter centre frequencies must lie below Nyquist");
    }
}

namespace {

DecoderEvent to_event(const Edge& e) { return DecoderEvent::edge(e.time, e.level); }

double phase_load(const LoadProfile& load, bool powered, DecoderPhase phase) {
    if (!powered) return load.p_idle;
    switch (phase) {
        case DecoderPhase::AwaitSecondEdge:
        case DecoderPhase::Sampling: return load.p_decode;
        case DecoderPhase::AwaitFirstEdge:
        case DecoderPhase::Decided: return load.p_listen;
    }
    return load.p_listen;
}

}  // namespace

ScenarioResult run_scenario(const Scenario& s) {
    s.validate();

    const double fs = s.modulation.sample_rate;
    Waveform tx = modulate_frame(s.frame, s.modulation);
    tx.samples.resize(tx.size() + static_cast<std::size_t>(std::llround(s.sim.tail_duration * fs)), 0.0);
    ChannelModel ch = s.channel;
    ch.rng_seed = s.seed;
    const Waveform rx = propagate(tx, ch);

    Biquad transducer = Biquad::bandpass(s.transducer.resonance_freq, s.transducer.q(), fs);
    Biquad demod_bp = Biquad::bandpass(s.demod.bandpass_center, s.demod.bandpass_q, fs);
    OnePole env(s.demod.envelope_tau, fs);
    Comparator cmp(s.demod, fs);

    ScenarioResult result;
    HarvesterState hs;
    hs.v_cap = s.sim.initial_v_cap;
    result.initial_cap_energy = 0.5 * s.harvester.c_store * hs.v_cap * hs.v_cap;
    result.peak_v_cap = hs.v_cap;

    bool powered = false;
    bool decided = false;
    DecoderState dec;

    std::size_t window_first_edge = 0;  // index into edge_trace
    std::size_t window_count = 0;
    double sum_r = 0.0;
    double sum_r2 = 0.0;

    const std::size_t n_samples = rx.size();
    const auto decimation = static_cast<std::size_t>(s.sim.decimation);
    for (std::size_t n = 0; n < n_samples; ++n) {
        const double v = s.transducer.sensitivity * transducer.process(rx.samples[n]);

        const double r = s.rectifier.apply(v);
        sum_r += r;
        sum_r2 += r * r;
        ++window_count;

        const double d = s.rectifier.apply(s.demod.insertion_gain * demod_bp.process(v));
        if (auto level = cmp.process(std::min(env.process(d), s.demod.input_clamp))) {
            result.edge_trace.push_back({static_cast<double>(n) / fs, *level, false});
        }

        if (window_count < decimation && n + 1 < n_samples) continue;

        // Harvester tick closing the window (t_end exclusive of sample n+1).
        const double t_end = static_cast<double>(n + 1) / fs;
        const double dt = static_cast<double>(window_count) / fs;

        if (powered && !decided) {
            for (std::size_t i = window_first_edge; i < result.edge_trace.size(); ++i) {
                auto& e = result.edge_trace[i];
                dec = decoder_feed(dec, s.decoder, to_event({e.time, e.level}));
                e.delivered = true;
            }
            dec = decoder_feed(dec, s.decoder, DecoderEvent::tick(t_end));
            if (dec.phase == DecoderPhase::Decided) {
                decided = true;
                result.decoded_uuid = dec.shift_register;
                if (dec.match) {
                    result.woke = true;
                    result.time_to_wake = dec.decision_time;
                }
            }
        }

        const double mean_r = sum_r / static_cast<double>(window_count);
        const double power_in = sum_r2 / static_cast<double>(window_count) / s.sim.input_resistance;
        hs = harvester_step(hs, s.harvester, mean_r, power_in, phase_load(s.load, powered, dec.phase), dt);
        result.peak_v_cap = std::max(result.peak_v_cap, hs.v_cap);

        if (hs.mode == HarvesterMode::Regulating && !powered) {
            powered = true;
            if (!result.rail_up_time) result.rail_up_time = t_end;
            if (!decided) dec = DecoderState::power_on(t_end, cmp.level());
        } else if (hs.mode != HarvesterMode::Regulating && powered) {
            powered = false;
            if (!decided) dec = DecoderState{};
        }

        if (s.sim.record_traces) result.vcap_trace.push_back({t_end, hs.v_cap, hs.mode});
        window_first_edge = result.edge_trace.size();
        window_count = 0;
        sum_r = sum_r2 = 0.0;
    }

    result.final_v_cap = hs.v_cap;
    result.final_cap_energy = 0.5 * s.harvester.c_store * hs.v_cap * hs.v_cap;
    result.harvested_energy = hs.harvested_energy;
    result.consumed_energy = hs.delivered_energy;
    if (!s.sim.record_traces) result.edge_trace.clear();
    return result;
}

double calibrate_tx_amplitude(const Scenario& base, double target_peak_v_cap, double rel_tol) {
    if (!(target_peak_v_cap > 0.0)) throw ConfigError("calibration target must be > 0");
    Scenario s = base;
    s.sim.record_traces = false;
    const auto peak_at = [&](double amplitude) {
        s.modulation.tx_amplitude = amplitude;
        return run_scenario(s).peak_v_cap;
    };

    double hi = 1.0;
    while (peak_at(hi) < target_peak_v_cap) {
        hi *= 2.0;
        if (hi > 1e12) throw ConfigError("calibration: target peak voltage unreachable");
    }
    double lo = hi / 2.0;
    while (lo > 1e-12 && peak_at(lo) >= target_peak_v_cap) lo /= 2.0;

    while ((hi - lo) / hi > rel_tol) {
        const double mid = std::sqrt(lo * hi);
        (peak_at(mid) < target_peak_v_cap ? lo : hi) = mid;
    }
    return std::abs(peak_at(lo) - target_peak_v_cap) < std::abs(peak_at(hi) - target_peak_v_cap) ? lo : hi;
}

std::optional<double> required_preamble(const Scenario& base, double max_preamble, double tolerance) {
    Scenario s = base;
    s.sim.record_traces = false;
    const auto wakes = [&](double preamble) {
        s.frame.preamble_duration = preamble;
        return run_scenario(s).woke;
    };
    if (!wakes(max_preamble)) return std::nullopt;
    if (wakes(0.0)) return 0.0;
    double lo = 0.0;
    double hi = max_preamble;
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        (wakes(mid) ? hi : lo) = mid;
    }
    return hi;
}

SweepParameter parse_sweep_parameter(std::string_view name) {
    if (name == "distance") return SweepParameter::Distance;
    if (name == "preamble_duration") return SweepParameter::PreambleDuration;
    if (name == "bit_rate") return SweepParameter::BitRate;
    if (name == "noise_rms") return SweepParameter::NoiseRms;
    if (name == "echo_delay") return SweepParameter::EchoDelay;
    throw ConfigError("unknown sweep parameter '" + std::string(name) +
                      "' (expected distance, preamble_duration, bit_rate, noise_rms or echo_delay)");
}

std::string_view to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::Distance: return "distance";
        case SweepParameter::PreambleDuration: return "preamble_duration";
        case SweepParameter::BitRate: return "bit_rate";
        case SweepParameter::NoiseRms: return "noise_rms";
        case SweepParameter::EchoDelay: return "echo_delay";
    }
    return "unknown";
}

Scenario apply_sweep_value(const Scenario& s, SweepParameter p, double value) {
    Scenario out = s;
    switch (p) {
        case SweepParameter::Distance: out.channel.distance = value; break;
        case SweepParameter::PreambleDuration: out.frame.preamble_duration = value; break;
        case SweepParameter::BitRate: out.frame.bit_rate = value; break;
        case SweepParameter::NoiseRms: out.channel.noise_rms = value; break;
        case SweepParameter::EchoDelay:
            if (out.channel.echoes.empty()) {
                throw ConfigError("echo_delay sweep requires at least one echo in channel.echoes");
            }
            out.channel.echoes.front().extra_path = value * out.channel.sound_speed;
            break;
    }
    return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base_seed, std::size_t value_index, int trial) {
    return splitmix64(splitmix64(splitmix64(base_seed) ^ value_index) ^ static_cast<std::uint64_t>(trial));
}

SweepTable sweep(const Scenario& base, SweepParameter parameter, const std::vector<double>& values, int trials,
                 unsigned threads) {
    if (trials < 1) throw ConfigError("sweep: trials must be >= 1");
    if (values.empty()) throw ConfigError("sweep: no values given");

    std::vector<Scenario> per_value;
    per_value.reserve(values.size());
    for (double v : values) {
        per_value.push_back(apply_sweep_value(base, parameter, v));
        per_value.back().sim.record_traces = false;
        per_value.back().validate();
    }

    SweepTable table;
    table.parameter = parameter;
    table.rows.resize(values.size() * static_cast<std::size_t>(trials));
    for (std::size_t i = 0; i < values.size(); ++i) {
        for (int t = 0; t < trials; ++t) {
            auto& row = table.rows[i * static_cast<std::size_t>(trials) + static_cast<std::size_t>(t)];
            row.value = values[i];
            row.trial = t;
            row.seed = derive_seed(base.seed, i, t);
        }
    }

    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(table.rows.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto worker = [&] {
        for (std::size_t k = next++; k < table.rows.size(); k = next++) {
            try {
                Scenario s = per_value[k / static_cast<std::size_t>(trials)];
                s.seed = table.rows[k].seed;
                table.rows[k].result = run_scenario(s);
            } catch (...) {
                std::scoped_lock lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    for (std::size_t i = 0; i < values.size(); ++i) {
        SweepAggregate agg;
        agg.value = values[i];
        agg.trials = trials;
        double ttw_sum = 0.0;
        for (int t = 0; t < trials; ++t) {
            const auto& r = table.rows[i * static_cast<std::size_t>(trials) + static_cast<std::size_t>(t)].result;
            agg.successes += r.woke ? 1 : 0;
            agg.mean_harvested_energy += r.harvested_energy;
            agg.mean_peak_v_cap += r.peak_v_cap;
            if (r.time_to_wake) ttw_sum += *r.time_to_wake;
        }
        agg.success_rate = static_cast<double>(agg.successes) / trials;
        agg.mean_harvested_energy /= trials;
        agg.mean_peak_v_cap /= trials;
        if (agg.successes > 0) agg.mean_time_to_wake = ttw_sum / agg.successes;
        table.aggregates.push_back(agg);
    }
    return table;
}

}  // namespace wursim
