#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wursim/channel.hpp"
#include "wursim/decoder.hpp"
#include "wursim/frame.hpp"
#include "wursim/frontend.hpp"
#include "wursim/power.hpp"

namespace wursim {

struct SimOptions {
    int decimation = 64;              // samples per harvester tick
    double input_resistance = 10e3;   // ohm, equivalent harvester input load
    double tail_duration = 20e-3;     // s of silence simulated after the frame
    double initial_v_cap = 0.0;       // V
    bool record_traces = true;

    void validate() const;
};

struct Scenario {
    WakeupFrame frame;
    ModulationParams modulation;
    ChannelModel channel;
    TransducerModel transducer;
    RectifierModel rectifier;
    DemodParams demod;
    HarvesterParams harvester;
    LoadProfile load;
    DecoderConfig decoder;
    SimOptions sim;
    std::uint64_t seed = 1;

    /// Validates every sub-config plus the cross-stage constraints.
    void validate() const;
};

struct VcapSample {
    double time = 0.0;
    double v_cap = 0.0;
    HarvesterMode mode = HarvesterMode::Depleted;
};

/// Comparator edge as recorded by the simulator, with whether the decoder
/// was powered to receive it.
struct TraceEdge {
    double time = 0.0;
    bool level = false;
    bool delivered = false;
};

struct ScenarioResult {
    bool woke = false;
    std::optional<std::uint8_t> decoded_uuid;
    std::optional<double> time_to_wake;   // s from the start of transmission
    std::optional<double> rail_up_time;   // s, first entry into Regulating
    double peak_v_cap = 0.0;
    double final_v_cap = 0.0;
    double harvested_energy = 0.0;
    double consumed_energy = 0.0;
    double initial_cap_energy = 0.0;
    double final_cap_energy = 0.0;
    std::vector<VcapSample> vcap_trace;
    std::vector<TraceEdge> edge_trace;

    /// harvested + initial - consumed - final; zero up to rounding.
    [[nodiscard]] double ledger_residual() const {
        return harvested_energy + initial_cap_energy - consumed_energy - final_cap_energy;
    }
};

/// Runs frame -> channel -> transducer -> {harvester, demodulator} ->
/// decoder on one sample clock. The decoder only receives comparator events
/// while the harvester rail is up.
ScenarioResult run_scenario(const Scenario& s);

/// Fits modulation.tx_amplitude so that run_scenario reaches
/// `target_peak_v_cap`. Bisection on a log scale; returns the amplitude.
double calibrate_tx_amplitude(const Scenario& base, double target_peak_v_cap, double rel_tol = 1e-4);

/// Smallest preamble duration in [0, max_preamble] that wakes the receiver,
/// to within `tolerance` seconds; nullopt if even max_preamble fails.
std::optional<double> required_preamble(const Scenario& base, double max_preamble, double tolerance);

enum class SweepParameter { Distance, PreambleDuration, BitRate, NoiseRms, EchoDelay };

SweepParameter parse_sweep_parameter(std::string_view name);
std::string_view to_string(SweepParameter p);

/// Returns a copy of `s` with the parameter set to `value`.
Scenario apply_sweep_value(const Scenario& s, SweepParameter p, double value);

struct SweepRow {
    double value = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    ScenarioResult result;  // traces not recorded
};

struct SweepAggregate {
    double value = 0.0;
    int trials = 0;
    int successes = 0;
    double success_rate = 0.0;
    double mean_harvested_energy = 0.0;
    double mean_peak_v_cap = 0.0;
    std::optional<double> mean_time_to_wake;  // over successful trials
};

struct SweepTable {
    SweepParameter parameter = SweepParameter::Distance;
    std::vector<SweepRow> rows;             // ordered by (value index, trial)
    std::vector<SweepAggregate> aggregates; // one per value
};

/// Seed of trial `trial` at value index `value_index`, derived from the
/// base seed.
std::uint64_t derive_seed(std::uint64_t base_seed, std::size_t value_index, int trial);

/// Runs trials x values scenarios in parallel (threads = 0 picks the
/// hardware concurrency). Output order does not depend on scheduling.
SweepTable sweep(const Scenario& base, SweepParameter parameter, const std::vector<double>& values, int trials,
                 unsigned threads = 0);

}  // namespace wursim
