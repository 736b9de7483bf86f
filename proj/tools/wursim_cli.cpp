// wursim: run one scenario or sweep a parameter over seeded trials.
//
// Exit codes: 0 ok, 1 usage error, 2 scenario/validation error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wursim/scenario_io.hpp"
#include "wursim/sim.hpp"

namespace fs = std::filesystem;
using namespace wursim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalid = 2;

fs::path default_output_dir() {
    if (const char* env = std::getenv("WURSIM_OUTPUT_DIR"); env && *env) return env;
    return ".";
}

std::string stem_of(const std::string& scenario_path) { return fs::path(scenario_path).stem().string(); }

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed, std::optional<std::string> out) {
    Scenario s = load_scenario(path);
    if (seed) s.seed = *seed;
    s.sim.record_traces = true;
    const ScenarioResult r = run_scenario(s);

    const fs::path dir = out ? fs::path(*out) : default_output_dir();
    const std::string stem = stem_of(path);
    write_files_atomic({{dir / (stem + ".result.csv"), result_csv(s, r)},
                        {dir / (stem + ".vcap.csv"), vcap_csv(r)},
                        {dir / (stem + ".edges.csv"), edges_csv(r)}});

    char uuid[8] = "none";
    if (r.decoded_uuid) std::snprintf(uuid, sizeof uuid, "0x%02X", static_cast<unsigned>(*r.decoded_uuid));
    char ttw[32] = "none";
    if (r.time_to_wake) std::snprintf(ttw, sizeof ttw, "%.3f ms", *r.time_to_wake * 1e3);
    std::printf("woke=%s decoded_uuid=%s time_to_wake=%s peak_v_cap=%.4f V harvested=%.2f uJ\n",
                r.woke ? "true" : "false", uuid, ttw, r.peak_v_cap, r.harvested_energy * 1e6);
    return kExitOk;
}

int cmd_sweep(const std::string& path, const std::string& param, const std::vector<double>& values, int trials,
              std::optional<std::uint64_t> seed, std::optional<std::string> out, unsigned threads) {
    Scenario s = load_scenario(path);
    if (seed) s.seed = *seed;
    const SweepParameter p = parse_sweep_parameter(param);
    // Reject bad values before spending time on the sweep.
    for (double v : values) apply_sweep_value(s, p, v).validate();

    const SweepTable t = sweep(s, p, values, trials, threads);
    const fs::path target =
        out ? fs::path(*out) : default_output_dir() / (stem_of(path) + ".sweep." + param + ".csv");
    write_files_atomic({{target, sweep_csv(t)}});

    for (const auto& a : t.aggregates) {
        std::printf("%s=%-10g success=%d/%d harvested=%.2f uJ peak_v_cap=%.4f V\n", param.c_str(), a.value,
                    a.successes, a.trials, a.mean_harvested_energy * 1e6, a.mean_peak_v_cap);
    }
    return kExitOk;
}

int cmd_calibrate(const std::string& path, double target) {
    const Scenario s = load_scenario(path);
    const double amp = calibrate_tx_amplitude(s, target);
    std::printf("%.10g\n", amp);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acoustic wake-up receiver simulator"};
    app.require_subcommand(1);

    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;

    auto* run = app.add_subcommand("run", "Simulate one scenario and write result/trace CSVs");
    run->add_option("file", scenario, "Scenario file (JSON)")->required();
    run->add_option("--seed", seed, "Override the scenario seed");
    run->add_option("--out", out, "Output directory (default $WURSIM_OUTPUT_DIR or .)");

    std::string param;
    std::vector<double> values;
    int trials = 1;
    unsigned threads = 0;
    auto* sw = app.add_subcommand("sweep", "Sweep one parameter over seeded trials");
    sw->add_option("file", scenario, "Scenario file (JSON)")->required();
    sw->add_option("--param", param, "distance | preamble_duration | bit_rate | noise_rms | echo_delay")
        ->required();
    sw->add_option("--values", values, "Comma-separated values (SI units)")->required()->delimiter(',');
    sw->add_option("--trials", trials, "Trials per value")->required()->check(CLI::PositiveNumber);
    sw->add_option("--seed", seed, "Override the base seed");
    sw->add_option("--out", out, "Output CSV (default $WURSIM_OUTPUT_DIR/<name>.sweep.<param>.csv)");
    sw->add_option("--threads", threads, "Worker threads (0 = all cores)");

    double target = 4.12;
    auto* cal = app.add_subcommand("calibrate", "Print the tx_amplitude reaching a target peak capacitor voltage");
    cal->add_option("file", scenario, "Scenario file (JSON)")->required();
    cal->add_option("--target", target, "Target peak v_cap in volts")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*run) return cmd_run(scenario, seed, out);
        if (*sw) return cmd_sweep(scenario, param, values, trials, seed, out, threads);
        if (*cal) return cmd_calibrate(scenario, target);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "wursim: %s\n", e.what());
        return kExitInvalid;
    }
    return kExitUsage;
}
