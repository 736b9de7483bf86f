#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "wursim/channel.hpp"
#include "wursim/errors.hpp"
#include "wursim/frame.hpp"
#include "wursim/power.hpp"
#include "wursim/scenario_io.hpp"
#include "wursim/sim.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace wursim;

namespace {

py::array_t<double> to_numpy(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

// Traces as numpy columns rather than lists of small objects.
py::dict traces(const ScenarioResult& r) {
    std::vector<double> t, v, mode, et, el, ed;
    for (const auto& s : r.vcap_trace) {
        t.push_back(s.time);
        v.push_back(s.v_cap);
        mode.push_back(static_cast<double>(s.mode));
    }
    for (const auto& e : r.edge_trace) {
        et.push_back(e.time);
        el.push_back(e.level);
        ed.push_back(e.delivered);
    }
    return py::dict("time"_a = to_numpy(t), "v_cap"_a = to_numpy(v), "mode"_a = to_numpy(mode),
                    "edge_time"_a = to_numpy(et), "edge_level"_a = to_numpy(el), "edge_delivered"_a = to_numpy(ed));
}

}  // namespace

PYBIND11_MODULE(_wursim, m) {
    m.doc() = "Acoustic wake-up receiver simulator (C++ core)";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<UnitError>(m, "UnitError", PyExc_TypeError);
    py::register_exception<ProtocolError>(m, "ProtocolError", PyExc_RuntimeError);

    py::class_<WakeupFrame>(m, "WakeupFrame")
        .def(py::init<>())
        .def_readwrite("uuid", &WakeupFrame::uuid)
        .def_readwrite("preamble_duration", &WakeupFrame::preamble_duration)
        .def_readwrite("bit_rate", &WakeupFrame::bit_rate)
        .def_readwrite("guard_slots", &WakeupFrame::guard_slots)
        .def_property_readonly("duration", &WakeupFrame::duration)
        .def_property_readonly("bits", [](const WakeupFrame& f) {
            const auto b = f.bits();
            return std::vector<bool>(b.begin(), b.end());
        });

    py::class_<ModulationParams>(m, "ModulationParams")
        .def(py::init<>())
        .def_readwrite("carrier_freq", &ModulationParams::carrier_freq)
        .def_readwrite("sample_rate", &ModulationParams::sample_rate)
        .def_readwrite("pulse_duty", &ModulationParams::pulse_duty)
        .def_readwrite("tx_amplitude", &ModulationParams::tx_amplitude);

    py::class_<Echo>(m, "Echo")
        .def(py::init<double, double>(), "extra_path"_a, "gain"_a)
        .def_readwrite("extra_path", &Echo::extra_path)
        .def_readwrite("gain", &Echo::gain);

    py::class_<ChannelModel>(m, "ChannelModel")
        .def(py::init<>())
        .def_readwrite("distance", &ChannelModel::distance)
        .def_readwrite("sound_speed", &ChannelModel::sound_speed)
        .def_readwrite("spreading_exponent", &ChannelModel::spreading_exponent)
        .def_readwrite("absorption_db_per_km", &ChannelModel::absorption_db_per_km)
        .def_readwrite("coupling", &ChannelModel::coupling)
        .def_readwrite("echoes", &ChannelModel::echoes)
        .def_readwrite("noise_rms", &ChannelModel::noise_rms)
        .def_property_readonly("direct_gain", &ChannelModel::direct_gain);

    py::class_<HarvesterParams>(m, "HarvesterParams")
        .def(py::init<>())
        .def_readwrite("coldstart_min_power", &HarvesterParams::coldstart_min_power)
        .def_readwrite("coldstart_min_voltage", &HarvesterParams::coldstart_min_voltage)
        .def_readwrite("boost_min_voltage", &HarvesterParams::boost_min_voltage)
        .def_readwrite("c_store", &HarvesterParams::c_store)
        .def_readwrite("coldstart_efficiency", &HarvesterParams::coldstart_efficiency)
        .def_readwrite("boost_efficiency", &HarvesterParams::boost_efficiency)
        .def_readwrite("output_efficiency", &HarvesterParams::output_efficiency)
        .def_readwrite("enable_voltage", &HarvesterParams::enable_voltage)
        .def_readwrite("uvlo", &HarvesterParams::uvlo);

    py::enum_<HarvesterMode>(m, "HarvesterMode")
        .value("Depleted", HarvesterMode::Depleted)
        .value("ColdStart", HarvesterMode::ColdStart)
        .value("Regulating", HarvesterMode::Regulating);

    py::class_<HarvesterState>(m, "HarvesterState")
        .def(py::init<>())
        .def_readwrite("mode", &HarvesterState::mode)
        .def_readwrite("v_cap", &HarvesterState::v_cap)
        .def_readwrite("harvested_energy", &HarvesterState::harvested_energy)
        .def_readwrite("delivered_energy", &HarvesterState::delivered_energy);

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("frame", &Scenario::frame)
        .def_readwrite("modulation", &Scenario::modulation)
        .def_readwrite("channel", &Scenario::channel)
        .def_readwrite("harvester", &Scenario::harvester)
        .def_readwrite("seed", &Scenario::seed)
        .def_property(
            "assigned_uuid", [](const Scenario& s) { return s.decoder.assigned_uuid; },
            [](Scenario& s, std::uint8_t u) { s.decoder.assigned_uuid = u; })
        .def_property(
            "decimation", [](const Scenario& s) { return s.sim.decimation; },
            [](Scenario& s, int d) { s.sim.decimation = d; })
        .def("validate", &Scenario::validate)
        .def("to_json", &dump_scenario)
        .def("copy", [](const Scenario& s) { return Scenario(s); });

    py::class_<ScenarioResult>(m, "ScenarioResult")
        .def_readonly("woke", &ScenarioResult::woke)
        .def_readonly("decoded_uuid", &ScenarioResult::decoded_uuid)
        .def_readonly("time_to_wake", &ScenarioResult::time_to_wake)
        .def_readonly("rail_up_time", &ScenarioResult::rail_up_time)
        .def_readonly("peak_v_cap", &ScenarioResult::peak_v_cap)
        .def_readonly("final_v_cap", &ScenarioResult::final_v_cap)
        .def_readonly("harvested_energy", &ScenarioResult::harvested_energy)
        .def_readonly("consumed_energy", &ScenarioResult::consumed_energy)
        .def_property_readonly("ledger_residual", &ScenarioResult::ledger_residual)
        .def_property_readonly("traces", &traces);

    m.def("parse_scenario", &parse_scenario, "text"_a);
    m.def("load_scenario", &load_scenario, "path"_a);

    m.def(
        "modulate_frame",
        [](const WakeupFrame& f, const ModulationParams& p) { return to_numpy(modulate_frame(f, p).samples); },
        "frame"_a, "params"_a);
    m.def("frame_energy", &frame_energy, "frame"_a, "params"_a);
    m.def("echo_delay", &echo_delay, "extra_path"_a, "sound_speed"_a = 1630.0);
    m.def("critical_reflection_distance", &critical_reflection_distance, "bit_rate"_a, "sound_speed"_a = 1630.0);
    m.def("cap_energy", &cap_energy, "capacitance"_a, "voltage"_a);
    m.def("harvester_step", &harvester_step, "state"_a, "params"_a, "input_voltage"_a, "input_power"_a, "load"_a,
          "dt"_a);

    m.def("run_scenario", &run_scenario, "scenario"_a, py::call_guard<py::gil_scoped_release>());
    m.def("calibrate_tx_amplitude", &calibrate_tx_amplitude, "scenario"_a, "target_peak_v_cap"_a = 4.12,
          "rel_tol"_a = 1e-4, py::call_guard<py::gil_scoped_release>());
    m.def("required_preamble", &required_preamble, "scenario"_a, "max_preamble"_a, "tolerance"_a = 1e-3,
          py::call_guard<py::gil_scoped_release>());

    m.def(
        "sweep",
        [](const Scenario& base, const std::string& parameter, const std::vector<double>& values, int trials,
           unsigned threads) {
            SweepTable t;
            {
                py::gil_scoped_release release;
                t = sweep(base, parse_sweep_parameter(parameter), values, trials, threads);
            }
            py::list rows, aggregates;
            for (const auto& r : t.rows) {
                rows.append(py::dict("value"_a = r.value, "trial"_a = r.trial, "seed"_a = r.seed,
                                     "woke"_a = r.result.woke, "decoded_uuid"_a = r.result.decoded_uuid,
                                     "peak_v_cap"_a = r.result.peak_v_cap,
                                     "harvested_energy"_a = r.result.harvested_energy));
            }
            for (const auto& a : t.aggregates) {
                aggregates.append(py::dict("value"_a = a.value, "trials"_a = a.trials, "successes"_a = a.successes,
                                           "success_rate"_a = a.success_rate,
                                           "mean_harvested_energy"_a = a.mean_harvested_energy,
                                           "mean_peak_v_cap"_a = a.mean_peak_v_cap));
            }
            return py::dict("rows"_a = rows, "aggregates"_a = aggregates, "csv"_a = sweep_csv(t));
        },
        "base"_a, "parameter"_a, "values"_a, "trials"_a, "threads"_a = 0);
}
