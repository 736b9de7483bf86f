#include "wursim/power.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "wursim/errors.hpp"

namespace wursim {

std::string_view to_string(HarvesterMode mode) {
    switch (mode) {
        case HarvesterMode::Depleted: return "depleted";
        case HarvesterMode::ColdStart: return "coldstart";
        case HarvesterMode::Regulating: return "regulating";
    }
    return "unknown";
}

void HarvesterParams::validate() const {
    if (!(coldstart_min_voltage > boost_min_voltage)) {
        throw ConfigError("harvester: require coldstart_min_voltage > boost_min_voltage");
    }
    if (!(boost_min_voltage >= 0.0)) throw ConfigError("harvester.boost_min_voltage must be >= 0");
    if (!(coldstart_min_power >= 0.0)) throw ConfigError("harvester.coldstart_min_power must be >= 0");
    if (!(c_store > 0.0)) throw ConfigError("harvester.c_store must be > 0");
    for (auto [name, eta] : {std::pair{"coldstart_efficiency", coldstart_efficiency},
                             std::pair{"boost_efficiency", boost_efficiency},
                             std::pair{"output_efficiency", output_efficiency}}) {
        if (!(eta > 0.0 && eta <= 1.0)) throw ConfigError(std::string("harvester.") + name + " must be in (0, 1]");
    }
    if (!(v_out > 0.0)) throw ConfigError("harvester.v_out must be > 0");
    if (!(uvlo > 0.0 && enable_voltage > uvlo)) throw ConfigError("harvester: require 0 < uvlo < enable_voltage");
}

void LoadProfile::validate() const {
    if (p_idle != 0.0) throw ConfigError("load.p_idle must be 0 (rail is power-gated when idle)");
    if (!(p_listen >= 0.0) || !(p_decode >= 0.0)) throw ConfigError("load powers must be >= 0");
}

double cap_energy(double capacitance, double voltage) {
    if (!(capacitance > 0.0) || !(voltage >= 0.0)) {
        throw DomainError("cap_energy: require capacitance > 0 and voltage >= 0");
    }
    return 0.5 * capacitance * voltage * voltage;
}

HarvesterState harvester_step(const HarvesterState& state, const HarvesterParams& params, double input_voltage,
                              double input_power, double load, double dt) {
    HarvesterState s = state;
    const bool coldstart_ok =
        input_voltage >= params.coldstart_min_voltage && input_power >= params.coldstart_min_power;

    switch (s.mode) {
        case HarvesterMode::Depleted:
            if (!coldstart_ok) return s;
            s.mode = HarvesterMode::ColdStart;
            break;
        case HarvesterMode::ColdStart:
            if (!coldstart_ok) {
                s.mode = HarvesterMode::Depleted;
                return s;
            }
            break;
        case HarvesterMode::Regulating:
            break;
    }

    double energy = 0.5 * params.c_store * s.v_cap * s.v_cap;
    if (s.mode == HarvesterMode::ColdStart) {
        const double gain = params.coldstart_efficiency * std::max(0.0, input_power) * dt;
        energy += gain;
        s.harvested_energy += gain;
    } else {
        if (input_voltage >= params.boost_min_voltage) {
            const double gain = params.boost_efficiency * std::max(0.0, input_power) * dt;
            energy += gain;
            s.harvested_energy += gain;
        }
        const double draw = std::min(energy, std::max(0.0, load) * dt / params.output_efficiency);
        energy -= draw;
        s.delivered_energy += draw;
    }
    s.v_cap = std::sqrt(2.0 * energy / params.c_store);

    if (s.mode == HarvesterMode::ColdStart && s.v_cap >= params.enable_voltage) {
        s.mode = HarvesterMode::Regulating;
    } else if (s.mode == HarvesterMode::Regulating && s.v_cap < params.uvlo) {
        s.mode = HarvesterMode::Depleted;
    }
    return s;
}

}  // namespace wursim
