#pragma once

#include <string_view>

namespace wursim {

/// Boost-charger harvester with a storage capacitor and a regulated rail.
struct HarvesterParams {
    double coldstart_min_power = 15e-6;   // W
    double coldstart_min_voltage = 0.6;   // V
    double boost_min_voltage = 0.1;       // V
    double v_out = 1.8;                   // V, regulated rail
    double c_store = 100e-6;              // F
    double coldstart_efficiency = 0.15;
    double boost_efficiency = 0.60;
    double output_efficiency = 0.85;      // rail converter, cap -> load
    double enable_voltage = 2.2;          // V, rail turns on
    double uvlo = 1.9;                    // V, rail turns off

    void validate() const;
};

enum class HarvesterMode { Depleted, ColdStart, Regulating };

std::string_view to_string(HarvesterMode mode);

struct HarvesterState {
    HarvesterMode mode = HarvesterMode::Depleted;
    double v_cap = 0.0;             // V
    double harvested_energy = 0.0;  // J entering the store
    double delivered_energy = 0.0;  // J drawn from the store by the load path
};

/// Power draw of the wake-up logic per phase.
struct LoadProfile {
    double p_idle = 0.0;        // W, rail down
    double p_listen = 10.7e-6;  // W, rail up, waiting for sync
    double p_decode = 63e-6;    // W, sync seen until decision

    void validate() const;
};

/// Energy stored in a capacitor, 0.5 C v^2.
double cap_energy(double capacitance, double voltage);

/// Advances the harvester by dt.
///
/// Depleted leaves only when both cold-start thresholds are met. ColdStart
/// charges at coldstart_efficiency and falls back to Depleted (keeping its
/// charge) if the input drops below the thresholds; it hands over to
/// Regulating at enable_voltage. Regulating charges at boost_efficiency
/// from inputs >= boost_min_voltage and drains load*dt/output_efficiency;
/// below uvlo the load is shed and the state returns to Depleted.
HarvesterState harvester_step(const HarvesterState& state, const HarvesterParams& params, double input_voltage,
                              double input_power, double load, double dt);

}  // namespace wursim
