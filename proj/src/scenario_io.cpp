#include "wursim/scenario_io.hpp"

#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "wursim/errors.hpp"

namespace wursim {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

// Reads typed fields out of one JSON object and remembers which keys were
// consumed, so leftovers can be reported as unknown.
class Section {
public:
    Section(const json& obj, std::string prefix) : obj_(obj), prefix_(std::move(prefix)) {
        if (!obj_.is_object()) throw ConfigError(prefix_ + ": expected an object");
    }

    std::string path(const char* key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

    const json* find(const char* key) {
        seen_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    void number(const char* key, double& out) {
        if (const json* v = find(key)) {
            if (!v->is_number()) throw ConfigError(path(key) + ": expected a number");
            out = v->get<double>();
        }
    }

    void integer(const char* key, int& out) {
        if (const json* v = find(key)) {
            if (!v->is_number_integer()) throw ConfigError(path(key) + ": expected an integer");
            const auto x = v->get<long long>();
            if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
                throw ConfigError(path(key) + ": out of range");
            }
            out = static_cast<int>(x);
        }
    }

    void unsigned64(const char* key, std::uint64_t& out) {
        if (const json* v = find(key)) {
            if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0)) {
                throw ConfigError(path(key) + ": expected a non-negative integer");
            }
            out = v->get<std::uint64_t>();
        }
    }

    void boolean(const char* key, bool& out) {
        if (const json* v = find(key)) {
            if (!v->is_boolean()) throw ConfigError(path(key) + ": expected true or false");
            out = v->get<bool>();
        }
    }

    // 0..255 as an integer or a string such as "0xA5".
    void byte(const char* key, std::uint8_t& out) {
        const json* v = find(key);
        if (!v) return;
        long long x = -1;
        if (v->is_number_integer()) {
            x = v->get<long long>();
        } else if (v->is_string()) {
            const auto str = v->get<std::string>();
            std::size_t used = 0;
            try {
                x = std::stoll(str, &used, 0);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != str.size() || str.empty()) x = -1;
        } else {
            throw ConfigError(path(key) + ": expected an integer or a hex string");
        }
        if (x < 0 || x > 255) throw ConfigError(path(key) + ": must be in 0..255");
        out = static_cast<std::uint8_t>(x);
    }

    void finish() const {
        for (const auto& [k, _] : obj_.items()) {
            if (!seen_.count(k)) throw ConfigError("unknown key '" + path(k.c_str()) + "'");
        }
    }

private:
    const json& obj_;
    std::string prefix_;
    std::set<std::string> seen_;
};

template <class F>
void section(Section& top, const char* key, F&& fill) {
    if (const json* v = top.find(key)) {
        Section s(*v, top.path(key));
        fill(s);
        s.finish();
    }
}

bool has_path(const json& doc, const std::string& dotted) {
    const json* cur = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = dotted.find('.', start);
        const auto part = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (!cur->is_object()) return false;
        auto it = cur->find(part);
        if (it == cur->end()) return false;
        cur = &*it;
        if (dot == std::string::npos) return true;
        start = dot + 1;
    }
}

std::string hex_byte(std::uint8_t b) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "0x%02X", static_cast<unsigned>(b));
    return buf;
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

std::string opt(const std::optional<double>& x) { return x ? num(*x) : std::string(); }

std::string opt(const std::optional<std::uint8_t>& x) { return x ? std::to_string(*x) : std::string(); }

std::string_view mode_name(HarvesterMode m) {
    switch (m) {
        case HarvesterMode::Depleted: return "depleted";
        case HarvesterMode::ColdStart: return "coldstart";
        case HarvesterMode::Regulating: return "regulating";
    }
    return "?";
}

std::string csv_head(std::string_view kind) {
    return "#wursim-csv " + std::string(kind) + " v" + std::to_string(kCsvSchemaVersion) + "\n";
}

}  // namespace

const std::vector<std::string>& required_scenario_keys() {
    static const std::vector<std::string> keys{"frame.uuid", "modulation.tx_amplitude", "channel.distance",
                                               "decoder.assigned_uuid"};
    return keys;
}

Scenario parse_scenario(std::string_view text) {
    json doc;
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
        doc = json::object();
    } else {
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("malformed scenario document: ") + e.what());
        }
    }
    if (!doc.is_object()) throw ConfigError("scenario document must be an object");

    std::string missing;
    for (const auto& k : required_scenario_keys()) {
        if (!has_path(doc, k)) missing += (missing.empty() ? "" : ", ") + k;
    }
    if (!missing.empty()) throw ConfigError("missing required keys: " + missing);

    Scenario s;
    Section top(doc, "");
    if (const json* d = top.find("description"); d && !d->is_string()) {
        throw ConfigError("description: expected a string");
    }
    section(top, "frame", [&](Section& f) {
        f.byte("uuid", s.frame.uuid);
        f.number("preamble_duration", s.frame.preamble_duration);
        f.number("bit_rate", s.frame.bit_rate);
        f.integer("guard_slots", s.frame.guard_slots);
    });
    section(top, "modulation", [&](Section& m) {
        m.number("carrier_freq", s.modulation.carrier_freq);
        m.number("sample_rate", s.modulation.sample_rate);
        m.number("pulse_duty", s.modulation.pulse_duty);
        m.number("tx_amplitude", s.modulation.tx_amplitude);
    });
    section(top, "channel", [&](Section& c) {
        c.number("distance", s.channel.distance);
        c.number("sound_speed", s.channel.sound_speed);
        c.number("spreading_exponent", s.channel.spreading_exponent);
        c.number("absorption_db_per_km", s.channel.absorption_db_per_km);
        c.number("coupling", s.channel.coupling);
        c.number("noise_rms", s.channel.noise_rms);
        c.unsigned64("rng_seed", s.channel.rng_seed);
        if (const json* echoes = c.find("echoes")) {
            if (!echoes->is_array()) throw ConfigError(c.path("echoes") + ": expected an array");
            for (std::size_t i = 0; i < echoes->size(); ++i) {
                Section e((*echoes)[i], c.path("echoes") + "[" + std::to_string(i) + "]");
                Echo echo;
                e.number("extra_path", echo.extra_path);
                e.number("gain", echo.gain);
                e.finish();
                s.channel.echoes.push_back(echo);
            }
        }
    });
    section(top, "transducer", [&](Section& t) {
        t.number("resonance_freq", s.transducer.resonance_freq);
        t.number("bandwidth", s.transducer.bandwidth);
        t.number("sensitivity", s.transducer.sensitivity);
    });
    section(top, "rectifier", [&](Section& r) {
        r.number("diode_drop", s.rectifier.diode_drop);
        r.number("transistor_vth", s.rectifier.transistor_vth);
        r.number("residual_drop", s.rectifier.residual_drop);
    });
    section(top, "demod", [&](Section& d) {
        d.number("bandpass_center", s.demod.bandpass_center);
        d.number("bandpass_q", s.demod.bandpass_q);
        d.number("insertion_gain", s.demod.insertion_gain);
        d.number("input_clamp", s.demod.input_clamp);
        d.number("envelope_tau", s.demod.envelope_tau);
        d.number("fast_tau", s.demod.fast_tau);
        d.number("slow_tau", s.demod.slow_tau);
        d.number("hysteresis", s.demod.hysteresis);
    });
    section(top, "harvester", [&](Section& h) {
        h.number("coldstart_min_power", s.harvester.coldstart_min_power);
        h.number("coldstart_min_voltage", s.harvester.coldstart_min_voltage);
        h.number("boost_min_voltage", s.harvester.boost_min_voltage);
        h.number("v_out", s.harvester.v_out);
        h.number("c_store", s.harvester.c_store);
        h.number("coldstart_efficiency", s.harvester.coldstart_efficiency);
        h.number("boost_efficiency", s.harvester.boost_efficiency);
        h.number("output_efficiency", s.harvester.output_efficiency);
        h.number("enable_voltage", s.harvester.enable_voltage);
        h.number("uvlo", s.harvester.uvlo);
    });
    section(top, "load", [&](Section& l) {
        l.number("p_idle", s.load.p_idle);
        l.number("p_listen", s.load.p_listen);
        l.number("p_decode", s.load.p_decode);
    });
    section(top, "decoder", [&](Section& d) {
        d.byte("assigned_uuid", s.decoder.assigned_uuid);
        d.number("max_sync_interval", s.decoder.max_sync_interval);
        d.number("sample_offset", s.decoder.sample_offset);
    });
    section(top, "sim", [&](Section& o) {
        o.integer("decimation", s.sim.decimation);
        o.number("input_resistance", s.sim.input_resistance);
        o.number("tail_duration", s.sim.tail_duration);
        o.number("initial_v_cap", s.sim.initial_v_cap);
        o.boolean("record_traces", s.sim.record_traces);
    });
    top.unsigned64("seed", s.seed);
    top.finish();

    s.validate();
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open scenario file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string dump_scenario(const Scenario& s) {
    ordered_json doc;
    doc["frame"] = {{"uuid", hex_byte(s.frame.uuid)},
                    {"preamble_duration", s.frame.preamble_duration},
                    {"bit_rate", s.frame.bit_rate},
                    {"guard_slots", s.frame.guard_slots}};
    doc["modulation"] = {{"carrier_freq", s.modulation.carrier_freq},
                         {"sample_rate", s.modulation.sample_rate},
                         {"pulse_duty", s.modulation.pulse_duty},
                         {"tx_amplitude", s.modulation.tx_amplitude}};
    ordered_json echoes = ordered_json::array();
    for (const auto& e : s.channel.echoes) echoes.push_back({{"extra_path", e.extra_path}, {"gain", e.gain}});
    doc["channel"] = {{"distance", s.channel.distance},
                      {"sound_speed", s.channel.sound_speed},
                      {"spreading_exponent", s.channel.spreading_exponent},
                      {"absorption_db_per_km", s.channel.absorption_db_per_km},
                      {"coupling", s.channel.coupling},
                      {"echoes", echoes},
                      {"noise_rms", s.channel.noise_rms},
                      {"rng_seed", s.channel.rng_seed}};
    doc["transducer"] = {{"resonance_freq", s.transducer.resonance_freq},
                         {"bandwidth", s.transducer.bandwidth},
                         {"sensitivity", s.transducer.sensitivity}};
    doc["rectifier"] = {{"diode_drop", s.rectifier.diode_drop},
                        {"transistor_vth", s.rectifier.transistor_vth},
                        {"residual_drop", s.rectifier.residual_drop}};
    doc["demod"] = {{"bandpass_center", s.demod.bandpass_center}, {"bandpass_q", s.demod.bandpass_q},
                    {"insertion_gain", s.demod.insertion_gain},   {"input_clamp", s.demod.input_clamp},
                    {"envelope_tau", s.demod.envelope_tau},       {"fast_tau", s.demod.fast_tau},
                    {"slow_tau", s.demod.slow_tau},               {"hysteresis", s.demod.hysteresis}};
    doc["harvester"] = {{"coldstart_min_power", s.harvester.coldstart_min_power},
                        {"coldstart_min_voltage", s.harvester.coldstart_min_voltage},
                        {"boost_min_voltage", s.harvester.boost_min_voltage},
                        {"v_out", s.harvester.v_out},
                        {"c_store", s.harvester.c_store},
                        {"coldstart_efficiency", s.harvester.coldstart_efficiency},
                        {"boost_efficiency", s.harvester.boost_efficiency},
                        {"output_efficiency", s.harvester.output_efficiency},
                        {"enable_voltage", s.harvester.enable_voltage},
                        {"uvlo", s.harvester.uvlo}};
    doc["load"] = {{"p_idle", s.load.p_idle}, {"p_listen", s.load.p_listen}, {"p_decode", s.load.p_decode}};
    doc["decoder"] = {{"assigned_uuid", hex_byte(s.decoder.assigned_uuid)},
                      {"max_sync_interval", s.decoder.max_sync_interval},
                      {"sample_offset", s.decoder.sample_offset}};
    doc["sim"] = {{"decimation", s.sim.decimation},
                  {"input_resistance", s.sim.input_resistance},
                  {"tail_duration", s.sim.tail_duration},
                  {"initial_v_cap", s.sim.initial_v_cap},
                  {"record_traces", s.sim.record_traces}};
    doc["seed"] = s.seed;
    return doc.dump(2) + "\n";
}

std::string result_csv(const Scenario& s, const ScenarioResult& r) {
    std::string out = csv_head("result");
    out += "seed,assigned_uuid,woke,decoded_uuid,time_to_wake,rail_up_time,peak_v_cap,final_v_cap,"
           "harvested_energy,consumed_energy,initial_cap_energy,final_cap_energy,ledger_residual\n";
    out += std::to_string(s.seed) + "," + std::to_string(s.decoder.assigned_uuid) + "," + (r.woke ? "1" : "0") +
           "," + opt(r.decoded_uuid) + "," + opt(r.time_to_wake) + "," + opt(r.rail_up_time) + "," +
           num(r.peak_v_cap) + "," + num(r.final_v_cap) + "," + num(r.harvested_energy) + "," +
           num(r.consumed_energy) + "," + num(r.initial_cap_energy) + "," + num(r.final_cap_energy) + "," +
           num(r.ledger_residual()) + "\n";
    return out;
}

std::string vcap_csv(const ScenarioResult& r) {
    std::string out = csv_head("vcap");
    out += "time,v_cap,mode\n";
    for (const auto& v : r.vcap_trace) {
        out += num(v.time) + "," + num(v.v_cap) + "," + std::string(mode_name(v.mode)) + "\n";
    }
    return out;
}

std::string edges_csv(const ScenarioResult& r) {
    std::string out = csv_head("edges");
    out += "time,level,delivered\n";
    for (const auto& e : r.edge_trace) {
        out += num(e.time) + "," + (e.level ? "1" : "0") + "," + (e.delivered ? "1" : "0") + "\n";
    }
    return out;
}

std::string sweep_csv(const SweepTable& t) {
    std::string out = csv_head("sweep");
    out += "kind,parameter,value,trial,seed,woke,decoded_uuid,time_to_wake,peak_v_cap,harvested_energy,"
           "consumed_energy,trials,successes,success_rate\n";
    const std::string param(to_string(t.parameter));
    std::size_t row = 0;
    for (const auto& agg : t.aggregates) {
        const std::size_t end = row + static_cast<std::size_t>(agg.trials);
        for (; row < end && row < t.rows.size(); ++row) {
            const auto& tr = t.rows[row];
            const auto& r = tr.result;
            out += "trial," + param + "," + num(tr.value) + "," + std::to_string(tr.trial) + "," +
                   std::to_string(tr.seed) + "," + (r.woke ? "1" : "0") + "," + opt(r.decoded_uuid) + "," +
                   opt(r.time_to_wake) + "," + num(r.peak_v_cap) + "," + num(r.harvested_energy) + "," +
                   num(r.consumed_energy) + ",,,\n";
        }
        out += "aggregate," + param + "," + num(agg.value) + ",,,,," + opt(agg.mean_time_to_wake) + "," +
               num(agg.mean_peak_v_cap) + "," + num(agg.mean_harvested_energy) + ",," +
               std::to_string(agg.trials) + "," + std::to_string(agg.successes) + "," + num(agg.success_rate) +
               "\n";
    }
    return out;
}

void write_files_atomic(const std::vector<std::pair<std::filesystem::path, std::string>>& files) {
    namespace fs = std::filesystem;
    std::vector<fs::path> temps;
    const auto cleanup = [&] {
        std::error_code ec;
        for (const auto& t : temps) fs::remove(t, ec);
    };
    try {
        for (const auto& [target, content] : files) {
            if (target.has_parent_path()) fs::create_directories(target.parent_path());
            fs::path tmp = target;
            tmp += ".tmp";
            temps.push_back(tmp);
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << content;
            out.close();
            if (!out) throw std::runtime_error("failed writing '" + tmp.string() + "'");
        }
        for (std::size_t i = 0; i < files.size(); ++i) fs::rename(temps[i], files[i].first);
    } catch (...) {
        cleanup();
        throw;
    }
}

}  // namespace wursim
