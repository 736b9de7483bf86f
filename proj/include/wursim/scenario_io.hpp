#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wursim/sim.hpp"

namespace wursim {

/// Required keys of a scenario document; everything else has a default.
const std::vector<std::string>& required_scenario_keys();

/// Parses a JSON scenario document. Unknown keys, wrong types and missing
/// required keys raise ConfigError naming the offending key; the result is
/// validated. An empty document is treated as `{}`.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

/// Full document with every field spelled out (round-trips through
/// parse_scenario).
std::string dump_scenario(const Scenario& s);

// CSV writers. Each output starts with a "#wursim-csv <kind> v<N>" line,
// then a header row; numbers are printed with %.10g so reruns are
// byte-identical.
inline constexpr int kCsvSchemaVersion = 1;

std::string result_csv(const Scenario& s, const ScenarioResult& r);
std::string vcap_csv(const ScenarioResult& r);
std::string edges_csv(const ScenarioResult& r);
std::string sweep_csv(const SweepTable& t);

/// Writes all files or none: contents go to temporaries next to their
/// targets and are renamed only once every write succeeded.
void write_files_atomic(const std::vector<std::pair<std::filesystem::path, std::string>>& files);

}  // namespace wursim
