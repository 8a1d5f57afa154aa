#include "relmech/scenario.hpp"

#include <algorithm>

namespace relmech {

namespace {

struct BuiltinEntry {
    const char* name;
    const char* text;
};

// generated at configure time from scenarios/*.scn; the shipped files are
// the single source of truth for the registry
const BuiltinEntry builtin_registry[] = {
#include "builtin_scenarios_data.inc"
};

} // namespace

std::vector<std::string> builtin_scenario_names() {
    std::vector<std::string> names;
    for (const auto& entry : builtin_registry) names.emplace_back(entry.name);
    std::sort(names.begin(), names.end());
    return names;
}

const char* builtin_scenario_text(std::string_view name) {
    for (const auto& entry : builtin_registry)
        if (name == entry.name) return entry.text;
    return nullptr;
}

Scenario load_builtin_scenario(std::string_view name) {
    const char* text = builtin_scenario_text(name);
    if (!text) throw Error("unknown builtin scenario '" + std::string(name) + "'");
    auto result = load_scenario_text(text, "builtin:" + std::string(name));
    if (!result.ok()) {
        std::string msg = "builtin scenario '" + std::string(name) + "' failed to load";
        if (!result.issues.empty()) msg += ": " + result.issues.front().message;
        throw Error(msg);
    }
    return std::move(*result.scenario);
}

} // namespace relmech
