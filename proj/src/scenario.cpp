#include "relmech/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace relmech {

const char* check_kind_name(CheckKind k) {
    switch (k) {
        case CheckKind::energy: return "energy";
        case CheckKind::contact: return "contact";
        case CheckKind::criterio: return "criterio";
        case CheckKind::total_energy: return "total_energy";
        case CheckKind::two_form: return "two_form";
    }
    return "?";
}

namespace {

// ---------------------------------------------------------------------------
// low-level text helpers

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == ',') {
            parts.emplace_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    return parts;
}

bool is_identifier(std::string_view s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s.front())) && s.front() != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

bool is_scenario_name(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
    return true;
}

// "g(x,y)" -> head "g", args {"x","y"}
struct IndexedKey {
    std::string head;
    std::vector<std::string> args;
};

std::optional<IndexedKey> parse_indexed(std::string_view key) {
    const auto open = key.find('(');
    if (open == std::string_view::npos || key.back() != ')') return std::nullopt;
    IndexedKey out;
    out.head = std::string(trim(key.substr(0, open)));
    for (auto& part : split_list(key.substr(open + 1, key.size() - open - 2)))
        out.args.push_back(part);
    return out;
}

// ---------------------------------------------------------------------------
// raw representation

struct RawEntry {
    std::string key;
    std::string value;
    int line;
};

struct RawFile {
    std::vector<RawEntry> top;
    std::map<std::string, std::vector<RawEntry>> sections;
};

const std::set<std::string> known_sections = {"chart",      "constants", "metric",
                                              "force",      "initial",   "integrator",
                                              "sampling",   "checks",    "outputs"};

} // namespace

// ---------------------------------------------------------------------------
// loader

ScenarioLoadResult load_scenario_text(std::string_view text, std::string_view origin) {
    ScenarioLoadResult result;
    auto& issues = result.issues;
    auto issue = [&issues](int line, std::string msg) {
        issues.push_back({line, std::move(msg)});
    };

    // ---- pass 1: raw lines ------------------------------------------------
    RawFile raw;
    {
        std::string current_section;
        int line_no = 0;
        std::size_t pos = 0;
        while (pos <= text.size()) {
            const std::size_t eol = text.find('\n', pos);
            std::string_view line = text.substr(
                pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
            pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
            ++line_no;

            const auto hash = line.find('#');
            if (hash != std::string_view::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;

            if (line.front() == '[') {
                if (line.back() != ']') {
                    issue(line_no, "unterminated section header");
                    continue;
                }
                std::string section(trim(line.substr(1, line.size() - 2)));
                if (!known_sections.count(section)) {
                    issue(line_no, "unknown section [" + section + "]");
                    current_section = "?";
                    continue;
                }
                if (raw.sections.count(section))
                    issue(line_no, "section [" + section + "] given twice");
                current_section = section;
                raw.sections[section]; // create
                continue;
            }

            const auto eq = line.find('=');
            if (eq == std::string_view::npos) {
                issue(line_no, "expected 'key = value'");
                continue;
            }
            RawEntry entry{std::string(trim(line.substr(0, eq))),
                           std::string(trim(line.substr(eq + 1))), line_no};
            if (entry.key.empty()) {
                issue(line_no, "empty key");
                continue;
            }
            if (current_section == "?") continue; // already reported
            if (current_section.empty())
                raw.top.push_back(std::move(entry));
            else
                raw.sections[current_section].push_back(std::move(entry));
        }
    }

    // duplicate keys (exact text) within a scope
    {
        auto check_dups = [&issue](const std::vector<RawEntry>& entries) {
            std::map<std::string, int> seen;
            for (const auto& e : entries) {
                auto [it, fresh] = seen.emplace(e.key, e.line);
                if (!fresh)
                    issue(e.line, "key '" + e.key + "' already given on line " +
                                      std::to_string(it->second));
            }
        };
        check_dups(raw.top);
        for (const auto& [name, entries] : raw.sections) check_dups(entries);
    }

    auto find_top = [&raw](std::string_view key) -> const RawEntry* {
        for (const auto& e : raw.top)
            if (e.key == key) return &e;
        return nullptr;
    };
    auto find_in = [](const std::vector<RawEntry>& entries,
                      std::string_view key) -> const RawEntry* {
        for (const auto& e : entries)
            if (e.key == key) return &e;
        return nullptr;
    };

    // ---- pass 2: required pieces ------------------------------------------
    const std::string origin_note =
        origin.empty() ? std::string() : " in " + std::string(origin);

    if (const RawEntry* v = find_top("format_version")) {
        if (v->value != "1") issue(v->line, "unsupported format_version '" + v->value + "'");
    } else {
        issue(0, "missing required key 'format_version'" + origin_note);
    }

    std::string name;
    if (const RawEntry* v = find_top("name")) {
        if (!is_scenario_name(v->value))
            issue(v->line, "scenario name must match [A-Za-z0-9_-]+");
        else
            name = v->value;
    } else {
        issue(0, "missing required key 'name'" + origin_note);
    }

    bool expect_fail = false;
    if (const RawEntry* v = find_top("expect")) {
        if (v->value == "fail") expect_fail = true;
        else if (v->value != "pass")
            issue(v->line, "expect must be 'pass' or 'fail'");
    }
    for (const auto& e : raw.top)
        if (e.key != "format_version" && e.key != "name" && e.key != "expect")
            issue(e.line, "unknown top-level key '" + e.key + "'");

    for (const char* required : {"chart", "metric", "initial", "integrator"})
        if (!raw.sections.count(required))
            issue(0, std::string("missing required section [") + required + "]" + origin_note);

    // ---- pass 3: chart -----------------------------------------------------
    std::optional<Chart> chart;
    if (auto it = raw.sections.find("chart"); it != raw.sections.end()) {
        const RawEntry* coords = find_in(it->second, "coordinates");
        for (const auto& e : it->second)
            if (e.key != "coordinates") issue(e.line, "unknown key '" + e.key + "' in [chart]");
        if (!coords) {
            issue(0, "missing 'coordinates' in [chart]");
        } else {
            auto names = split_list(coords->value);
            bool all_ok = !names.empty();
            for (const auto& n : names)
                if (!is_identifier(n)) {
                    issue(coords->line, "bad coordinate name '" + n + "'");
                    all_ok = false;
                }
            if (all_ok) {
                try {
                    chart = Chart::make(names);
                } catch (const Error& e) {
                    issue(coords->line, e.what());
                }
            }
        }
    }

    // ---- pass 4: constants -------------------------------------------------
    expr::Environment constants;
    if (auto it = raw.sections.find("constants"); it != raw.sections.end()) {
        for (const auto& e : it->second) {
            if (!is_identifier(e.key)) {
                issue(e.line, "bad constant name '" + e.key + "'");
                continue;
            }
            if (chart) {
                const auto& cs = chart->coordinates();
                const auto& vs = chart->velocities();
                if (std::find(cs.begin(), cs.end(), e.key) != cs.end() ||
                    std::find(vs.begin(), vs.end(), e.key) != vs.end()) {
                    issue(e.line, "constant '" + e.key +
                                      "' collides with a coordinate or velocity name");
                    continue;
                }
            }
            try {
                constants[e.key] = expr::evaluate(expr::parse_expression(e.value), constants);
            } catch (const Error& err) {
                issue(e.line, std::string("constant '") + e.key + "': " + err.what());
            }
        }
    }

    // helper: parse an expression value, substitute constants, and check that
    // the remaining variables are within `allowed`
    auto parse_checked = [&](const RawEntry& e,
                             const std::vector<std::string>& allowed) -> expr::ExprPtr {
        try {
            auto tree = expr::simplify(
                expr::substitute(expr::parse_expression(e.value), constants));
            for (const auto& var : expr::variables_of(*tree)) {
                if (std::find(allowed.begin(), allowed.end(), var) == allowed.end()) {
                    issue(e.line, "unbound identifier '" + var + "' in '" + e.key + "'");
                    return nullptr;
                }
            }
            return tree;
        } catch (const expr::LexicalError& err) {
            issue(e.line, "'" + e.key + "': " + err.what() + " (offset " +
                              std::to_string(err.offset()) + ")");
        } catch (const expr::SyntaxError& err) {
            issue(e.line, "'" + e.key + "': " + err.what() + " (offset " +
                              std::to_string(err.offset()) + ")");
        } catch (const Error& err) {
            issue(e.line, "'" + e.key + "': " + err.what());
        }
        return nullptr;
    };

    auto const_number = [&](const RawEntry& e, const char* what) -> std::optional<double> {
        try {
            return expr::evaluate(expr::parse_expression(e.value), constants);
        } catch (const Error& err) {
            issue(e.line, std::string(what) + ": " + err.what());
            return std::nullopt;
        }
    };

    auto const_integer = [&](const RawEntry& e, const char* what, long lo) -> std::optional<long> {
        errno = 0;
        char* end = nullptr;
        const long v = std::strtol(e.value.c_str(), &end, 10);
        if (errno != 0 || end != e.value.c_str() + e.value.size()) {
            issue(e.line, std::string(what) + " must be an integer");
            return std::nullopt;
        }
        if (v < lo) {
            issue(e.line, std::string(what) + " must be >= " + std::to_string(lo));
            return std::nullopt;
        }
        return v;
    };

    // ---- pass 5: metric ----------------------------------------------------
    std::optional<MetricField> metric;
    if (auto it = raw.sections.find("metric"); it != raw.sections.end() && chart) {
        std::vector<MetricField::Entry> entries;
        std::map<std::pair<int, int>, int> seen; // canonical (min,max) -> line
        for (const auto& e : it->second) {
            auto key = parse_indexed(e.key);
            if (!key || key->head != "g" || key->args.size() != 2) {
                issue(e.line, "metric keys look like g(a,b) with coordinate names");
                continue;
            }
            const int j = chart->coordinate_index(key->args[0]);
            const int k = chart->coordinate_index(key->args[1]);
            if (j < 0 || k < 0) {
                issue(e.line, "unknown coordinate '" + key->args[j < 0 ? 0 : 1] + "' in '" +
                                  e.key + "'");
                continue;
            }
            const auto canon = std::minmax(j, k);
            auto [slot, fresh] = seen.emplace(std::make_pair(canon.first, canon.second), e.line);
            if (!fresh) {
                issue(e.line, "metric component for this pair already given on line " +
                                  std::to_string(slot->second) + " (the metric is symmetric)");
                continue;
            }
            if (auto tree = parse_checked(e, chart->coordinates()))
                entries.push_back({j, k, CoordFunction::from_expression(tree, *chart)});
        }
        if (entries.empty() && seen.empty())
            issue(0, "[metric] declares no components");
        else if (issues.empty())
            metric = MetricField(*chart, std::move(entries));
    }

    // ---- pass 6: force -----------------------------------------------------
    std::optional<ForceForm> force;
    std::string force_type = "none";
    if (auto it = raw.sections.find("force"); it != raw.sections.end() && chart) {
        const RawEntry* type = find_in(it->second, "type");
        if (!type) {
            issue(0, "[force] needs 'type = none|covector|potential|two_form'");
        } else {
            force_type = type->value;
        }

        if (force_type == "none") {
            for (const auto& e : it->second)
                if (e.key != "type")
                    issue(e.line, "force type 'none' takes no further keys");
        } else if (force_type == "covector") {
            std::vector<expr::ExprPtr> comps(
                static_cast<std::size_t>(chart->dimension()), expr::constant(0.0));
            for (const auto& e : it->second) {
                if (e.key == "type") continue;
                auto key = parse_indexed(e.key);
                if (!key || key->head != "alpha" || key->args.size() != 1) {
                    issue(e.line, "covector components look like alpha(coordinate)");
                    continue;
                }
                const int j = chart->coordinate_index(key->args[0]);
                if (j < 0) {
                    issue(e.line, "unknown coordinate '" + key->args[0] + "'");
                    continue;
                }
                if (auto tree = parse_checked(e, chart->phase_names()))
                    comps[static_cast<std::size_t>(j)] = tree;
            }
            if (issues.empty()) force = ForceForm::covector(*chart, std::move(comps));
        } else if (force_type == "potential") {
            const RawEntry* u = find_in(it->second, "U");
            for (const auto& e : it->second)
                if (e.key != "type" && e.key != "U")
                    issue(e.line, "potential forces take a single key 'U'");
            if (!u) {
                issue(0, "[force] type potential needs 'U = expression'");
            } else if (auto tree = parse_checked(*u, chart->coordinates())) {
                if (issues.empty()) force = from_potential(Potential(tree, *chart));
            }
        } else if (force_type == "two_form") {
            std::vector<TwoFormField::Entry> entries;
            std::map<std::pair<int, int>, int> seen;
            for (const auto& e : it->second) {
                if (e.key == "type") continue;
                auto key = parse_indexed(e.key);
                if (!key || key->head != "phi" || key->args.size() != 2) {
                    issue(e.line, "two-form components look like phi(a,b)");
                    continue;
                }
                const int i = chart->coordinate_index(key->args[0]);
                const int j = chart->coordinate_index(key->args[1]);
                if (i < 0 || j < 0) {
                    issue(e.line, "unknown coordinate '" + key->args[i < 0 ? 0 : 1] + "'");
                    continue;
                }
                if (i == j) {
                    issue(e.line, "two-form components are off-diagonal (antisymmetry)");
                    continue;
                }
                if (i > j) {
                    issue(e.line,
                          "two-form entries use the declared coordinate order; write phi(" +
                              key->args[1] + "," + key->args[0] + ") with the opposite sign");
                    continue;
                }
                auto [slot, fresh] = seen.emplace(std::make_pair(i, j), e.line);
                if (!fresh) {
                    issue(e.line, "two-form component already given on line " +
                                      std::to_string(slot->second));
                    continue;
                }
                if (auto tree = parse_checked(e, chart->coordinates()))
                    entries.push_back({i, j, CoordFunction::from_expression(tree, *chart)});
            }
            if (issues.empty())
                force = from_two_form(TwoFormField(*chart, std::move(entries)));
        } else {
            issue(type->line, "unknown force type '" + force_type + "'");
        }
    }
    if (!force && chart && issues.empty()) force = ForceForm::zero(*chart);

    // ---- pass 7: initial ---------------------------------------------------
    TangentState initial;
    if (auto it = raw.sections.find("initial"); it != raw.sections.end() && chart) {
        const int n = chart->dimension();
        auto read_vector = [&](const char* key) -> std::optional<std::vector<double>> {
            const RawEntry* e = find_in(it->second, key);
            if (!e) {
                issue(0, std::string("missing '") + key + "' in [initial]");
                return std::nullopt;
            }
            auto parts = split_list(e->value);
            if (static_cast<int>(parts.size()) != n) {
                issue(e->line, std::string("'") + key + "' needs " + std::to_string(n) +
                                   " entries, got " + std::to_string(parts.size()));
                return std::nullopt;
            }
            std::vector<double> values;
            for (const auto& p : parts) {
                try {
                    values.push_back(expr::evaluate(expr::parse_expression(p), constants));
                } catch (const Error& err) {
                    issue(e->line, std::string("'") + key + "': " + err.what());
                    return std::nullopt;
                }
            }
            return values;
        };
        for (const auto& e : it->second)
            if (e.key != "q" && e.key != "qdot")
                issue(e.line, "unknown key '" + e.key + "' in [initial]");
        if (auto q = read_vector("q")) initial.q = std::move(*q);
        if (auto qdot = read_vector("qdot")) initial.qdot = std::move(*qdot);
    }

    // ---- pass 8: integrator ------------------------------------------------
    IntegratorConfig integrator;
    if (auto it = raw.sections.find("integrator"); it != raw.sections.end()) {
        for (const auto& e : it->second) {
            if (e.key == "method") {
                try {
                    integrator.method = parse_method(e.value);
                } catch (const Error& err) {
                    issue(e.line, err.what());
                }
            } else if (e.key == "h") {
                if (auto v = const_number(e, "h")) {
                    if (*v > 0.0) integrator.h = *v;
                    else issue(e.line, "h must be positive");
                }
            } else if (e.key == "steps") {
                if (auto v = const_integer(e, "steps", 1)) integrator.steps = *v;
            } else if (e.key == "projection") {
                if (e.value == "on") integrator.projection = true;
                else if (e.value == "off") integrator.projection = false;
                else issue(e.line, "projection must be 'on' or 'off'");
            } else {
                issue(e.line, "unknown key '" + e.key + "' in [integrator]");
            }
        }
        if (integrator.h == 0.0 && !find_in(it->second, "h"))
            issue(0, "missing 'h' in [integrator]");
        if (integrator.steps == 0 && !find_in(it->second, "steps"))
            issue(0, "missing 'steps' in [integrator]");
    }

    // ---- pass 9: sampling --------------------------------------------------
    SamplingConfig sampling;
    if (chart) {
        sampling.box_lo.assign(static_cast<std::size_t>(chart->dimension()), -1.0);
        sampling.box_hi.assign(static_cast<std::size_t>(chart->dimension()), 1.0);
    }
    if (auto it = raw.sections.find("sampling"); it != raw.sections.end()) {
        for (const auto& e : it->second) {
            if (e.key == "box") {
                auto ranges = split_list(e.value);
                if (chart && ranges.size() != 1 &&
                    static_cast<int>(ranges.size()) != chart->dimension()) {
                    issue(e.line, "box needs one range or one per coordinate");
                    continue;
                }
                std::vector<double> lo, hi;
                bool ok = true;
                for (const auto& r : ranges) {
                    const auto colon = r.find(':');
                    if (colon == std::string::npos) {
                        issue(e.line, "box ranges look like lo:hi");
                        ok = false;
                        break;
                    }
                    try {
                        const double a = expr::evaluate(
                            expr::parse_expression(r.substr(0, colon)), constants);
                        const double b = expr::evaluate(
                            expr::parse_expression(r.substr(colon + 1)), constants);
                        if (!(a < b)) {
                            issue(e.line, "box range is empty");
                            ok = false;
                            break;
                        }
                        lo.push_back(a);
                        hi.push_back(b);
                    } catch (const Error& err) {
                        issue(e.line, std::string("box: ") + err.what());
                        ok = false;
                        break;
                    }
                }
                if (ok && chart) {
                    if (lo.size() == 1) {
                        sampling.box_lo.assign(static_cast<std::size_t>(chart->dimension()), lo[0]);
                        sampling.box_hi.assign(static_cast<std::size_t>(chart->dimension()), hi[0]);
                    } else {
                        sampling.box_lo = std::move(lo);
                        sampling.box_hi = std::move(hi);
                    }
                }
            } else if (e.key == "n_samples") {
                if (auto v = const_integer(e, "n_samples", 1))
                    sampling.n_samples = static_cast<int>(*v);
            } else if (e.key == "seed") {
                errno = 0;
                char* end = nullptr;
                const unsigned long long v = std::strtoull(e.value.c_str(), &end, 10);
                if (errno != 0 || end != e.value.c_str() + e.value.size())
                    issue(e.line, "seed must be a non-negative integer");
                else
                    sampling.seed = v;
            } else {
                issue(e.line, "unknown key '" + e.key + "' in [sampling]");
            }
        }
    }

    // ---- pass 10: checks ---------------------------------------------------
    ChecksConfig checks;
    if (auto it = raw.sections.find("checks"); it != raw.sections.end()) {
        for (const auto& e : it->second) {
            if (e.key == "run") {
                for (const auto& part : split_list(e.value)) {
                    if (part == "energy") checks.run.push_back(CheckKind::energy);
                    else if (part == "contact") checks.run.push_back(CheckKind::contact);
                    else if (part == "criterio") checks.run.push_back(CheckKind::criterio);
                    else if (part == "total_energy") checks.run.push_back(CheckKind::total_energy);
                    else if (part == "two_form") checks.run.push_back(CheckKind::two_form);
                    else issue(e.line, "unknown check '" + part + "'");
                }
            } else if (e.key == "energy_tol" || e.key == "contact_tol" ||
                       e.key == "two_form_tol") {
                if (auto v = const_number(e, e.key.c_str())) {
                    if (*v <= 0.0) {
                        issue(e.line, e.key + " must be positive");
                    } else if (e.key == "energy_tol") checks.energy_tol = *v;
                    else if (e.key == "contact_tol") checks.contact_tol = *v;
                    else checks.two_form_tol = *v;
                }
            } else {
                issue(e.line, "unknown key '" + e.key + "' in [checks]");
            }
        }
        const bool has_total =
            std::find(checks.run.begin(), checks.run.end(), CheckKind::total_energy) !=
            checks.run.end();
        if (has_total && force_type != "potential")
            issue(0, "check 'total_energy' needs a potential force");
        const bool has_two_form =
            std::find(checks.run.begin(), checks.run.end(), CheckKind::two_form) !=
            checks.run.end();
        if (has_two_form && force_type == "potential")
            issue(0, "check 'two_form' needs a velocity-linear force");
    }

    // ---- pass 11: outputs --------------------------------------------------
    OutputsConfig outputs;
    if (auto it = raw.sections.find("outputs"); it != raw.sections.end()) {
        outputs = {false, false, false};
        for (const auto& e : it->second) {
            if (e.key != "write") {
                issue(e.line, "unknown key '" + e.key + "' in [outputs]");
                continue;
            }
            for (const auto& part : split_list(e.value)) {
                if (part == "trajectory") outputs.trajectory = true;
                else if (part == "report") outputs.report = true;
                else if (part == "summary") outputs.summary = true;
                else issue(e.line, "unknown output '" + part + "'");
            }
        }
    }

    // ---- assembly -----------------------------------------------------------
    if (!issues.empty()) return result;
    if (!chart || !metric || !force) {
        issue(0, "scenario incomplete" + origin_note);
        return result;
    }

    result.scenario.emplace(Scenario{std::move(name), expect_fail, *chart, std::move(*metric),
                                     std::move(*force), std::move(initial), integrator,
                                     std::move(sampling), std::move(checks), outputs});
    return result;
}

ScenarioLoadResult load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        ScenarioLoadResult result;
        result.issues.push_back({0, "cannot open '" + path.string() + "'"});
        return result;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_scenario_text(buffer.str(), path.string());
}

// ---------------------------------------------------------------------------
// Scenario helpers

StateSampler Scenario::make_sampler(std::optional<std::uint64_t> seed_override) const {
    return StateSampler(sampling.box_lo, sampling.box_hi,
                        seed_override.value_or(sampling.seed));
}

std::string Scenario::summary_line() const {
    std::ostringstream out;
    out << chart.dimension() << "D (";
    for (std::size_t i = 0; i < chart.coordinates().size(); ++i) {
        if (i) out << ", ";
        out << chart.coordinates()[i];
    }
    out << "); metric";
    for (int j = 0; j < chart.dimension(); ++j) {
        for (int k = j; k < chart.dimension(); ++k) {
            const CoordFunction& c = metric.component(j, k);
            if (!c.defined()) continue;
            out << " g(" << chart.coordinates()[static_cast<std::size_t>(j)] << ","
                << chart.coordinates()[static_cast<std::size_t>(k)] << ")=";
            if (c.expression_backed()) out << expr::to_string(c.expression());
            else out << "<native>";
        }
    }
    out << "; force ";
    switch (force.kind()) {
        case ForceKind::zero: out << "none"; break;
        case ForceKind::general: out << "covector"; break;
        case ForceKind::potential: out << "potential"; break;
        case ForceKind::two_form: out << "two-form"; break;
    }
    out << "; " << method_name(integrator.method) << " h=" << integrator.h
        << " steps=" << integrator.steps << "; checks:";
    if (checks.run.empty()) out << " none";
    for (const auto k : checks.run) out << " " << check_kind_name(k);
    out << "; expect " << (expect_fail ? "fail" : "pass");
    return out.str();
}

} // namespace relmech
