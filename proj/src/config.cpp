#include "cavmag/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace cavmag {

namespace {

struct Entry {
    std::string value;
    int line{0};
};

// section name ("" for top level) -> key -> entry
struct RawConfig {
    std::map<std::string, std::map<std::string, Entry>> entries;
    std::set<std::string> declared;  // section headers written in the text
};

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"", {"mode", "model"}},
        {"system", {"kappa", "gamma", "gamma1", "gamma2", "g", "g1", "g2", "s"}},
        {"sweep", {"variable", "min", "max", "points", "refine_points", "refine_peaks"}},
        {"drive", {"amplitude", "power", "frequency", "delta"}},
        {"dynamics", {"t_end", "dt", "stride", "m1", "m2", "compare_adiabatic"}},
        {"output", {"path", "format"}},
        {"si_units", {"kappa_hz"}},
    };
    return keys;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string qualified(const std::string& section, const std::string& key) {
    return section.empty() ? key : section + "." + key;
}

void insert_entry(RawConfig& raw, const std::string& section, const std::string& key, Entry entry) {
    const auto& keys = known_keys();
    const auto sec = keys.find(section);
    if (sec == keys.end()) {
        throw ConfigError(section, entry.line, "line " + std::to_string(entry.line) + ": unknown section [" + section + "]");
    }
    if (!sec->second.contains(key)) {
        throw ConfigError(key, entry.line,
                          "line " + std::to_string(entry.line) + ": unknown key '" + qualified(section, key) + "'");
    }
    auto& bucket = raw.entries[section];
    if (bucket.contains(key) && entry.line > 0) {
        throw ConfigError(key, entry.line,
                          "line " + std::to_string(entry.line) + ": duplicate key '" + qualified(section, key) + "'");
    }
    bucket[key] = std::move(entry);
}

RawConfig parse_raw(const std::string& text) {
    RawConfig raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string body = trim(line);
        if (body.empty() || body.front() == ';') {
            continue;
        }
        if (body.front() == '[') {
            if (body.back() != ']' || body.size() < 3) {
                throw ConfigError("", lineno, "line " + std::to_string(lineno) + ": malformed section header");
            }
            section = trim(std::string_view(body).substr(1, body.size() - 2));
            if (!known_keys().contains(section)) {
                throw ConfigError(section, lineno,
                                  "line " + std::to_string(lineno) + ": unknown section [" + section + "]");
            }
            raw.declared.insert(section);
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("", lineno, "line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(std::string_view(body).substr(0, eq));
        const std::string value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("", lineno, "line " + std::to_string(lineno) + ": missing key before '='");
        }
        if (value.empty()) {
            throw ConfigError(key, lineno, "line " + std::to_string(lineno) + ": missing value for '" + key + "'");
        }
        insert_entry(raw, section, key, Entry{value, lineno});
    }
    return raw;
}

void apply_overrides(RawConfig& raw, const ConfigOverrides& overrides) {
    for (const auto& [name, value] : overrides) {
        const auto dot = name.find('.');
        const std::string section = dot == std::string::npos ? "" : name.substr(0, dot);
        const std::string key = dot == std::string::npos ? name : name.substr(dot + 1);
        insert_entry(raw, section, key, Entry{value, 0});
    }
}

class Reader {
public:
    explicit Reader(const RawConfig& raw) : raw_(raw) {}

    // Written as a header in the text, or given any key (e.g. by an override).
    bool has_section(const std::string& section) const {
        return declared(section) || raw_.entries.contains(section);
    }

    bool declared(const std::string& section) const { return raw_.declared.contains(section); }

    const Entry* find(const std::string& section, const std::string& key) const {
        const auto it = raw_.entries.find(section);
        if (it == raw_.entries.end()) {
            return nullptr;
        }
        const auto kt = it->second.find(key);
        return kt == it->second.end() ? nullptr : &kt->second;
    }

    std::optional<double> number(const std::string& section, const std::string& key) const {
        const Entry* e = find(section, key);
        if (e == nullptr) {
            return std::nullopt;
        }
        double v = 0.0;
        const char* first = e->value.data();
        const char* last = first + e->value.size();
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
            throw ConfigError(key, e->line, where(*e) + "'" + qualified(section, key) + "' is not a finite number: " + e->value);
        }
        return v;
    }

    std::optional<std::size_t> count(const std::string& section, const std::string& key) const {
        const Entry* e = find(section, key);
        if (e == nullptr) {
            return std::nullopt;
        }
        std::size_t v = 0;
        const char* first = e->value.data();
        const char* last = first + e->value.size();
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc{} || ptr != last) {
            throw ConfigError(key, e->line, where(*e) + "'" + qualified(section, key) + "' is not a non-negative integer: " + e->value);
        }
        return v;
    }

    std::optional<bool> flag(const std::string& section, const std::string& key) const {
        const Entry* e = find(section, key);
        if (e == nullptr) {
            return std::nullopt;
        }
        if (e->value == "true" || e->value == "1" || e->value == "yes") {
            return true;
        }
        if (e->value == "false" || e->value == "0" || e->value == "no") {
            return false;
        }
        throw ConfigError(key, e->line, where(*e) + "'" + qualified(section, key) + "' must be true or false");
    }

    std::optional<std::string> text(const std::string& section, const std::string& key) const {
        const Entry* e = find(section, key);
        return e == nullptr ? std::nullopt : std::optional<std::string>(e->value);
    }

    int line(const std::string& section, const std::string& key) const {
        const Entry* e = find(section, key);
        return e == nullptr ? 0 : e->line;
    }

    static std::string where(const Entry& e) {
        return e.line > 0 ? "line " + std::to_string(e.line) + ": " : "override: ";
    }

private:
    const RawConfig& raw_;
};

[[noreturn]] void fail(const std::string& field, const std::string& what, int line = 0) {
    throw ConfigError(field, line, what);
}

RunMode parse_mode(const Reader& r) {
    const auto v = r.text("", "mode");
    if (!v) {
        fail("mode", "missing required field 'mode'");
    }
    static const std::map<std::string, RunMode> modes{
        {"eig-sweep", RunMode::EigSweep},         {"response-sweep", RunMode::ResponseSweep},
        {"reflection-sweep", RunMode::ReflectionSweep}, {"ep-find", RunMode::EpFind},
        {"adiabatic-compare", RunMode::AdiabaticCompare}, {"dynamics", RunMode::Dynamics},
    };
    const auto it = modes.find(*v);
    if (it == modes.end()) {
        fail("mode", "unknown mode '" + *v + "'", r.line("", "mode"));
    }
    return it->second;
}

SystemParams parse_system(const Reader& r) {
    SystemParams p;
    if (!r.has_section("system")) {
        return p;
    }
    // An explicit [system] block must state kappa, which fixes the rate unit.
    const auto kappa = r.number("system", "kappa");
    if (!kappa && r.declared("system")) {
        fail("kappa", "[system] is missing required field 'kappa'");
    }
    if (kappa) {
        p.kappa = *kappa;
    }

    auto pair = [&](const char* both, const char* first, const char* second, double& a, double& b) {
        const auto shared = r.number("system", both);
        const auto x = r.number("system", first);
        const auto y = r.number("system", second);
        if (shared && (x || y)) {
            fail(both, std::string("'") + both + "' conflicts with '" + (x ? first : second) + "'",
                 r.line("system", both));
        }
        if (shared) {
            a = b = *shared;
        }
        if (x) {
            a = *x;
        }
        if (y) {
            b = *y;
        }
    };
    pair("gamma", "gamma1", "gamma2", p.gamma1, p.gamma2);
    pair("g", "g1", "g2", p.g1, p.g2);
    if (const auto s = r.number("system", "s")) {
        p.s = *s;
    }
    try {
        p.validate();
    } catch (const ParameterError& e) {
        fail(e.field(), std::string("[system] ") + e.what());
    }
    return p;
}

DriveSpec parse_drive(const Reader& r) {
    DriveSpec d;
    if (!r.has_section("drive")) {
        d.amplitude = 1.0;
        return d;
    }
    d.amplitude = r.number("drive", "amplitude");
    d.power = r.number("drive", "power");
    d.frequency = r.number("drive", "frequency");
    if (const auto delta = r.number("drive", "delta")) {
        d.delta = *delta;
    }
    if (!d.amplitude && !d.power && !d.frequency) {
        if (r.declared("drive")) {
            fail("drive", "[drive] needs 'amplitude' or 'power' with 'frequency'");
        }
        d.amplitude = 1.0;
    }
    if (d.amplitude && (d.power || d.frequency)) {
        fail("amplitude", "[drive] 'amplitude' and 'power'/'frequency' are mutually exclusive",
             r.line("drive", "amplitude"));
    }
    if (d.power && !d.frequency) {
        fail("frequency", "[drive] 'power' requires 'frequency'", r.line("drive", "power"));
    }
    if (d.frequency && !d.power) {
        fail("power", "[drive] 'frequency' requires 'power'", r.line("drive", "frequency"));
    }
    try {
        DriveParams{d.delta, d.resolved_amplitude()}.validate();
    } catch (const ParameterError& e) {
        fail(e.field(), std::string("[drive] ") + e.what());
    }
    return d;
}

std::optional<SweepSpec> parse_sweep(const Reader& r, RunMode mode) {
    const bool wants_sweep = mode != RunMode::Dynamics;
    if (!wants_sweep) {
        if (r.has_section("sweep")) {
            fail("sweep", "mode 'dynamics' does not take a [sweep] section");
        }
        return std::nullopt;
    }
    if (!r.has_section("sweep")) {
        fail("sweep", "mode '" + to_string(mode) + "' requires a [sweep] section");
    }
    SweepSpec sw;
    const auto var = r.text("sweep", "variable");
    if (!var) {
        fail("variable", "[sweep] is missing required field 'variable'");
    }
    const std::string expected =
        (mode == RunMode::ResponseSweep || mode == RunMode::ReflectionSweep) ? "delta" : "s";
    if (*var != expected) {
        fail("variable", "mode '" + to_string(mode) + "' sweeps '" + expected + "', not '" + *var + "'",
             r.line("sweep", "variable"));
    }
    sw.variable = *var;
    const auto lo = r.number("sweep", "min");
    const auto hi = r.number("sweep", "max");
    const auto n = r.count("sweep", "points");
    if (!lo) {
        fail("min", "[sweep] is missing required field 'min'");
    }
    if (!hi) {
        fail("max", "[sweep] is missing required field 'max'");
    }
    if (!n) {
        fail("points", "[sweep] is missing required field 'points'");
    }
    if (!(*hi > *lo)) {
        fail("max", "[sweep] 'max' must exceed 'min'", r.line("sweep", "max"));
    }
    if (*n < 2) {
        fail("points", "[sweep] 'points' must be >= 2", r.line("sweep", "points"));
    }
    sw.min = *lo;
    sw.max = *hi;
    sw.points = *n;
    sw.refine_points = r.count("sweep", "refine_points").value_or(0);
    return sw;
}

std::optional<DynamicsSpec> parse_dynamics(const Reader& r, RunMode mode) {
    if (mode != RunMode::Dynamics) {
        if (r.has_section("dynamics")) {
            fail("dynamics", "[dynamics] is only valid in mode 'dynamics'");
        }
        return std::nullopt;
    }
    DynamicsSpec d;
    if (const auto v = r.number("dynamics", "t_end")) {
        d.t_end = *v;
    }
    if (const auto v = r.number("dynamics", "dt")) {
        d.dt = *v;
    }
    if (const auto v = r.count("dynamics", "stride")) {
        d.stride = *v;
    }
    if (const auto v = r.number("dynamics", "m1")) {
        d.m1 = *v;
    }
    if (const auto v = r.number("dynamics", "m2")) {
        d.m2 = *v;
    }
    if (const auto v = r.flag("dynamics", "compare_adiabatic")) {
        d.compare_adiabatic = *v;
    }
    if (!(d.t_end > 0.0)) {
        fail("t_end", "[dynamics] 't_end' must be > 0", r.line("dynamics", "t_end"));
    }
    if (!(d.dt > 0.0)) {
        fail("dt", "[dynamics] 'dt' must be > 0", r.line("dynamics", "dt"));
    }
    if (d.stride == 0) {
        fail("stride", "[dynamics] 'stride' must be >= 1", r.line("dynamics", "stride"));
    }
    if (d.compare_adiabatic && d.m1 == 0.0 && d.m2 == 0.0) {
        fail("m1", "[dynamics] compare_adiabatic needs a nonzero initial magnon state (m1, m2)");
    }
    return d;
}

}  // namespace

std::string to_string(RunMode mode) {
    switch (mode) {
        case RunMode::EigSweep: return "eig-sweep";
        case RunMode::ResponseSweep: return "response-sweep";
        case RunMode::ReflectionSweep: return "reflection-sweep";
        case RunMode::EpFind: return "ep-find";
        case RunMode::AdiabaticCompare: return "adiabatic-compare";
        case RunMode::Dynamics: return "dynamics";
    }
    return "unknown";
}

std::string to_string(OutputFormat format) {
    switch (format) {
        case OutputFormat::Csv: return "csv";
        case OutputFormat::Json: return "json";
        case OutputFormat::Both: return "both";
    }
    return "unknown";
}

std::string to_string(SpectrumModel model) {
    return model == SpectrumModel::Full ? "full" : "adiabatic";
}

double DriveSpec::resolved_amplitude() const {
    if (amplitude) {
        return *amplitude;
    }
    if (power && frequency) {
        return drive_amplitude_from_power(*power, *frequency);
    }
    return 1.0;
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

RunConfig parse_config(const std::string& text, const ConfigOverrides& overrides) {
    RawConfig raw = parse_raw(text);
    apply_overrides(raw, overrides);
    const Reader r(raw);

    RunConfig cfg;
    cfg.mode = parse_mode(r);
    if (const auto model = r.text("", "model")) {
        if (*model == "full") {
            cfg.model = SpectrumModel::Full;
        } else if (*model == "adiabatic") {
            cfg.model = SpectrumModel::Adiabatic;
        } else {
            fail("model", "unknown model '" + *model + "' (expected full or adiabatic)", r.line("", "model"));
        }
        if (cfg.model == SpectrumModel::Adiabatic && cfg.mode != RunMode::EigSweep && cfg.mode != RunMode::EpFind) {
            fail("model", "model 'adiabatic' only applies to eig-sweep and ep-find", r.line("", "model"));
        }
    }
    cfg.system = parse_system(r);
    cfg.sweep = parse_sweep(r, cfg.mode);
    cfg.refine_peaks = r.flag("sweep", "refine_peaks").value_or(false);
    cfg.drive = parse_drive(r);
    cfg.dynamics = parse_dynamics(r, cfg.mode);

    if (const auto path = r.text("output", "path")) {
        cfg.output_path = *path;
    }
    if (const auto fmt = r.text("output", "format")) {
        if (*fmt == "csv") {
            cfg.format = OutputFormat::Csv;
        } else if (*fmt == "json") {
            cfg.format = OutputFormat::Json;
        } else if (*fmt == "both") {
            cfg.format = OutputFormat::Both;
        } else {
            fail("format", "unknown output format '" + *fmt + "' (expected csv, json or both)", r.line("output", "format"));
        }
    }
    if (r.has_section("si_units")) {
        const auto hz = r.number("si_units", "kappa_hz");
        if (!hz) {
            fail("kappa_hz", "[si_units] is missing required field 'kappa_hz'");
        }
        if (!(*hz > 0.0)) {
            fail("kappa_hz", "[si_units] 'kappa_hz' must be > 0", r.line("si_units", "kappa_hz"));
        }
        cfg.kappa_hz = *hz;
    }
    return cfg;
}

std::string to_config_text(const RunConfig& c) {
    std::ostringstream out;
    auto kv = [&](const char* key, const std::string& value) { out << key << " = " << value << '\n'; };
    auto num = [&](const char* key, double value) { kv(key, format_double(value)); };

    kv("mode", to_string(c.mode));
    if (c.model != SpectrumModel::Full) {
        kv("model", to_string(c.model));
    }
    out << "\n[system]\n";
    num("kappa", c.system.kappa);
    num("gamma1", c.system.gamma1);
    num("gamma2", c.system.gamma2);
    num("g1", c.system.g1);
    num("g2", c.system.g2);
    num("s", c.system.s);
    if (c.sweep) {
        out << "\n[sweep]\n";
        kv("variable", c.sweep->variable);
        num("min", c.sweep->min);
        num("max", c.sweep->max);
        kv("points", std::to_string(c.sweep->points));
        if (c.sweep->refine_points > 0) {
            kv("refine_points", std::to_string(c.sweep->refine_points));
        }
        if (c.refine_peaks) {
            kv("refine_peaks", "true");
        }
    }
    out << "\n[drive]\n";
    if (c.drive.amplitude) {
        num("amplitude", *c.drive.amplitude);
    }
    if (c.drive.power) {
        num("power", *c.drive.power);
    }
    if (c.drive.frequency) {
        num("frequency", *c.drive.frequency);
    }
    if (!c.drive.amplitude && !c.drive.power && !c.drive.frequency) {
        num("amplitude", 1.0);
    }
    num("delta", c.drive.delta);
    if (c.dynamics) {
        out << "\n[dynamics]\n";
        num("t_end", c.dynamics->t_end);
        num("dt", c.dynamics->dt);
        kv("stride", std::to_string(c.dynamics->stride));
        num("m1", c.dynamics->m1);
        num("m2", c.dynamics->m2);
        kv("compare_adiabatic", c.dynamics->compare_adiabatic ? "true" : "false");
    }
    out << "\n[output]\n";
    kv("path", c.output_path);
    kv("format", to_string(c.format));
    if (c.kappa_hz) {
        out << "\n[si_units]\n";
        num("kappa_hz", *c.kappa_hz);
    }
    return out.str();
}

}  // namespace cavmag
