#include "paulloc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "paulloc/csv.hpp"

namespace paulloc {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

bool parse_double(const std::string& s, double& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto r = std::from_chars(b, e, out);
    return r.ec == std::errc{} && r.ptr == e;
}

bool parse_i64(const std::string& s, std::int64_t& out) {
    const char* b = s.data();
    const char* e = b + s.size();
    auto r = std::from_chars(b, e, out);
    return r.ec == std::errc{} && r.ptr == e;
}

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

const char* const SECTIONS[] = {"run",   "trap",      "grid",     "ensemble", "time",
                                "basis", "sweep",     "histogram", "poincare", "physical"};

class Entries {
  public:
    explicit Entries(const std::string& text) {
        std::istringstream in(text);
        std::string raw;
        int line = 0;
        std::string section;
        while (std::getline(in, raw)) {
            ++line;
            if (size_t h = raw.find('#'); h != std::string::npos) raw.erase(h);
            const std::string s = trim(raw);
            if (s.empty()) continue;
            if (s.front() == '[') {
                if (s.back() != ']') fail(line, "unterminated section header '" + s + "'");
                section = trim(s.substr(1, s.size() - 2));
                bool known = false;
                for (const char* name : SECTIONS) known = known || section == name;
                if (!known) fail(line, "unknown section '[" + section + "]'");
                continue;
            }
            const size_t eq = s.find('=');
            if (eq == std::string::npos) fail(line, "expected 'key = value', got '" + s + "'");
            const std::string key = trim(s.substr(0, eq));
            const std::string value = trim(s.substr(eq + 1));
            if (key.empty()) fail(line, "empty key");
            if (section.empty()) fail(line, "key '" + key + "' appears before any [section]");
            const std::string full = section + "." + key;
            auto [it, fresh] = map_.emplace(full, Entry{value, line});
            if (!fresh)
                fail(line, "duplicate key '" + full + "' (first set on line "
                               + std::to_string(it->second.line) + ")");
        }
    }

    const Entry* find(const std::string& full) {
        auto it = map_.find(full);
        if (it == map_.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    std::string get_string(const std::string& full, const std::string& def) {
        const Entry* e = find(full);
        return e ? e->value : def;
    }

    double get_double(const std::string& full, double def) {
        const Entry* e = find(full);
        if (!e) return def;
        double v;
        if (!parse_double(e->value, v) || !std::isfinite(v))
            fail(e->line, "key '" + full + "': expected a number, got '" + e->value + "'");
        return v;
    }

    std::int64_t get_i64(const std::string& full, std::int64_t def) {
        const Entry* e = find(full);
        if (!e) return def;
        std::int64_t v;
        if (!parse_i64(e->value, v))
            fail(e->line, "key '" + full + "': expected an integer, got '" + e->value + "'");
        return v;
    }

    int get_int(const std::string& full, int def) {
        const std::int64_t v = get_i64(full, def);
        if (v < INT32_MIN || v > INT32_MAX) {
            const Entry* e = map_.find(full) != map_.end() ? &map_.at(full) : nullptr;
            fail(e ? e->line : 0, "key '" + full + "': value out of range");
        }
        return static_cast<int>(v);
    }

    std::uint64_t get_u64(const std::string& full, std::uint64_t def) {
        const Entry* e = find(full);
        if (!e) return def;
        std::uint64_t v;
        const char* b = e->value.data();
        const char* end = b + e->value.size();
        auto r = std::from_chars(b, end, v);
        if (r.ec != std::errc{} || r.ptr != end)
            fail(e->line, "key '" + full + "': expected a non-negative integer, got '"
                              + e->value + "'");
        return v;
    }

    void check_all_used() const {
        for (const auto& [full, e] : map_)
            if (!e.used) fail(e.line, "unknown key '" + full + "'");
    }

  private:
    std::map<std::string, Entry> map_;
};

std::vector<PhasePoint> parse_seeds(const std::string& text, int line) {
    std::vector<PhasePoint> out;
    std::istringstream segs(text);
    std::string seg;
    while (std::getline(segs, seg, ';')) {
        seg = trim(seg);
        if (seg.empty()) continue;
        std::istringstream pair(seg);
        std::string sx, sp, extra;
        pair >> sx >> sp;
        PhasePoint pt;
        if (sx.empty() || sp.empty() || (pair >> extra) || !parse_double(sx, pt.x)
            || !parse_double(sp, pt.p))
            fail(line, "key 'poincare.seeds': expected 'x p; x p; ...', bad segment '" + seg
                           + "'");
        out.push_back(pt);
    }
    return out;
}

std::string seeds_to_string(const std::vector<PhasePoint>& seeds) {
    std::string out;
    for (size_t i = 0; i < seeds.size(); ++i) {
        if (i) out += "; ";
        out += format_exact(seeds[i].x) + " " + format_exact(seeds[i].p);
    }
    return out;
}

void require(bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(msg);
}

} // namespace

RunConfig parse_config(const std::string& text) {
    Entries e(text);
    RunConfig c;

    c.kind = e.get_string("run.kind", "");
    c.seed = e.get_u64("run.seed", c.seed);
    c.workers = e.get_int("run.workers", c.workers);
    c.out_dir = e.get_string("run.out_dir", c.out_dir);

    c.trap.a = e.get_double("trap.a", c.trap.a);
    c.trap.q = e.get_double("trap.q", c.trap.q);
    c.trap.coupling = e.get_double("trap.coupling", c.trap.coupling);
    c.trap.phase = e.get_double("trap.phase", c.trap.phase);
    c.trap.kbar = e.get_double("trap.kbar", c.trap.kbar);

    c.grid.x_min = e.get_double("grid.x_min", c.grid.x_min);
    c.grid.x_max = e.get_double("grid.x_max", c.grid.x_max);
    c.grid.n = e.get_int("grid.n_points", c.grid.n);
    c.grid.kbar = c.trap.kbar;

    c.ensemble_count = e.get_int("ensemble.count", c.ensemble_count);
    c.center_x = e.get_double("ensemble.center_x", c.center_x);
    c.center_p = e.get_double("ensemble.center_p", c.center_p);
    c.sigma_x2 = e.get_double("ensemble.sigma_x2", c.trap.kbar);
    c.sigma_p2 = e.get_double("ensemble.sigma_p2",
                              c.trap.kbar * c.trap.kbar / (4.0 * c.sigma_x2));

    c.periods = e.get_double("time.periods", c.periods);
    c.steps_per_period = e.get_int("time.steps_per_period", c.steps_per_period);
    c.snapshots_per_period = e.get_int("time.snapshots_per_period", c.snapshots_per_period);
    c.window_center = e.get_double("time.window_center", 0.95 * c.periods);
    c.window_width = e.get_double("time.window_width", 0.1 * c.periods);
    c.guard_mass = e.get_double("time.guard_mass", c.guard_mass);

    const std::string freq = e.get_string("basis.frequency", "auto");
    c.basis_size = e.get_int("basis.size", c.basis_size);
    c.monodromy_steps = e.get_int("basis.monodromy_steps", c.monodromy_steps);

    c.sweep_min = e.get_double("sweep.coupling_min", c.sweep_min);
    c.sweep_max = e.get_double("sweep.coupling_max", c.sweep_max);
    c.sweep_step = e.get_double("sweep.coupling_step", c.sweep_step);

    c.hist_bins = e.get_int("histogram.bins", c.hist_bins);
    c.hist_x_range = e.get_double("histogram.x_range", c.hist_x_range);
    c.hist_p_range = e.get_double("histogram.p_range", c.hist_p_range);

    if (const Entry* s = e.find("poincare.seeds")) c.seeds = parse_seeds(s->value, s->line);
    c.random_count = e.get_int("poincare.random_count", c.random_count);
    c.random_x_range = e.get_double("poincare.random_x_range", c.random_x_range);
    c.random_p_range = e.get_double("poincare.random_p_range", c.random_p_range);

    const Entry* amu = e.find("physical.mass_amu");
    const Entry* kg = e.find("physical.mass_kg");
    if (amu && kg)
        fail(kg->line, "'physical.mass_kg' conflicts with 'physical.mass_amu' on line "
                           + std::to_string(amu->line));
    if (amu || kg) {
        const Entry* m = amu ? amu : kg;
        if (!parse_double(m->value, c.mass_value) || !(c.mass_value > 0.0))
            fail(m->line, "ion mass must be a positive number, got '" + m->value + "'");
        c.mass_unit = amu ? MassUnit::amu : MassUnit::kg;
    }
    c.wavelength_nm = e.get_double("physical.wavelength_nm", c.wavelength_nm);
    c.rf_frequency_hz = e.get_double("physical.rf_frequency_hz", c.rf_frequency_hz);
    c.rabi_hz = e.get_double("physical.rabi_hz", c.rabi_hz);
    c.detuning_hz = e.get_double("physical.detuning_hz", c.detuning_hz);

    e.check_all_used();

    static const char* const KINDS[] = {"poincare", "evolve", "floquet", "sweep", "plan"};
    bool kind_ok = false;
    for (const char* k : KINDS) kind_ok = kind_ok || c.kind == k;
    require(!c.kind.empty(), "missing required key 'run.kind'");
    require(kind_ok, "run.kind must be one of poincare|evolve|floquet|sweep|plan, got '"
                         + c.kind + "'");
    require(c.workers >= 1, "run.workers must be at least 1");
    require(c.out_dir != "", "run.out_dir must not be empty");

    c.grid.validate();

    require(c.ensemble_count >= 1, "ensemble.count must be at least 1");
    require(c.sigma_x2 > 0.0, "ensemble.sigma_x2 must be positive");
    require(c.sigma_p2 > 0.0, "ensemble.sigma_p2 must be positive");

    require(c.periods > 0.0, "time.periods must be positive");
    require(c.steps_per_period >= 1, "time.steps_per_period must be at least 1");
    require(c.snapshots_per_period >= 1, "time.snapshots_per_period must be at least 1");
    require(c.steps_per_period % c.snapshots_per_period == 0,
            "time.steps_per_period must be a multiple of time.snapshots_per_period");
    require(c.window_width >= 0.0, "time.window_width must not be negative");
    require(c.window_center - 0.5 * c.window_width >= 0.0
                && c.window_center + 0.5 * c.window_width <= c.periods + 1e-9,
            "time window extends outside the simulated interval");
    require(c.guard_mass > 0.0 && c.guard_mass <= 1.0,
            "time.guard_mass must lie in (0, 1]");

    if (freq == "auto") {
        const MathieuResult m = mathieu_exponent(c.trap.a, c.trap.q);
        if (m.stable) {
            c.basis_frequency = m.exponent;
        } else {
            require(c.kind != "floquet" && c.kind != "sweep",
                    "basis.frequency is 'auto' but the trap (a=" + format_exact(c.trap.a)
                        + ", q=" + format_exact(c.trap.q)
                        + ") is unstable; give an explicit positive frequency");
            c.basis_frequency = 0.0;
        }
    } else {
        if (!parse_double(freq, c.basis_frequency) || !std::isfinite(c.basis_frequency)
            || c.basis_frequency < 0.0)
            throw ConfigError("basis.frequency must be 'auto' or a non-negative number, got '"
                              + freq + "'");
    }
    require(c.basis_size >= 1, "basis.size must be at least 1");
    require(c.monodromy_steps >= 1, "basis.monodromy_steps must be at least 1");
    if (c.kind == "floquet" || c.kind == "sweep")
        require(c.basis_frequency > 0.0, "basis.frequency must be positive for " + c.kind
                                             + " runs");

    require(c.sweep_step > 0.0, "sweep.coupling_step must be positive");
    require(c.sweep_max >= c.sweep_min,
            "sweep.coupling_max must not be below sweep.coupling_min");

    require(c.hist_bins >= 1, "histogram.bins must be at least 1");
    require(c.hist_x_range > 0.0, "histogram.x_range must be positive");
    require(c.hist_p_range > 0.0, "histogram.p_range must be positive");

    require(c.random_count >= 0, "poincare.random_count must not be negative");
    if (c.random_count > 0)
        require(c.random_x_range > 0.0 && c.random_p_range > 0.0,
                "poincare.random_x_range and random_p_range must be positive");
    if (c.kind == "poincare")
        require(!c.seeds.empty() || c.random_count > 0,
                "poincare runs need poincare.seeds or poincare.random_count");

    return c;
}

std::string emit_config(const RunConfig& c) {
    std::ostringstream out;
    auto kv = [&out](const char* key, const std::string& v) { out << key << " = " << v << "\n"; };
    auto kd = [&](const char* key, double v) { kv(key, format_exact(v)); };
    auto ki = [&](const char* key, std::int64_t v) { kv(key, std::to_string(v)); };

    out << "[run]\n";
    kv("kind", c.kind);
    kv("seed", std::to_string(c.seed));
    ki("workers", c.workers);
    kv("out_dir", c.out_dir);

    out << "\n[trap]\n";
    kd("a", c.trap.a);
    kd("q", c.trap.q);
    kd("coupling", c.trap.coupling);
    kd("phase", c.trap.phase);
    kd("kbar", c.trap.kbar);

    out << "\n[grid]\n";
    kd("x_min", c.grid.x_min);
    kd("x_max", c.grid.x_max);
    ki("n_points", c.grid.n);

    out << "\n[ensemble]\n";
    ki("count", c.ensemble_count);
    kd("center_x", c.center_x);
    kd("center_p", c.center_p);
    kd("sigma_x2", c.sigma_x2);
    kd("sigma_p2", c.sigma_p2);

    out << "\n[time]\n";
    kd("periods", c.periods);
    ki("steps_per_period", c.steps_per_period);
    ki("snapshots_per_period", c.snapshots_per_period);
    kd("window_center", c.window_center);
    kd("window_width", c.window_width);
    kd("guard_mass", c.guard_mass);

    out << "\n[basis]\n";
    kd("frequency", c.basis_frequency);
    ki("size", c.basis_size);
    ki("monodromy_steps", c.monodromy_steps);

    out << "\n[sweep]\n";
    kd("coupling_min", c.sweep_min);
    kd("coupling_max", c.sweep_max);
    kd("coupling_step", c.sweep_step);

    out << "\n[histogram]\n";
    ki("bins", c.hist_bins);
    kd("x_range", c.hist_x_range);
    kd("p_range", c.hist_p_range);

    out << "\n[poincare]\n";
    if (!c.seeds.empty()) kv("seeds", seeds_to_string(c.seeds));
    ki("random_count", c.random_count);
    kd("random_x_range", c.random_x_range);
    kd("random_p_range", c.random_p_range);

    out << "\n[physical]\n";
    if (c.mass_value > 0.0)
        kd(c.mass_unit == MassUnit::amu ? "mass_amu" : "mass_kg", c.mass_value);
    kd("wavelength_nm", c.wavelength_nm);
    kd("rf_frequency_hz", c.rf_frequency_hz);
    kd("rabi_hz", c.rabi_hz);
    kd("detuning_hz", c.detuning_hz);

    return out.str();
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_config(buf.str());
    } catch (const ConfigError& err) {
        throw ConfigError(path + ": " + err.what());
    }
}

PhysicalSetup physical_setup(const RunConfig& c) {
    PhysicalSetup s;
    s.mass = c.mass_value;
    s.mass_unit = c.mass_unit;
    if (c.wavelength_nm > 0.0) s.wavenumber = 2.0 * PI / (c.wavelength_nm * 1e-9);
    s.rf_omega = 2.0 * PI * c.rf_frequency_hz;
    s.rabi = 2.0 * PI * c.rabi_hz;
    s.detuning = 2.0 * PI * c.detuning_hz;
    s.a = c.trap.a;
    s.q = c.trap.q;
    s.phase = c.trap.phase;
    return s;
}

} // namespace paulloc
