// config.cpp — Unit-aware key/value parser, canonical serializer and config hash

#include "sitqd/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include "sitqd/error.hpp"
#include "sitqd/propagation.hpp"

namespace sitqd {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct Quantity {
    double value;
    std::string unit;
};

Quantity split_quantity(std::string_view text, const std::string& key) {
    text = trim(text);
    double v = 0.0;
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    if (!text.empty() && text.front() == '+') {
        ++begin;
    }
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{}) {
        throw ConfigError(key, "expected a number, got '" + std::string(text) + "'");
    }
    if (!std::isfinite(v)) {
        throw ConfigError(key, "value must be finite");
    }
    return {v, std::string(trim(std::string_view(res.ptr, static_cast<std::size_t>(end - res.ptr))))};
}

using UnitTable = std::map<std::string, std::function<double(double)>, std::less<>>;

double convert(std::string_view text, const std::string& key, const UnitTable& units,
               const std::string& default_unit) {
    auto q = split_quantity(text, key);
    if (q.unit.empty()) {
        q.unit = default_unit;
    }
    const auto it = units.find(q.unit);
    if (it == units.end()) {
        std::string accepted;
        for (const auto& [name, fn] : units) {
            accepted += accepted.empty() ? name : ", " + name;
        }
        throw ConfigError(key, "unit '" + q.unit + "' not accepted (expected " + accepted + ")");
    }
    return it->second(q.value);
}

double identity(double v) { return v; }

const UnitTable& frequency_units() {
    static const UnitTable t{
        {"rad/ps", identity},
        {"1/ps", identity},
        {"gamma_n", [](double v) { return v * units::gamma_n; }},
        {"meV", [](double v) { return units::energy_to_angular_frequency(v); }},
        {"ueV", [](double v) { return units::energy_to_angular_frequency(v * 1e-3); }},
    };
    return t;
}

const UnitTable& rate_units() {
    static const UnitTable t = [] {
        UnitTable r = frequency_units();
        r["ns"] = [](double v) { return 1.0 / (v * 1000.0); };
        r["ps"] = [](double v) { return 1.0 / v; };
        return r;
    }();
    return t;
}

const UnitTable& time_units() {
    static const UnitTable t{
        {"ps", identity},
        {"fs", [](double v) { return v * 1e-3; }},
        {"ns", [](double v) { return v * 1e3; }},
        {"1/gamma_n", [](double v) { return v / units::gamma_n; }},
    };
    return t;
}

std::size_t parse_count(std::string_view text, const std::string& key) {
    const auto q = split_quantity(text, key);
    if (!q.unit.empty() || q.value < 0.0 || q.value != std::floor(q.value) || q.value > 1e9) {
        throw ConfigError(key, "expected a non-negative integer, got '" + std::string(trim(text)) + "'");
    }
    return static_cast<std::size_t>(q.value);
}

double parse_plain(std::string_view text, const std::string& key) {
    const auto q = split_quantity(text, key);
    if (!q.unit.empty()) {
        throw ConfigError(key, "expected a plain number, got unit '" + q.unit + "'");
    }
    return q.value;
}

bool parse_switch(std::string_view text, const std::string& key) {
    const auto v = trim(text);
    if (v == "on" || v == "true" || v == "yes" || v == "1") {
        return true;
    }
    if (v == "off" || v == "false" || v == "no" || v == "0") {
        return false;
    }
    throw ConfigError(key, "expected on or off, got '" + std::string(v) + "'");
}

std::string parse_string(std::string_view text) {
    auto v = trim(text);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
        v = v.substr(1, v.size() - 2);
    }
    return std::string(v);
}

struct PendingLength {
    double value;
    std::string unit;
};

using Handler = std::function<void(SimConfig&, std::string_view, const std::string&)>;

// medium.length is handled by parse_length: its 1/alpha and gamma_n/eta units need the
// remaining keys first.
const std::map<std::string, Handler, std::less<>>& handlers() {
    static const std::map<std::string, Handler, std::less<>> table{
        {"bath.alpha_p",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.bath.alpha_p = convert(v, k, UnitTable{{"ps^2", identity}}, "ps^2");
         }},
        {"bath.omega_b",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.bath.omega_b = convert(v, k, frequency_units(), "rad/ps");
         }},
        {"bath.temperature",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.bath.temperature = convert(v, k, UnitTable{{"K", identity}}, "K");
         }},
        {"relax.gamma",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.relax.gamma = convert(v, k, rate_units(), "rad/ps");
         }},
        {"relax.gamma_d",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.relax.gamma_d = convert(v, k, rate_units(), "rad/ps");
         }},
        {"ensemble.sigma",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.ensemble.sigma = convert(v, k, frequency_units(), "rad/ps");
         }},
        {"ensemble.fwhm",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.ensemble.sigma = units::fwhm_to_sigma(convert(v, k, frequency_units(), "rad/ps"));
         }},
        {"ensemble.delta_c",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.ensemble.delta_c = convert(v, k, frequency_units(), "rad/ps");
         }},
        {"ensemble.scheme",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             try {
                 c.ensemble.scheme = ensemble_scheme_from_string(parse_string(v));
             } catch (const std::invalid_argument& e) {
                 throw ConfigError(k, e.what());
             }
         }},
        {"ensemble.n_nodes",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.ensemble.n_nodes = parse_count(v, k);
         }},
        {"ensemble.core_halfwidth",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.ensemble.resolved.core_halfwidth = convert(v, k, frequency_units(), "rad/ps");
         }},
        {"ensemble.core_spacing",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.ensemble.resolved.core_spacing = convert(v, k, frequency_units(), "rad/ps");
         }},
        {"ensemble.tail_growth",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.ensemble.resolved.tail_growth = parse_plain(v, k);
         }},
        {"ensemble.extent_sigmas",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.ensemble.resolved.extent_sigmas = parse_plain(v, k);
         }},
        {"ensemble.single_qd",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.ensemble.single_qd = parse_switch(v, k);
         }},
        {"medium.density",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.medium.density = convert(v, k,
                                        UnitTable{{"m^-3", identity},
                                                  {"cm^-3", [](double x) { return x * 1e6; }},
                                                  {"mm^-3", [](double x) { return x * 1e9; }}},
                                        "m^-3");
         }},
        {"medium.photon_energy",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.medium.photon_energy = convert(
                 v, k,
                 UnitTable{{"eV", identity},
                           {"meV", [](double x) { return x * 1e-3; }},
                           {"nm", [](double x) { return units::photon_energy(x); }}},
                 "eV");
         }},
        {"pulse.area",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.pulse.area = convert(
                 v, k, UnitTable{{"rad", identity}, {"pi", [](double x) { return x * units::pi; }}},
                 "rad");
         }},
        {"pulse.tau0",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.pulse.tau0 = convert(v, k, time_units(), "ps");
         }},
        {"pulse.center",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.pulse.center = convert(v, k, time_units(), "ps");
         }},
        {"grid.tau_window",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.grid.tau_window = convert(v, k, time_units(), "ps");
         }},
        {"grid.points_per_tau0",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.grid.points_per_tau0 = parse_count(v, k);
         }},
        {"grid.alpha_dzeta",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.grid.alpha_dzeta = parse_plain(v, k);
         }},
        {"grid.table_omega",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.grid.table_omega = parse_count(v, k);
         }},
        {"grid.table_delta",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.grid.table_delta = parse_count(v, k);
         }},
        {"toggles.phonons",
         [](SimConfig& c, std::string_view v, const std::string& k) { c.phonons = parse_switch(v, k); }},
        {"output.directory",
         [](SimConfig& c, std::string_view v, const std::string&) {
             c.output.directory = parse_string(v);
         }},
        {"output.slice_stride",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.output.slice_stride = parse_count(v, k);
         }},
        {"analysis.area_convention",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             try {
                 c.area_convention = area_convention_from_string(parse_string(v));
             } catch (const std::invalid_argument& e) {
                 throw ConfigError(k, e.what());
             }
         }},
        {"scan.observation_time",
         [](SimConfig& c, std::string_view v, const std::string& k) {
             c.observation_time = convert(v, k, time_units(), "ps");
         }},
    };
    return table;
}

PendingLength parse_length(std::string_view v, const std::string& k) {
    auto q = split_quantity(v, k);
    if (q.unit.empty()) {
        q.unit = "mm";
    }
    if (q.unit != "mm" && q.unit != "um" && q.unit != "1/alpha" && q.unit != "gamma_n/eta") {
        throw ConfigError(k, "unit '" + q.unit + "' not accepted (expected mm, um, 1/alpha, gamma_n/eta)");
    }
    return {q.value, q.unit};
}

void resolve_length(SimConfig& c, const PendingLength& p) {
    const std::string key = "medium.length";
    if (p.unit == "mm") {
        c.medium.length = p.value;
        return;
    }
    if (p.unit == "um") {
        c.medium.length = p.value * 1e-3;
        return;
    }
    const auto m = medium_params(c);
    if (p.unit == "1/alpha") {
        if (!(m.alpha > 0.0)) {
            throw ConfigError(key, "length in 1/alpha needs a non-zero extinction");
        }
        c.medium.length = p.value / m.alpha;
        return;
    }
    if (!(m.eta > 0.0)) {
        throw ConfigError(key, "length in gamma_n/eta needs a non-zero coupling constant");
    }
    c.medium.length = p.value * units::gamma_n / m.eta;
}

void require(bool ok, const char* key, const std::string& what) {
    if (!ok) {
        throw ConfigError(key, what);
    }
}

} // namespace

void SimConfig::validate() const {
    require(std::isfinite(bath.alpha_p) && bath.alpha_p >= 0.0, "bath.alpha_p", "must be >= 0");
    require(std::isfinite(bath.omega_b) && bath.omega_b > 0.0, "bath.omega_b", "must be > 0");
    require(std::isfinite(bath.temperature) && bath.temperature >= 0.0, "bath.temperature",
            "must be >= 0");
    require(std::isfinite(relax.gamma) && relax.gamma >= 0.0, "relax.gamma", "must be >= 0");
    require(std::isfinite(relax.gamma_d) && relax.gamma_d >= 0.0, "relax.gamma_d", "must be >= 0");
    require(std::isfinite(ensemble.sigma) && ensemble.sigma > 0.0, "ensemble.sigma", "must be > 0");
    require(std::isfinite(ensemble.delta_c), "ensemble.delta_c", "must be finite");
    if (!ensemble.single_qd && (ensemble.scheme == EnsembleScheme::gauss_hermite ||
                                ensemble.scheme == EnsembleScheme::trapezoid)) {
        require(ensemble.n_nodes >= 3, "ensemble.n_nodes", "must be >= 3");
    }
    require(ensemble.resolved.core_spacing > 0.0, "ensemble.core_spacing", "must be > 0");
    require(ensemble.resolved.core_halfwidth >= 0.0, "ensemble.core_halfwidth", "must be >= 0");
    require(ensemble.resolved.tail_growth >= 1.0, "ensemble.tail_growth", "must be >= 1");
    require(ensemble.resolved.extent_sigmas > 0.0, "ensemble.extent_sigmas", "must be > 0");
    require(std::isfinite(medium.density) && medium.density >= 0.0, "medium.density", "must be >= 0");
    require(std::isfinite(medium.length) && medium.length >= 0.0, "medium.length", "must be >= 0");
    require(std::isfinite(medium.photon_energy) && medium.photon_energy > 0.0,
            "medium.photon_energy", "must be > 0");
    require(std::isfinite(pulse.area), "pulse.area", "must be finite");
    require(std::isfinite(pulse.tau0) && pulse.tau0 > 0.0, "pulse.tau0", "must be > 0");
    require(std::isfinite(grid.tau_window) && grid.tau_window > 0.0, "grid.tau_window", "must be > 0");
    require(std::isfinite(pulse.center) && pulse.center >= 0.0 && pulse.center <= grid.tau_window,
            "pulse.center", "must lie inside [0, grid.tau_window]");
    require(grid.points_per_tau0 >= 4, "grid.points_per_tau0", "must be >= 4");
    require(grid.tau_window / pulse.tau0 * static_cast<double>(grid.points_per_tau0) < 1e7,
            "grid.points_per_tau0", "time grid would exceed 1e7 samples");
    require(grid.alpha_dzeta > 0.0 && grid.alpha_dzeta <= 1.0, "grid.alpha_dzeta",
            "must lie in (0, 1]");
    require(grid.table_omega >= 2, "grid.table_omega", "must be >= 2");
    require(grid.table_delta >= 2, "grid.table_delta", "must be >= 2");
    require(output.slice_stride >= 1, "output.slice_stride", "must be >= 1");
    require(std::isfinite(observation_time) && observation_time >= 0.0 &&
                observation_time <= grid.tau_window,
            "scan.observation_time", "must lie inside [0, grid.tau_window]");
}

SimConfig parse_config(std::string_view text) {
    SimConfig config;
    std::optional<PendingLength> length;
    const auto& table = handlers();
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = (eol == std::string_view::npos) ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const auto value = trim(line.substr(eq + 1));
        const auto it = table.find(key);
        if (it == table.end() && key != "medium.length") {
            throw ConfigError(key, "unknown key (line " + std::to_string(line_no) + ")");
        }
        if (value.empty()) {
            throw ConfigError(key, "missing value");
        }
        if (it == table.end()) {
            length = parse_length(value, key);
        } else {
            it->second(config, value, key);
        }
    }
    if (length) {
        config.validate();
        resolve_length(config, *length);
    }
    config.validate();
    return config;
}

SimConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("", "cannot open config file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string to_text(const SimConfig& c) {
    std::ostringstream out;
    auto kv = [&out](const char* key, const std::string& value, const char* unit = "") {
        out << key << " = " << value;
        if (*unit != '\0') {
            out << ' ' << unit;
        }
        out << '\n';
    };
    auto num = [](double v) { return format_number(v); };
    auto cnt = [](std::size_t v) { return std::to_string(v); };
    auto sw = [](bool v) { return std::string(v ? "on" : "off"); };

    out << "# phonon bath\n";
    kv("bath.alpha_p", num(c.bath.alpha_p), "ps^2");
    kv("bath.omega_b", num(c.bath.omega_b), "rad/ps");
    kv("bath.temperature", num(c.bath.temperature), "K");
    out << "# relaxation\n";
    kv("relax.gamma", num(c.relax.gamma), "rad/ps");
    kv("relax.gamma_d", num(c.relax.gamma_d), "rad/ps");
    out << "# inhomogeneous broadening\n";
    kv("ensemble.sigma", num(c.ensemble.sigma), "rad/ps");
    kv("ensemble.delta_c", num(c.ensemble.delta_c), "rad/ps");
    kv("ensemble.scheme", std::string(to_string(c.ensemble.scheme)));
    kv("ensemble.n_nodes", cnt(c.ensemble.n_nodes));
    kv("ensemble.core_halfwidth", num(c.ensemble.resolved.core_halfwidth), "rad/ps");
    kv("ensemble.core_spacing", num(c.ensemble.resolved.core_spacing), "rad/ps");
    kv("ensemble.tail_growth", num(c.ensemble.resolved.tail_growth));
    kv("ensemble.extent_sigmas", num(c.ensemble.resolved.extent_sigmas));
    kv("ensemble.single_qd", sw(c.ensemble.single_qd));
    out << "# medium\n";
    kv("medium.density", num(c.medium.density), "m^-3");
    kv("medium.length", num(c.medium.length), "mm");
    kv("medium.photon_energy", num(c.medium.photon_energy), "eV");
    out << "# input pulse\n";
    kv("pulse.area", num(c.pulse.area), "rad");
    kv("pulse.tau0", num(c.pulse.tau0), "ps");
    kv("pulse.center", num(c.pulse.center), "ps");
    out << "# numerics\n";
    kv("grid.tau_window", num(c.grid.tau_window), "ps");
    kv("grid.points_per_tau0", cnt(c.grid.points_per_tau0));
    kv("grid.alpha_dzeta", num(c.grid.alpha_dzeta));
    kv("grid.table_omega", cnt(c.grid.table_omega));
    kv("grid.table_delta", cnt(c.grid.table_delta));
    kv("toggles.phonons", sw(c.phonons));
    out << "# output and analysis\n";
    kv("output.directory", "\"" + c.output.directory + "\"");
    kv("output.slice_stride", cnt(c.output.slice_stride));
    kv("analysis.area_convention", std::string(to_string(c.area_convention)));
    kv("scan.observation_time", num(c.observation_time), "ps");
    return out.str();
}

std::string config_hash(const SimConfig& config) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (const char ch : to_text(config)) {
        hash ^= static_cast<unsigned char>(ch);
        hash *= 0x100000001b3ull;
    }
    std::ostringstream s;
    s << std::hex;
    s.width(16);
    s.fill('0');
    s << hash;
    return s.str();
}

} // namespace sitqd
