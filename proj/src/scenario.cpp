#include "irssim/scenario.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"

#include "irssim/pathloss.hpp"

namespace irssim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

std::string trimmed(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// "<number> <unit>" -> (number, unit); unit may be empty
bool split_unit(const std::string& text, double& value, std::string& unit) {
    const std::string t = trimmed(text);
    if (t.empty()) return false;
    size_t pos = 0;
    try {
        value = std::stod(t, &pos);
    } catch (const std::exception&) {
        return false;
    }
    unit = trimmed(t.substr(pos));
    return true;
}

void expect_keys(const json& j, const std::string& where,
                 std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok) fail("unknown key '" + it.key() + "' in " + where);
    }
}

double get_number(const json& v, const std::string& name) {
    if (!v.is_number()) fail(name + " must be a number");
    return v.get<double>();
}

long long get_integer(const json& v, const std::string& name) {
    if (!v.is_number_integer() && !v.is_number_unsigned())
        fail(name + " must be an integer");
    return v.get<long long>();
}

std::uint64_t get_seed(const json& v, const std::string& name) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        const long long s = v.get<long long>();
        if (s < 0) fail(name + " must be non-negative");
        return std::uint64_t(s);
    }
    fail(name + " must be an integer");
}

double get_power_value(const json& v, const std::string& name) {
    if (v.is_number()) {
        const double w = v.get<double>();
        if (!(w > 0.0)) fail(name + " must be positive");
        return w;
    }
    if (v.is_string()) {
        double w = 0.0;
        try {
            w = parse_power_text(v.get<std::string>());
        } catch (const ConfigError& e) {
            fail(name + ": " + e.what());
        }
        if (!(w > 0.0)) fail(name + " must be positive");
        return w;
    }
    fail(name + " must be a number in watts or a unit string");
}

double get_ratio_value(const json& v, const std::string& name) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        try {
            return parse_ratio_text(v.get<std::string>());
        } catch (const ConfigError& e) {
            fail(name + ": " + e.what());
        }
    }
    fail(name + " must be a number or a 'x dB' string");
}

std::vector<double> get_number_list(const json& v, const std::string& name) {
    if (!v.is_array()) fail(name + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(get_number(e, name + " entry"));
    return out;
}

std::vector<int> get_int_list(const json& v, const std::string& name) {
    if (!v.is_array()) fail(name + " must be an array of integers");
    std::vector<int> out;
    out.reserve(v.size());
    for (const auto& e : v) out.push_back(int(get_integer(e, name + " entry")));
    return out;
}

FadingKind parse_fading_kind(const std::string& s, const std::string& name) {
    if (s == "los") return FadingKind::los;
    if (s == "rayleigh") return FadingKind::rayleigh;
    if (s == "rician") return FadingKind::rician;
    fail(name + ": unknown fading kind '" + s + "'");
}

PatternKind parse_pattern_kind(const std::string& s, const std::string& name) {
    if (s == "dft") return PatternKind::dft;
    if (s == "onoff") return PatternKind::onoff;
    if (s == "dft_quantized") return PatternKind::dft_quantized;
    if (s == "random") return PatternKind::random;
    fail(name + ": unknown training pattern '" + s + "'");
}

LinkConfig parse_link(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where + " must be an object");
    expect_keys(j, where,
                {"kind", "ref_gain_db", "exponent", "distance", "rician_k",
                 "taps", "tap_decay_db"});
    LinkConfig link;
    if (j.contains("kind"))
        link.kind = parse_fading_kind(j.at("kind").get<std::string>(), where + ".kind");
    if (j.contains("ref_gain_db"))
        link.ref_gain_db = get_number(j.at("ref_gain_db"), where + ".ref_gain_db");
    if (j.contains("exponent")) {
        link.exponent = get_number(j.at("exponent"), where + ".exponent");
        if (link.exponent < 0.0) fail(where + ".exponent must be non-negative");
    }
    if (j.contains("distance")) {
        link.distance = get_number(j.at("distance"), where + ".distance");
        if (!(link.distance > 0.0)) fail(where + ".distance must be positive");
    }
    if (j.contains("rician_k")) {
        link.rician_k = get_ratio_value(j.at("rician_k"), where + ".rician_k");
        if (link.rician_k < 0.0) fail(where + ".rician_k must be non-negative");
    }
    if (j.contains("taps")) {
        link.taps = int(get_integer(j.at("taps"), where + ".taps"));
        if (link.taps < 1) fail(where + ".taps must be at least 1");
    }
    if (j.contains("tap_decay_db")) {
        link.tap_decay_db =
            get_number(j.at("tap_decay_db"), where + ".tap_decay_db");
        if (link.tap_decay_db < 0.0)
            fail(where + ".tap_decay_db must be non-negative");
    }
    return link;
}

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace

double parse_power_text(const std::string& text) {
    double value = 0.0;
    std::string unit;
    if (!split_unit(text, value, unit))
        throw ConfigError("malformed power value '" + text + "'");
    if (unit.empty() || unit == "W") return value;
    if (unit == "mW") return value * 1e-3;
    if (unit == "uW") return value * 1e-6;
    if (unit == "dBm") return std::pow(10.0, (value - 30.0) / 10.0);
    if (unit == "dBW") return std::pow(10.0, value / 10.0);
    throw ConfigError("unknown power unit '" + unit + "' in '" + text + "'");
}

double parse_ratio_text(const std::string& text) {
    double value = 0.0;
    std::string unit;
    if (!split_unit(text, value, unit))
        throw ConfigError("malformed ratio value '" + text + "'");
    if (unit.empty()) return value;
    if (unit == "dB") return std::pow(10.0, value / 10.0);
    throw ConfigError("unknown ratio unit '" + unit + "' in '" + text + "'");
}

FadingSpec LinkConfig::fading() const {
    FadingSpec spec;
    spec.kind = kind;
    spec.rician_k = rician_k;
    spec.path_loss.ref_gain_db = ref_gain_db;
    spec.path_loss.exponent = exponent;
    spec.distance = distance;
    spec.tap_decay_db = tap_decay_db;
    return spec;
}

const LinkConfig& Scenario::link(const std::string& name) const {
    const auto it = links.find(name);
    if (it == links.end()) fail("missing link configuration '" + name + "'");
    return it->second;
}

static Scenario walk_scenario(const json& j) {
    expect_keys(j, "scenario",
                {"description", "trials", "seed", "elements", "element_grid",
                 "tx_antennas", "rx_antennas", "transmit_power", "power_dbm_grid",
                 "noise_power", "links", "channel_models", "distance_grid",
                 "irs_along", "irs_offset", "ofdm", "options", "estimation",
                 "placement", "mac"});

    Scenario s;
    if (j.contains("description")) {
        if (!j.at("description").is_string()) fail("description must be a string");
        s.description = j.at("description").get<std::string>();
    }
    if (j.contains("trials")) {
        s.trials = int(get_integer(j.at("trials"), "trials"));
        if (s.trials < 1) fail("trials must be at least 1");
    }
    if (j.contains("seed")) s.base_seed = get_seed(j.at("seed"), "seed");
    if (j.contains("elements")) {
        s.elements = int(get_integer(j.at("elements"), "elements"));
        if (s.elements < 0) fail("elements must be non-negative");
    }
    if (j.contains("element_grid")) {
        s.element_grid = get_int_list(j.at("element_grid"), "element_grid");
        for (int n : s.element_grid)
            if (n < 1) fail("element_grid entries must be positive");
    }
    if (j.contains("tx_antennas")) {
        s.tx_antennas = int(get_integer(j.at("tx_antennas"), "tx_antennas"));
        if (s.tx_antennas < 1) fail("tx_antennas must be at least 1");
    }
    if (j.contains("rx_antennas")) {
        s.rx_antennas = int(get_integer(j.at("rx_antennas"), "rx_antennas"));
        if (s.rx_antennas < 1) fail("rx_antennas must be at least 1");
    }
    if (j.contains("transmit_power"))
        s.transmit_power_w = get_power_value(j.at("transmit_power"), "transmit_power");
    if (j.contains("power_dbm_grid"))
        s.power_dbm_grid = get_number_list(j.at("power_dbm_grid"), "power_dbm_grid");
    if (j.contains("noise_power"))
        s.noise_power_w = get_power_value(j.at("noise_power"), "noise_power");
    if (j.contains("links")) {
        const json& lj = j.at("links");
        if (!lj.is_object()) fail("links must be an object");
        expect_keys(lj, "links", {"ap_user", "ap_irs", "irs_user"});
        for (auto it = lj.begin(); it != lj.end(); ++it)
            s.links[it.key()] = parse_link(it.value(), "links." + it.key());
    }
    if (j.contains("channel_models")) {
        const json& mj = j.at("channel_models");
        if (!mj.is_array()) fail("channel_models must be an array");
        for (size_t i = 0; i < mj.size(); ++i) {
            const std::string where = "channel_models[" + std::to_string(i) + "]";
            const json& m = mj[i];
            if (!m.is_object()) fail(where + " must be an object");
            expect_keys(m, where, {"label", "kind", "exponent", "rician_k"});
            ModelVariant v;
            if (!m.contains("label") || !m.at("label").is_string() ||
                m.at("label").get<std::string>().empty())
                fail(where + ".label must be a non-empty string");
            v.label = m.at("label").get<std::string>();
            if (m.contains("kind"))
                v.kind = parse_fading_kind(m.at("kind").get<std::string>(), where + ".kind");
            if (m.contains("exponent")) {
                v.exponent = get_number(m.at("exponent"), where + ".exponent");
                if (v.exponent < 0.0) fail(where + ".exponent must be non-negative");
            }
            if (m.contains("rician_k")) {
                v.rician_k = get_ratio_value(m.at("rician_k"), where + ".rician_k");
                if (v.rician_k < 0.0) fail(where + ".rician_k must be non-negative");
            }
            s.channel_models.push_back(std::move(v));
        }
    }
    if (j.contains("distance_grid")) {
        s.distance_grid = get_number_list(j.at("distance_grid"), "distance_grid");
        for (double d : s.distance_grid)
            if (!(d > 0.0)) fail("distance_grid entries must be positive");
    }
    if (j.contains("irs_along")) s.irs_along = get_number(j.at("irs_along"), "irs_along");
    if (j.contains("irs_offset")) s.irs_offset = get_number(j.at("irs_offset"), "irs_offset");
    if (j.contains("ofdm")) {
        const json& oj = j.at("ofdm");
        if (!oj.is_object()) fail("ofdm must be an object");
        expect_keys(oj, "ofdm", {"subcarriers", "cp_length"});
        OfdmSpec spec;
        if (oj.contains("subcarriers")) {
            spec.subcarriers = int(get_integer(oj.at("subcarriers"), "ofdm.subcarriers"));
            if (spec.subcarriers < 1) fail("ofdm.subcarriers must be at least 1");
        }
        if (oj.contains("cp_length")) {
            spec.cp_length = int(get_integer(oj.at("cp_length"), "ofdm.cp_length"));
            if (spec.cp_length < 0) fail("ofdm.cp_length must be non-negative");
        }
        s.ofdm = spec;
    }
    if (j.contains("options")) {
        const json& oj = j.at("options");
        if (!oj.is_object()) fail("options must be an object");
        expect_keys(oj, "options", {"max_sweeps", "tol", "phase_grid", "init", "init_seed"});
        if (oj.contains("max_sweeps")) {
            s.options.max_sweeps = int(get_integer(oj.at("max_sweeps"), "options.max_sweeps"));
            if (s.options.max_sweeps < 1) fail("options.max_sweeps must be at least 1");
        }
        if (oj.contains("tol")) {
            s.options.tol = get_number(oj.at("tol"), "options.tol");
            if (!(s.options.tol > 0.0)) fail("options.tol must be positive");
        }
        if (oj.contains("phase_grid")) {
            s.options.phase_grid = int(get_integer(oj.at("phase_grid"), "options.phase_grid"));
            if (s.options.phase_grid < 8) fail("options.phase_grid must be at least 8");
        }
        if (oj.contains("init")) {
            const std::string init = oj.at("init").get<std::string>();
            if (init == "zero_phase") s.options.init = AoOptions::Init::zero_phase;
            else if (init == "aligned") s.options.init = AoOptions::Init::aligned;
            else if (init == "random") s.options.init = AoOptions::Init::random;
            else fail("options.init: unknown value '" + init + "'");
        }
        if (oj.contains("init_seed"))
            s.options.init_seed = get_seed(oj.at("init_seed"), "options.init_seed");
    }
    if (j.contains("estimation")) {
        const json& ej = j.at("estimation");
        if (!ej.is_object()) fail("estimation must be an object");
        expect_keys(ej, "estimation",
                    {"grid_rows", "grid_cols", "coherence", "pilot_snr_db",
                     "data_snr_db", "correlation", "group_counts", "patterns",
                     "phase_levels"});
        EstimationConfig e;
        if (ej.contains("grid_rows"))
            e.grid_rows = int(get_integer(ej.at("grid_rows"), "estimation.grid_rows"));
        if (ej.contains("grid_cols"))
            e.grid_cols = int(get_integer(ej.at("grid_cols"), "estimation.grid_cols"));
        if (e.grid_rows < 1 || e.grid_cols < 1)
            fail("estimation grid dimensions must be positive");
        if (ej.contains("coherence")) {
            e.coherence = int(get_integer(ej.at("coherence"), "estimation.coherence"));
            if (e.coherence < 2) fail("estimation.coherence must be at least 2");
        }
        if (ej.contains("pilot_snr_db"))
            e.pilot_snr_db = get_number(ej.at("pilot_snr_db"), "estimation.pilot_snr_db");
        if (ej.contains("data_snr_db"))
            e.data_snr_db = get_number(ej.at("data_snr_db"), "estimation.data_snr_db");
        if (ej.contains("correlation")) {
            e.correlation = get_number(ej.at("correlation"), "estimation.correlation");
            if (e.correlation < 0.0 || e.correlation > 1.0)
                fail("estimation.correlation must lie in [0,1]");
        }
        if (ej.contains("group_counts")) {
            e.group_counts = get_int_list(ej.at("group_counts"), "estimation.group_counts");
            for (int g : e.group_counts)
                if (g < 1) fail("estimation.group_counts entries must be positive");
        }
        if (ej.contains("patterns")) {
            const json& pj = ej.at("patterns");
            if (!pj.is_array()) fail("estimation.patterns must be an array");
            for (const auto& p : pj)
                e.patterns.push_back(
                    parse_pattern_kind(p.get<std::string>(), "estimation.patterns"));
        }
        if (ej.contains("phase_levels")) {
            e.phase_levels = int(get_integer(ej.at("phase_levels"), "estimation.phase_levels"));
            if (e.phase_levels < 2) fail("estimation.phase_levels must be at least 2");
        }
        s.estimation = std::move(e);
    }
    if (j.contains("placement")) {
        const json& pj = j.at("placement");
        if (!pj.is_object()) fail("placement must be an object");
        expect_keys(pj, "placement", {"ref_gain_db", "span", "height", "standoff_grid"});
        PlacementConfig p;
        if (pj.contains("ref_gain_db"))
            p.ref_gain_db = get_number(pj.at("ref_gain_db"), "placement.ref_gain_db");
        if (pj.contains("span")) {
            p.span = get_number(pj.at("span"), "placement.span");
            if (!(p.span > 0.0)) fail("placement.span must be positive");
        }
        if (pj.contains("height")) {
            p.height = get_number(pj.at("height"), "placement.height");
            if (!(p.height > 0.0)) fail("placement.height must be positive");
        }
        if (pj.contains("standoff_grid")) {
            p.standoff_grid = get_number_list(pj.at("standoff_grid"), "placement.standoff_grid");
            for (double d : p.standoff_grid)
                if (d < 0.0 || d > p.span)
                    fail("placement.standoff_grid entries must lie in [0, span]");
        }
        s.placement = std::move(p);
    }
    if (j.contains("mac")) {
        const json& mj = j.at("mac");
        if (!mj.is_object()) fail("mac must be an object");
        expect_keys(mj, "mac",
                    {"ref_gain_db", "terminal_gap", "user_span", "user_angle_deg",
                     "boundary_points", "ao_starts"});
        MacConfig m;
        if (mj.contains("ref_gain_db"))
            m.ref_gain_db = get_number(mj.at("ref_gain_db"), "mac.ref_gain_db");
        if (mj.contains("terminal_gap")) {
            m.terminal_gap = get_number(mj.at("terminal_gap"), "mac.terminal_gap");
            if (!(m.terminal_gap > 0.0)) fail("mac.terminal_gap must be positive");
        }
        if (mj.contains("user_span")) {
            m.user_span = get_number_list(mj.at("user_span"), "mac.user_span");
            for (double d : m.user_span)
                if (!(d > 0.0)) fail("mac.user_span entries must be positive");
        }
        if (mj.contains("user_angle_deg"))
            m.user_angle_deg = get_number_list(mj.at("user_angle_deg"), "mac.user_angle_deg");
        if (m.user_span.size() != m.user_angle_deg.size())
            fail("mac.user_span and mac.user_angle_deg must have equal length");
        if (mj.contains("boundary_points")) {
            m.boundary_points = int(get_integer(mj.at("boundary_points"), "mac.boundary_points"));
            if (m.boundary_points < 2) fail("mac.boundary_points must be at least 2");
        }
        if (mj.contains("ao_starts")) {
            m.ao_starts = int(get_integer(mj.at("ao_starts"), "mac.ao_starts"));
            if (m.ao_starts < 1) fail("mac.ao_starts must be at least 1");
        }
        s.mac = std::move(m);
    }

    s.digest = fnv1a_hex(j.dump());
    return s;
}

Scenario parse_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(std::string("scenario parse error: ") + e.what());
    }
    if (!j.is_object()) fail("scenario document must be a JSON object");
    try {
        return walk_scenario(j);
    } catch (const json::exception& e) {
        fail(std::string("scenario error: ") + e.what());
    }
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("cannot read scenario file: " + path);
    return parse_scenario(buf.str());
}

}  // namespace irssim
