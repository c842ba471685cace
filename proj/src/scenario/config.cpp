// SPDX-License-Identifier: Apache-2.0
#include "cryomux/scenario/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cryomux/io/number_format.hpp"
#include "cryomux/scenario/quantity.hpp"

namespace cryomux::scenario {

namespace {

using Dim = Dimension;

constexpr double kToneMatchToleranceHz = 1e6;

std::string join_diagnostics(const std::vector<Diagnostic>& diags) {
    std::ostringstream os;
    os << diags.size() << " problem(s) in assembly config";
    for (const auto& d : diags) {
        os << "\n  " << (d.path.empty() ? "<root>" : d.path) << ": " << d.reason;
    }
    return os.str();
}

bool valid_label(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_' || c == '-' || c == '.';
    });
}

std::string child(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

std::string item(const std::string& parent, std::size_t i) {
    return parent + "[" + std::to_string(i) + "]";
}

// Collects schema problems while walking a YAML tree.
class Reader {
public:
    explicit Reader(std::filesystem::path base_dir) : base_dir_(std::move(base_dir)) {}

    std::vector<Diagnostic> diags;

    void fail(const std::string& path, const std::string& reason) { diags.push_back({path, reason}); }

    bool expect_map(const YAML::Node& n, const std::string& path) {
        if (!n.IsMap()) {
            fail(path, "expected a mapping");
            return false;
        }
        return true;
    }

    void check_keys(const YAML::Node& n, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
        for (const auto& kv : n) {
            const auto key = kv.first.as<std::string>();
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
                fail(child(path, key), "unknown key");
            }
        }
    }

    std::optional<std::string> scalar(const YAML::Node& n, const std::string& path) {
        if (!n.IsScalar()) {
            fail(path, "expected a scalar");
            return std::nullopt;
        }
        return n.as<std::string>();
    }

    void quantity(const YAML::Node& parent, const std::string& path, const char* key, Dim dim,
                  double& out) {
        const YAML::Node n = parent[key];
        if (!n) {
            return;  // keep the default
        }
        if (auto v = parse_q(n, child(path, key), dim)) {
            out = *v;
        }
    }

    std::optional<double> parse_q(const YAML::Node& n, const std::string& path, Dim dim) {
        auto s = scalar(n, path);
        if (!s) {
            return std::nullopt;
        }
        try {
            return parse_quantity(*s, dim);
        } catch (const Error& e) {
            fail(path, strip_code(e.what()));
            return std::nullopt;
        }
    }

    void number(const YAML::Node& parent, const std::string& path, const char* key, double& out) {
        const YAML::Node n = parent[key];
        if (!n) {
            return;
        }
        auto s = scalar(n, child(path, key));
        if (!s) {
            return;
        }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
        if (ec != std::errc() || ptr != s->data() + s->size()) {
            fail(child(path, key), "'" + *s + "' is not a plain number");
            return;
        }
        out = v;
    }

    template <typename Int>
    void integer(const YAML::Node& parent, const std::string& path, const char* key, Int& out) {
        const YAML::Node n = parent[key];
        if (!n) {
            return;
        }
        auto s = scalar(n, child(path, key));
        if (!s) {
            return;
        }
        Int v{};
        auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
        if (ec != std::errc() || ptr != s->data() + s->size()) {
            fail(child(path, key), "'" + *s + "' is not an integer");
            return;
        }
        out = v;
    }

    void boolean(const YAML::Node& parent, const std::string& path, const char* key, bool& out) {
        const YAML::Node n = parent[key];
        if (!n) {
            return;
        }
        auto s = scalar(n, child(path, key));
        if (!s) {
            return;
        }
        if (*s == "true") {
            out = true;
        } else if (*s == "false") {
            out = false;
        } else {
            fail(child(path, key), "expected true or false");
        }
    }

    void text(const YAML::Node& parent, const std::string& path, const char* key, std::string& out) {
        const YAML::Node n = parent[key];
        if (!n) {
            return;
        }
        if (auto s = scalar(n, child(path, key))) {
            out = *s;
        }
    }

    std::optional<components::DbProfile> profile(const YAML::Node& n, const std::string& path) {
        if (n.IsScalar()) {
            if (auto v = parse_q(n, path, Dim::Decibel)) {
                return components::DbProfile(*v);
            }
            return std::nullopt;
        }
        if (!expect_map(n, path)) {
            return std::nullopt;
        }
        check_keys(n, path, {"profile", "table"});
        if (n["profile"] && n["table"]) {
            fail(path, "give either 'profile' or 'table', not both");
            return std::nullopt;
        }
        try {
            if (n["profile"]) {
                auto file = scalar(n["profile"], child(path, "profile"));
                if (!file) {
                    return std::nullopt;
                }
                std::filesystem::path p(*file);
                if (p.is_relative()) {
                    p = base_dir_ / p;
                }
                return components::DbProfile::from_csv(p);
            }
            const YAML::Node table = n["table"];
            if (!table || !table.IsSequence()) {
                fail(child(path, "table"), "expected a list of {frequency, value} points");
                return std::nullopt;
            }
            std::vector<double> f;
            std::vector<double> v;
            for (std::size_t i = 0; i < table.size(); ++i) {
                const std::string ip = item(child(path, "table"), i);
                const YAML::Node row = table[i];
                if (!expect_map(row, ip)) {
                    return std::nullopt;
                }
                check_keys(row, ip, {"frequency", "value"});
                auto fq = row["frequency"] ? parse_q(row["frequency"], child(ip, "frequency"), Dim::Frequency)
                                           : std::nullopt;
                auto vq = row["value"] ? parse_q(row["value"], child(ip, "value"), Dim::Decibel)
                                       : std::nullopt;
                if (!fq || !vq) {
                    fail(ip, "needs both frequency and value");
                    return std::nullopt;
                }
                f.push_back(*fq);
                v.push_back(*vq);
            }
            return components::DbProfile(std::move(f), std::move(v));
        } catch (const Error& e) {
            fail(path, strip_code(e.what()));
            return std::nullopt;
        }
    }

    static std::string strip_code(const std::string& what) {
        const auto colon = what.find(": ");
        return colon == std::string::npos ? what : what.substr(colon + 2);
    }

private:
    std::filesystem::path base_dir_;
};

void read_assembly_block(Reader& r, const YAML::Node& n, AssemblyConfig& cfg) {
    const std::string path = "assembly";
    if (!r.expect_map(n, path)) {
        return;
    }
    r.check_keys(n, path,
                 {"name", "z0", "demod_bandwidth", "sample_rate", "seed", "cross_coupling",
                  "demod_phase", "allow_out_of_band_tones"});
    r.text(n, path, "name", cfg.name);
    r.quantity(n, path, "z0", Dim::Resistance, cfg.z0);
    r.quantity(n, path, "demod_bandwidth", Dim::Frequency, cfg.demod_bandwidth_hz);
    r.quantity(n, path, "sample_rate", Dim::Frequency, cfg.sample_rate_hz);
    r.integer(n, path, "seed", cfg.seed);
    r.quantity(n, path, "cross_coupling", Dim::Decibel, cfg.cross_coupling_db);
    if (const YAML::Node p = n["demod_phase"]) {
        if (auto s = r.scalar(p, child(path, "demod_phase"))) {
            if (*s == "auto") {
                cfg.demod_phase_rad.reset();
            } else if (auto v = r.parse_q(p, child(path, "demod_phase"), Dim::Angle)) {
                cfg.demod_phase_rad = *v;
            }
        }
    }
    r.boolean(n, path, "allow_out_of_band_tones", cfg.allow_out_of_band_tones);
}

void read_drive(Reader& r, const YAML::Node& n, DriveConfig& drive) {
    const std::string path = "drive";
    if (!r.expect_map(n, path)) {
        return;
    }
    r.check_keys(n, path, {"amplitude", "calibrate"});
    if (n["amplitude"] && n["calibrate"]) {
        r.fail(path, "give either 'amplitude' or 'calibrate', not both");
        return;
    }
    if (n["amplitude"]) {
        double a = 0.0;
        r.quantity(n, path, "amplitude", Dim::Voltage, a);
        drive.amplitude_v = a;
        return;
    }
    drive.amplitude_v.reset();
    if (const YAML::Node c = n["calibrate"]) {
        const std::string cp = child(path, "calibrate");
        if (!r.expect_map(c, cp)) {
            return;
        }
        r.check_keys(c, cp, {"snr", "tau", "seb"});
        r.number(c, cp, "snr", drive.calibrate_snr);
        r.quantity(c, cp, "tau", Dim::Time, drive.calibrate_tau_s);
        r.integer(c, cp, "seb", drive.calibrate_seb);
    }
}

void read_attenuators(Reader& r, const YAML::Node& n, std::vector<AttenuatorConfig>& out) {
    const std::string path = "input_attenuators";
    if (!n.IsSequence()) {
        r.fail(path, "expected a list");
        return;
    }
    out.clear();
    for (std::size_t i = 0; i < n.size(); ++i) {
        const std::string ip = item(path, i);
        const YAML::Node a = n[i];
        if (!r.expect_map(a, ip)) {
            continue;
        }
        r.check_keys(a, ip, {"label", "loss", "t_phys"});
        AttenuatorConfig cfg;
        cfg.label = "att" + std::to_string(i);
        r.text(a, ip, "label", cfg.label);
        if (!a["loss"] || !a["t_phys"]) {
            r.fail(ip, "needs 'loss' and 't_phys'");
        }
        r.quantity(a, ip, "loss", Dim::Decibel, cfg.loss_db);
        r.quantity(a, ip, "t_phys", Dim::Temperature, cfg.t_phys_k);
        out.push_back(cfg);
    }
}

void read_switch(Reader& r, const YAML::Node& n, components::SwitchSpec& sw) {
    const std::string path = "switch";
    if (!r.expect_map(n, path)) {
        return;
    }
    r.check_keys(n, path, {"channels", "insertion_loss", "isolation", "return_loss", "t_phys"});
    r.integer(n, path, "channels", sw.n_channels);
    if (n["insertion_loss"]) {
        if (auto p = r.profile(n["insertion_loss"], child(path, "insertion_loss"))) {
            sw.il_db = *p;
        }
    }
    if (n["isolation"]) {
        if (auto p = r.profile(n["isolation"], child(path, "isolation"))) {
            sw.isolation_db = *p;
        }
    }
    r.quantity(n, path, "return_loss", Dim::Decibel, sw.return_loss_db);
    r.quantity(n, path, "t_phys", Dim::Temperature, sw.t_phys_k);
}

void read_seb_paths(Reader& r, const YAML::Node& n, std::vector<SebPathConfig>& out) {
    const std::string path = "seb_paths";
    if (!n.IsSequence()) {
        r.fail(path, "expected a list");
        return;
    }
    out.clear();
    for (std::size_t i = 0; i < n.size(); ++i) {
        const std::string ip = item(path, i);
        const YAML::Node s = n[i];
        if (!r.expect_map(s, ip)) {
            continue;
        }
        r.check_keys(s, ip,
                     {"channel", "match", "alpha", "v0", "electron_temperature", "tunnel_rate",
                      "c_geom", "drive_coupling", "parasitic_capacitance", "parasitic_resistance",
                      "idle_gate"});
        SebPathConfig p;
        p.channel = static_cast<int>(i);
        r.integer(s, ip, "channel", p.channel);
        if (const YAML::Node m = s["match"]) {
            const std::string mp = child(ip, "match");
            if (r.expect_map(m, mp)) {
                r.check_keys(m, mp, {"target", "l", "c"});
                if (m["target"]) {
                    double t = 0.0;
                    r.quantity(m, mp, "target", Dim::Frequency, t);
                    p.match_target_hz = t;
                }
                if (m["l"] || m["c"]) {
                    if (!(m["l"] && m["c"])) {
                        r.fail(mp, "an explicit network needs both 'l' and 'c'");
                    }
                    components::MatchNetSpec spec;
                    r.quantity(m, mp, "l", Dim::Inductance, spec.l_henries);
                    r.quantity(m, mp, "c", Dim::Capacitance, spec.c_farads);
                    p.match = spec;
                }
                if (!m["target"] && !m["l"] && !m["c"]) {
                    r.fail(mp, "needs a 'target' frequency or explicit 'l' and 'c'");
                }
            }
        } else {
            r.fail(ip, "missing 'match'");
        }
        r.number(s, ip, "alpha", p.alpha);
        r.quantity(s, ip, "v0", Dim::Voltage, p.v0);
        r.quantity(s, ip, "electron_temperature", Dim::Temperature, p.t_e_k);
        r.quantity(s, ip, "tunnel_rate", Dim::Frequency, p.tunnel_rate_hz);
        r.quantity(s, ip, "c_geom", Dim::Capacitance, p.c_geom_f);
        r.quantity(s, ip, "drive_coupling", Dim::Capacitance, p.drive_coupling_f);
        r.quantity(s, ip, "parasitic_capacitance", Dim::Capacitance, p.parasitic_capacitance_f);
        r.quantity(s, ip, "parasitic_resistance", Dim::Resistance, p.parasitic_resistance_ohm);
        r.quantity(s, ip, "idle_gate", Dim::Voltage, p.idle_gate_v);
        out.push_back(p);
    }
}

void read_lna(Reader& r, const YAML::Node& n, components::LnaSpec& lna) {
    const std::string path = "lna";
    if (!r.expect_map(n, path)) {
        return;
    }
    r.check_keys(n, path,
                 {"peak_gain", "center", "f_low_3db", "f_high_3db", "nt_min", "f_nt_min", "nt_avg",
                  "return_loss", "reverse_isolation"});
    r.quantity(n, path, "peak_gain", Dim::Decibel, lna.peak_gain_db);
    r.quantity(n, path, "center", Dim::Frequency, lna.f_center_hz);
    r.quantity(n, path, "f_low_3db", Dim::Frequency, lna.f_low_3db_hz);
    r.quantity(n, path, "f_high_3db", Dim::Frequency, lna.f_high_3db_hz);
    r.quantity(n, path, "nt_min", Dim::Temperature, lna.nt_min_k);
    r.quantity(n, path, "f_nt_min", Dim::Frequency, lna.f_nt_min_hz);
    r.quantity(n, path, "nt_avg", Dim::Temperature, lna.nt_avg_k);
    r.quantity(n, path, "return_loss", Dim::Decibel, lna.in_band_return_loss_db);
    r.quantity(n, path, "reverse_isolation", Dim::Decibel, lna.reverse_isolation_db);
}

void read_output_stages(Reader& r, const YAML::Node& n, std::vector<OutputStageConfig>& out) {
    const std::string path = "output_stages";
    if (!n.IsSequence()) {
        r.fail(path, "expected a list");
        return;
    }
    out.clear();
    for (std::size_t i = 0; i < n.size(); ++i) {
        const std::string ip = item(path, i);
        const YAML::Node s = n[i];
        if (!r.expect_map(s, ip)) {
            continue;
        }
        r.check_keys(s, ip, {"label", "gain", "noise_temperature"});
        OutputStageConfig o;
        o.label = "stage" + std::to_string(i);
        r.text(s, ip, "label", o.label);
        if (!s["gain"] || !s["noise_temperature"]) {
            r.fail(ip, "needs 'gain' and 'noise_temperature'");
        }
        r.quantity(s, ip, "gain", Dim::Decibel, o.gain_db);
        r.quantity(s, ip, "noise_temperature", Dim::Temperature, o.noise_temperature_k);
        out.push_back(o);
    }
}

YAML::Node load_yaml(const std::string& text, const std::string& what) {
    try {
        return YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw Error(ErrorCode::ParseError, what + ": " + e.what());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Normal-form emission helpers.
std::string q(double v, Dim d) { return format_quantity(v, d); }

void emit_profile(std::ostream& os, const char* key, const components::DbProfile& p,
                  const std::string& indent) {
    if (p.is_flat()) {
        os << indent << key << ": " << q(p.flat_value(), Dim::Decibel) << '\n';
        return;
    }
    os << indent << key << ":\n" << indent << "  table:\n";
    for (std::size_t i = 0; i < p.frequencies().size(); ++i) {
        os << indent << "    - frequency: " << q(p.frequencies()[i], Dim::Frequency) << '\n'
           << indent << "      value: " << q(p.values()[i], Dim::Decibel) << '\n';
    }
}

void check_positive(std::vector<Diagnostic>& d, const std::string& path, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        d.push_back({path, "must be finite and > 0"});
    }
}

void check_non_negative(std::vector<Diagnostic>& d, const std::string& path, double v) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
        d.push_back({path, "must be finite and >= 0"});
    }
}

std::string strip(const Error& e) { return Reader::strip_code(e.what()); }

}  // namespace

ConfigValidationError::ConfigValidationError(std::vector<Diagnostic> diagnostics)
    : Error(ErrorCode::ConfigError, join_diagnostics(diagnostics)), diags_(std::move(diagnostics)) {}

seb::SebPath AssemblyConfig::seb_path(std::size_t i) const {
    const SebPathConfig& p = seb_paths.at(i);
    if (!p.match) {
        throw Error(ErrorCode::IncompleteConfig,
                    "seb_paths[" + std::to_string(i) + "] has no resolved matching network");
    }
    seb::SebPath path;
    path.seb.alpha = p.alpha;
    path.seb.v0 = p.v0;
    path.seb.t_e_k = p.t_e_k;
    path.seb.gamma = kTwoPi * p.tunnel_rate_hz;
    path.seb.c_geom = p.c_geom_f;
    path.seb.index = static_cast<int>(i);
    path.match = *p.match;
    path.match.z0 = z0;
    path.drive_coupling_f = p.drive_coupling_f;
    path.parasitics.capacitance_f = p.parasitic_capacitance_f;
    path.parasitics.resistance_ohm = p.parasitic_resistance_ohm;
    return path;
}

std::optional<double> AssemblyConfig::path_frequency_hz(std::size_t i) const {
    return seb_paths.at(i).match_target_hz;
}

std::optional<std::size_t> AssemblyConfig::path_on_channel(int channel) const {
    for (std::size_t i = 0; i < seb_paths.size(); ++i) {
        if (seb_paths[i].channel == channel) {
            return i;
        }
    }
    return std::nullopt;
}

ValidatedConfig validate(const AssemblyConfig& input) {
    ValidatedConfig out{input, {}};
    AssemblyConfig& cfg = out.config;
    std::vector<Diagnostic> d;

    if (!valid_label(cfg.name)) {
        d.push_back({"assembly.name", "use letters, digits, '_', '-' or '.'"});
    }
    check_positive(d, "assembly.z0", cfg.z0);
    check_positive(d, "assembly.demod_bandwidth", cfg.demod_bandwidth_hz);
    check_positive(d, "assembly.sample_rate", cfg.sample_rate_hz);
    if (!(cfg.cross_coupling_db <= 0.0)) {
        d.push_back({"assembly.cross_coupling", "must be <= 0 dB"});
    }
    if (cfg.demod_phase_rad && !std::isfinite(*cfg.demod_phase_rad)) {
        d.push_back({"assembly.demod_phase", "must be finite"});
    }
    for (std::size_t i = 0; i < cfg.tones_hz.size(); ++i) {
        check_positive(d, item("tones", i), cfg.tones_hz[i]);
    }

    std::set<std::string> labels;
    for (std::size_t i = 0; i < cfg.attenuators.size(); ++i) {
        const auto& a = cfg.attenuators[i];
        const std::string ip = item("input_attenuators", i);
        if (!valid_label(a.label)) {
            d.push_back({ip + ".label", "use letters, digits, '_', '-' or '.'"});
        } else if (!labels.insert(a.label).second) {
            d.push_back({ip + ".label", "duplicate label '" + a.label + "'"});
        }
        check_non_negative(d, ip + ".loss", a.loss_db);
        check_non_negative(d, ip + ".t_phys", a.t_phys_k);
    }

    try {
        cfg.switch_spec.validate();
    } catch (const Error& e) {
        d.push_back({"switch", strip(e)});
    }

    if (cfg.seb_paths.empty()) {
        d.push_back({"seb_paths", "at least one SEB path is required"});
    }
    std::set<int> channels;
    for (std::size_t i = 0; i < cfg.seb_paths.size(); ++i) {
        SebPathConfig& p = cfg.seb_paths[i];
        const std::string ip = item("seb_paths", i);
        if (p.channel < 0 || p.channel >= cfg.switch_spec.n_channels) {
            d.push_back({ip + ".channel", "channel " + std::to_string(p.channel) +
                                              " does not exist on the switch"});
        } else if (!channels.insert(p.channel).second) {
            d.push_back({ip + ".channel", "channel " + std::to_string(p.channel) +
                                              " is already bound to another SEB path"});
        }
        if (!(p.alpha > 0.0 && p.alpha <= 1.0)) {
            d.push_back({ip + ".alpha", "must lie in (0, 1]"});
        }
        check_positive(d, ip + ".electron_temperature", p.t_e_k);
        check_positive(d, ip + ".tunnel_rate", p.tunnel_rate_hz);
        check_non_negative(d, ip + ".c_geom", p.c_geom_f);
        check_positive(d, ip + ".drive_coupling", p.drive_coupling_f);
        check_non_negative(d, ip + ".parasitic_capacitance", p.parasitic_capacitance_f);
        if (!(p.parasitic_resistance_ohm > 0.0)) {
            d.push_back({ip + ".parasitic_resistance", "must be > 0"});
        }
        if (p.match_target_hz) {
            check_positive(d, ip + ".match.target", *p.match_target_hz);
        }
        if (p.match) {
            try {
                components::MatchNetSpec m = *p.match;
                m.z0 = cfg.z0;
                m.validate();
            } catch (const Error& e) {
                d.push_back({ip + ".match", strip(e)});
            }
        } else if (p.match_target_hz && *p.match_target_hz > 0.0 && d.empty()) {
            // Synthesize against the device at its idle gate voltage.
            try {
                SebPathConfig probe = p;
                probe.match = components::MatchNetSpec{1e-12, 1e-9, cfg.z0};
                AssemblyConfig tmp;
                tmp.z0 = cfg.z0;
                tmp.seb_paths = {probe};
                const seb::SebPath sp = tmp.seb_path(0);
                const auto z_dev = seb::device_impedance(p.idle_gate_v, *p.match_target_hz, sp);
                components::MatchNetSpec m =
                    components::synthesize_match(*p.match_target_hz, cfg.z0, z_dev);
                m.z0 = rf::kDefaultZ0;  // stored z0 follows the assembly, see seb_path()
                p.match = m;
            } catch (const Error& e) {
                d.push_back({ip + ".match", strip(e)});
            }
        }
        if (!p.match_target_hz) {
            out.warnings.push_back(ip + " declares no target frequency; tones cannot be bound to it");
        }
    }

    try {
        cfg.lna.validate();
    } catch (const Error& e) {
        d.push_back({"lna", strip(e)});
    }

    for (std::size_t i = 0; i < cfg.output_stages.size(); ++i) {
        const auto& o = cfg.output_stages[i];
        const std::string ip = item("output_stages", i);
        if (!valid_label(o.label)) {
            d.push_back({ip + ".label", "use letters, digits, '_', '-' or '.'"});
        }
        if (!std::isfinite(o.gain_db)) {
            d.push_back({ip + ".gain", "must be finite"});
        }
        check_non_negative(d, ip + ".noise_temperature", o.noise_temperature_k);
    }

    if (cfg.drive.amplitude_v) {
        check_positive(d, "drive.amplitude", *cfg.drive.amplitude_v);
    } else {
        check_positive(d, "drive.calibrate.snr", cfg.drive.calibrate_snr);
        check_positive(d, "drive.calibrate.tau", cfg.drive.calibrate_tau_s);
        const int s = cfg.drive.calibrate_seb;
        if (s < 0 || static_cast<std::size_t>(s) >= cfg.seb_paths.size()) {
            d.push_back({"drive.calibrate.seb", "no SEB path with index " + std::to_string(s)});
        } else if (!cfg.seb_paths[static_cast<std::size_t>(s)].match_target_hz) {
            d.push_back({"drive.calibrate.seb", "the calibration SEB needs a target frequency"});
        }
    }

    if (!d.empty()) {
        throw ConfigValidationError(std::move(d));
    }

    if (cfg.tones_hz.empty()) {
        out.warnings.push_back("no tones declared");
    }
    for (double t : cfg.tones_hz) {
        const bool bound = std::any_of(cfg.seb_paths.begin(), cfg.seb_paths.end(), [&](const auto& p) {
            return p.match_target_hz && std::abs(*p.match_target_hz - t) <= kToneMatchToleranceHz;
        });
        if (!bound) {
            out.warnings.push_back("tone " + format_quantity(t, Dim::Frequency) +
                                   " matches no SEB path frequency");
        }
        if (!cfg.allow_out_of_band_tones &&
            (t < cfg.lna.f_low_3db_hz || t > cfg.lna.f_high_3db_hz)) {
            out.warnings.push_back("tone " + format_quantity(t, Dim::Frequency) +
                                   " lies outside the LNA 3 dB band");
        }
    }
    return out;
}

AssemblyConfig parse_assembly(const std::string& text, const std::filesystem::path& base_dir) {
    const YAML::Node root = load_yaml(text, "assembly config");
    Reader r(base_dir);
    AssemblyConfig cfg;
    // Defaults for lists are empty; the text supplies the topology.
    cfg.seb_paths.clear();
    if (!root.IsMap()) {
        r.fail("", "expected a mapping at the top level");
        throw ConfigValidationError(std::move(r.diags));
    }
    r.check_keys(root, "",
                 {"assembly", "tones", "drive", "input_attenuators", "switch", "seb_paths", "lna",
                  "output_stages"});
    if (root["assembly"]) {
        read_assembly_block(r, root["assembly"], cfg);
    }
    if (const YAML::Node t = root["tones"]) {
        if (!t.IsSequence()) {
            r.fail("tones", "expected a list");
        } else {
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (auto v = r.parse_q(t[i], item("tones", i), Dim::Frequency)) {
                    cfg.tones_hz.push_back(*v);
                }
            }
        }
    }
    if (root["drive"]) {
        read_drive(r, root["drive"], cfg.drive);
    }
    if (root["input_attenuators"]) {
        read_attenuators(r, root["input_attenuators"], cfg.attenuators);
    }
    if (root["switch"]) {
        read_switch(r, root["switch"], cfg.switch_spec);
    } else {
        r.fail("switch", "exactly one switch is required");
    }
    if (root["seb_paths"]) {
        read_seb_paths(r, root["seb_paths"], cfg.seb_paths);
    } else {
        r.fail("seb_paths", "at least one SEB path is required");
    }
    if (root["lna"]) {
        read_lna(r, root["lna"], cfg.lna);
    } else {
        r.fail("lna", "exactly one LNA is required");
    }
    if (root["output_stages"]) {
        read_output_stages(r, root["output_stages"], cfg.output_stages);
    }
    if (!r.diags.empty()) {
        throw ConfigValidationError(std::move(r.diags));
    }
    return cfg;
}

AssemblyConfig load_assembly(const std::filesystem::path& path) {
    return parse_assembly(read_file(path), path.parent_path());
}

std::string emit_normalized(const AssemblyConfig& cfg) {
    std::ostringstream os;
    os << "assembly:\n"
       << "  name: " << cfg.name << '\n'
       << "  z0: " << q(cfg.z0, Dim::Resistance) << '\n'
       << "  demod_bandwidth: " << q(cfg.demod_bandwidth_hz, Dim::Frequency) << '\n'
       << "  sample_rate: " << q(cfg.sample_rate_hz, Dim::Frequency) << '\n'
       << "  seed: " << cfg.seed << '\n'
       << "  cross_coupling: " << q(cfg.cross_coupling_db, Dim::Decibel) << '\n'
       << "  demod_phase: "
       << (cfg.demod_phase_rad ? q(*cfg.demod_phase_rad, Dim::Angle) : std::string("auto")) << '\n'
       << "  allow_out_of_band_tones: " << (cfg.allow_out_of_band_tones ? "true" : "false") << '\n';
    os << "tones:" << (cfg.tones_hz.empty() ? " []\n" : "\n");
    for (double t : cfg.tones_hz) {
        os << "  - " << q(t, Dim::Frequency) << '\n';
    }
    os << "drive:\n";
    if (cfg.drive.amplitude_v) {
        os << "  amplitude: " << q(*cfg.drive.amplitude_v, Dim::Voltage) << '\n';
    } else {
        os << "  calibrate:\n"
           << "    snr: " << io::format_double(cfg.drive.calibrate_snr) << '\n'
           << "    tau: " << q(cfg.drive.calibrate_tau_s, Dim::Time) << '\n'
           << "    seb: " << cfg.drive.calibrate_seb << '\n';
    }
    os << "input_attenuators:" << (cfg.attenuators.empty() ? " []\n" : "\n");
    for (const auto& a : cfg.attenuators) {
        os << "  - label: " << a.label << '\n'
           << "    loss: " << q(a.loss_db, Dim::Decibel) << '\n'
           << "    t_phys: " << q(a.t_phys_k, Dim::Temperature) << '\n';
    }
    os << "switch:\n"
       << "  channels: " << cfg.switch_spec.n_channels << '\n';
    emit_profile(os, "insertion_loss", cfg.switch_spec.il_db, "  ");
    emit_profile(os, "isolation", cfg.switch_spec.isolation_db, "  ");
    os << "  return_loss: " << q(cfg.switch_spec.return_loss_db, Dim::Decibel) << '\n'
       << "  t_phys: " << q(cfg.switch_spec.t_phys_k, Dim::Temperature) << '\n';
    os << "seb_paths:" << (cfg.seb_paths.empty() ? " []\n" : "\n");
    for (const auto& p : cfg.seb_paths) {
        os << "  - channel: " << p.channel << '\n' << "    match:\n";
        if (p.match_target_hz) {
            os << "      target: " << q(*p.match_target_hz, Dim::Frequency) << '\n';
        }
        if (p.match) {
            os << "      l: " << q(p.match->l_henries, Dim::Inductance) << '\n'
               << "      c: " << q(p.match->c_farads, Dim::Capacitance) << '\n';
        }
        os << "    alpha: " << io::format_double(p.alpha) << '\n'
           << "    v0: " << q(p.v0, Dim::Voltage) << '\n'
           << "    electron_temperature: " << q(p.t_e_k, Dim::Temperature) << '\n'
           << "    tunnel_rate: " << q(p.tunnel_rate_hz, Dim::Frequency) << '\n'
           << "    c_geom: " << q(p.c_geom_f, Dim::Capacitance) << '\n'
           << "    drive_coupling: " << q(p.drive_coupling_f, Dim::Capacitance) << '\n'
           << "    parasitic_capacitance: " << q(p.parasitic_capacitance_f, Dim::Capacitance) << '\n'
           << "    parasitic_resistance: " << q(p.parasitic_resistance_ohm, Dim::Resistance) << '\n'
           << "    idle_gate: " << q(p.idle_gate_v, Dim::Voltage) << '\n';
    }
    const auto& l = cfg.lna;
    os << "lna:\n"
       << "  peak_gain: " << q(l.peak_gain_db, Dim::Decibel) << '\n'
       << "  center: " << q(l.f_center_hz, Dim::Frequency) << '\n'
       << "  f_low_3db: " << q(l.f_low_3db_hz, Dim::Frequency) << '\n'
       << "  f_high_3db: " << q(l.f_high_3db_hz, Dim::Frequency) << '\n'
       << "  nt_min: " << q(l.nt_min_k, Dim::Temperature) << '\n'
       << "  f_nt_min: " << q(l.f_nt_min_hz, Dim::Frequency) << '\n'
       << "  nt_avg: " << q(l.nt_avg_k, Dim::Temperature) << '\n'
       << "  return_loss: " << q(l.in_band_return_loss_db, Dim::Decibel) << '\n'
       << "  reverse_isolation: " << q(l.reverse_isolation_db, Dim::Decibel) << '\n';
    os << "output_stages:" << (cfg.output_stages.empty() ? " []\n" : "\n");
    for (const auto& o : cfg.output_stages) {
        os << "  - label: " << o.label << '\n'
           << "    gain: " << q(o.gain_db, Dim::Decibel) << '\n'
           << "    noise_temperature: " << q(o.noise_temperature_k, Dim::Temperature) << '\n';
    }
    return os.str();
}

const std::string& default_assembly_text() {
    static const std::string text = R"(# SPDX-License-Identifier: Apache-2.0
#
# Default multi-module readout assembly.
#
# Every physical quantity needs a unit. Accepted units:
#   frequency Hz kHz MHz GHz, temperature K mK uK, ratio dB,
#   resistance ohm kohm Mohm, capacitance F uF nF pF fF aF,
#   inductance H mH uH nH pH, voltage V mV uV nV,
#   time s ms us ns ps, angle rad deg.
# Unknown keys are rejected.

assembly:
  name: multi-module-default
  z0: 50 ohm
  demod_bandwidth: 3 MHz        # single-pole demodulation low-pass
  sample_rate: 1 MHz            # output rate of the baseband traces
  seed: 20240611                # master seed; per-tone streams derive from it
  cross_coupling: -16 dB        # drive leaking from one gate line onto the other SEBs
  demod_phase: auto             # or an angle, e.g. "30 deg"
  allow_out_of_band_tones: true # the readout tones sit below the LNA 3 dB band

tones:
  - 559 MHz
  - 681 MHz

# Source amplitude. Either "amplitude: <V>" or a calibration target: the
# amplitude is chosen so that SEB <seb> reaches <snr> at integration time <tau>.
drive:
  calibrate:
    snr: 140
    tau: 10 us
    seb: 0

# Drive-line attenuation between the source and the switch common port.
input_attenuators:
  - label: att-4k
    loss: 20 dB
    t_phys: 4 K
  - label: att-cp
    loss: 10 dB
    t_phys: 100 mK
  - label: att-mc
    loss: 10 dB
    t_phys: 20 mK

# Single-pole eight-throw switch on the drive side. Insertion loss and
# isolation accept a flat value, an inline table of {frequency, value}
# points, or {profile: file.csv} with columns frequency_hz,value_db.
switch:
  channels: 8
  insertion_loss: 1.1 dB
  isolation: 45 dB
  return_loss: 10 dB
  t_phys: 20 mK

# One entry per SEB. "match" takes a synthesis target frequency, or explicit
# l and c (an explicit network wins when both are given).
seb_paths:
  - channel: 0
    match:
      target: 559 MHz
    alpha: 0.5
    v0: 0 V
    electron_temperature: 360 mK
    tunnel_rate: 5 GHz            # gamma / 2 pi
    c_geom: 50 aF
    drive_coupling: 1 fF          # gate line to dot
    parasitic_capacitance: 4 pF   # pad and wiring at the resonator node
    parasitic_resistance: 25 kohm
    idle_gate: 5 mV               # parked away from the charge transition
  - channel: 1
    match:
      target: 681 MHz
    alpha: 0.5
    v0: 0 V
    electron_temperature: 360 mK
    tunnel_rate: 5 GHz
    c_geom: 50 aF
    drive_coupling: 1 fF
    parasitic_capacitance: 4 pF
    parasitic_resistance: 25 kohm
    idle_gate: 5 mV

lna:
  peak_gain: 35.3 dB
  center: 780 MHz
  f_low_3db: 709 MHz
  f_high_3db: 827 MHz
  nt_min: 4.2 K
  f_nt_min: 650 MHz
  nt_avg: 6.2 K
  return_loss: 12 dB
  reverse_isolation: 60 dB

# Room-temperature gain after the LNA.
output_stages:
  - label: rt-amp
    gain: 40 dB
    noise_temperature: 100 K
)";
    return text;
}

AssemblyConfig default_assembly() { return parse_assembly(default_assembly_text()); }

// ---------------------------------------------------------------------------
// Schedules

namespace {

std::optional<tdma::GateWaveform> read_waveform(Reader& r, const YAML::Node& n,
                                                const std::string& path) {
    if (!r.expect_map(n, path)) {
        return std::nullopt;
    }
    r.check_keys(n, path, {"static", "ramp"});
    if (n["static"] && n["ramp"]) {
        r.fail(path, "give either 'static' or 'ramp'");
        return std::nullopt;
    }
    if (n["static"]) {
        if (auto v = r.parse_q(n["static"], child(path, "static"), Dim::Voltage)) {
            return tdma::GateWaveform::constant(*v);
        }
        return std::nullopt;
    }
    const YAML::Node rp = n["ramp"];
    const std::string p = child(path, "ramp");
    if (!rp || !r.expect_map(rp, p)) {
        r.fail(path, "needs 'static' or 'ramp'");
        return std::nullopt;
    }
    r.check_keys(rp, p, {"from", "to", "start", "end", "repeat"});
    if (!rp["from"] || !rp["to"] || !rp["start"] || !rp["end"]) {
        r.fail(p, "needs from, to, start and end");
        return std::nullopt;
    }
    double v0 = 0, v1 = 0, t0 = 0, t1 = 0;
    bool repeat = false;
    r.quantity(rp, p, "from", Dim::Voltage, v0);
    r.quantity(rp, p, "to", Dim::Voltage, v1);
    r.quantity(rp, p, "start", Dim::Time, t0);
    r.quantity(rp, p, "end", Dim::Time, t1);
    r.boolean(rp, p, "repeat", repeat);
    try {
        return tdma::GateWaveform::ramp(v0, v1, t0, t1, repeat);
    } catch (const Error& e) {
        r.fail(p, strip(e));
        return std::nullopt;
    }
}

void emit_waveform(std::ostream& os, const tdma::GateWaveform& w, const std::string& indent) {
    if (const auto* s = std::get_if<tdma::GateWaveform::Static>(&w.kind())) {
        os << indent << "static: " << q(s->volts, Dim::Voltage) << '\n';
        return;
    }
    const auto& rp = std::get<tdma::GateWaveform::Ramp>(w.kind());
    os << indent << "ramp:\n"
       << indent << "  from: " << q(rp.v_start, Dim::Voltage) << '\n'
       << indent << "  to: " << q(rp.v_end, Dim::Voltage) << '\n'
       << indent << "  start: " << q(rp.t_start, Dim::Time) << '\n'
       << indent << "  end: " << q(rp.t_end, Dim::Time) << '\n'
       << indent << "  repeat: " << (rp.repeat ? "true" : "false") << '\n';
}

}  // namespace

tdma::TdmaSchedule parse_schedule(const std::string& text) {
    const YAML::Node root = load_yaml(text, "schedule");
    Reader r({});
    if (!root.IsMap() || !root["schedule"] || !root["schedule"].IsSequence()) {
        r.fail("schedule", "expected a top-level 'schedule' list");
        throw ConfigValidationError(std::move(r.diags));
    }
    r.check_keys(root, "", {"schedule"});
    const YAML::Node list = root["schedule"];
    std::vector<tdma::ScheduleEntry> entries;
    for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string ip = item("schedule", i);
        const YAML::Node e = list[i];
        if (!r.expect_map(e, ip)) {
            continue;
        }
        r.check_keys(e, ip, {"start", "end", "mux", "gates"});
        tdma::ScheduleEntry entry;
        if (!e["start"] || !e["end"] || !e["mux"]) {
            r.fail(ip, "needs start, end and mux");
            continue;
        }
        r.quantity(e, ip, "start", Dim::Time, entry.t_start);
        r.quantity(e, ip, "end", Dim::Time, entry.t_end);
        if (auto s = r.scalar(e["mux"], child(ip, "mux"))) {
            if (*s != "none") {
                int ch = -1;
                auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), ch);
                try {
                    if (ec != std::errc() || ptr != s->data() + s->size()) {
                        throw Error(ErrorCode::ParseError, "expected 'none' or a channel number");
                    }
                    entry.mux = tdma::MuxState::select(ch);
                } catch (const Error& err) {
                    r.fail(child(ip, "mux"), strip(err));
                }
            }
        }
        if (const YAML::Node g = e["gates"]) {
            const std::string gp = child(ip, "gates");
            if (r.expect_map(g, gp)) {
                for (const auto& kv : g) {
                    const auto key = kv.first.as<std::string>();
                    int idx = -1;
                    auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), idx);
                    if (ec != std::errc() || ptr != key.data() + key.size() || idx < 0 || idx > 63) {
                        r.fail(child(gp, key), "gate keys are SEB indices 0..63");
                        continue;
                    }
                    if (auto w = read_waveform(r, kv.second, child(gp, key))) {
                        const auto ui = static_cast<std::size_t>(idx);
                        if (entry.gates.size() <= ui) {
                            entry.gates.resize(ui + 1);
                        }
                        entry.gates[ui] = *w;
                    }
                }
            }
        }
        entries.push_back(std::move(entry));
    }
    if (!r.diags.empty()) {
        throw ConfigValidationError(std::move(r.diags));
    }
    try {
        return tdma::TdmaSchedule(std::move(entries));
    } catch (const Error& e) {
        throw ConfigValidationError({{"schedule", strip(e)}});
    }
}

tdma::TdmaSchedule load_schedule(const std::filesystem::path& path) {
    return parse_schedule(read_file(path));
}

std::string emit_schedule(const tdma::TdmaSchedule& schedule) {
    std::ostringstream os;
    os << "schedule:\n";
    for (const auto& e : schedule.entries()) {
        os << "  - start: " << q(e.t_start, Dim::Time) << '\n'
           << "    end: " << q(e.t_end, Dim::Time) << '\n'
           << "    mux: " << (e.mux.is_none() ? std::string("none") : std::to_string(*e.mux.selected()))
           << '\n';
        bool any = std::any_of(e.gates.begin(), e.gates.end(), [](const auto& g) { return g.has_value(); });
        if (!any) {
            continue;
        }
        os << "    gates:\n";
        for (std::size_t i = 0; i < e.gates.size(); ++i) {
            if (e.gates[i]) {
                os << "      " << i << ":\n";
                emit_waveform(os, *e.gates[i], "        ");
            }
        }
    }
    return os.str();
}

tdma::TdmaSchedule three_window_schedule(const AssemblyConfig& cfg) {
    if (cfg.seb_paths.size() < 2) {
        throw Error(ErrorCode::IncompleteConfig, "the three-window schedule needs two SEB paths");
    }
    const auto& p0 = cfg.seb_paths[0];
    const auto& p1 = cfg.seb_paths[1];
    constexpr double kHalfSpan = 1e-3;   // ramp v0 -/+ 1 mV
    constexpr double kPeriod = 100e-3;   // one sweep per 100 ms
    using tdma::GateWaveform;
    std::vector<tdma::ScheduleEntry> e(3);
    e[0] = {0.0, 400e-3, tdma::MuxState::select(p0.channel),
            {GateWaveform::ramp(p0.v0 - kHalfSpan, p0.v0 + kHalfSpan, 0.0, kPeriod, true),
             GateWaveform::constant(p1.idle_gate_v)}};
    e[1] = {400e-3, 660e-3, tdma::MuxState::none(),
            {GateWaveform::constant(p0.idle_gate_v), GateWaveform::constant(p1.idle_gate_v)}};
    e[2] = {660e-3, 1060e-3, tdma::MuxState::select(p1.channel),
            {GateWaveform::constant(p0.idle_gate_v),
             GateWaveform::ramp(p1.v0 - kHalfSpan, p1.v0 + kHalfSpan, 660e-3, 660e-3 + kPeriod,
                                true)}};
    return tdma::TdmaSchedule(std::move(e));
}

const std::string& three_window_schedule_text() {
    static const std::string text =
        "# SPDX-License-Identifier: Apache-2.0\n" + emit_schedule(three_window_schedule(default_assembly()));
    return text;
}

}  // namespace cryomux::scenario
