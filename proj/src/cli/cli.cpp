// SPDX-License-Identifier: Apache-2.0
#include "cryomux/cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cryomux/analysis/benchmark.hpp"
#include "cryomux/analysis/fidelity.hpp"
#include "cryomux/analysis/lineshape.hpp"
#include "cryomux/analysis/resonances.hpp"
#include "cryomux/analysis/snr.hpp"
#include "cryomux/components/lna.hpp"
#include "cryomux/components/sp8t_switch.hpp"
#include "cryomux/error.hpp"
#include "cryomux/io/csv.hpp"
#include "cryomux/io/number_format.hpp"
#include "cryomux/noise/friis.hpp"
#include "cryomux/rf/touchstone.hpp"
#include "cryomux/scenario/config.hpp"
#include "cryomux/scenario/quantity.hpp"
#include "cryomux/seb/lineshape_fit.hpp"
#include "cryomux/tdma/assembly.hpp"
#include "cryomux/tdma/simulator.hpp"
#include "cryomux/units.hpp"

#ifndef CRYOMUX_VERSION
#define CRYOMUX_VERSION "unknown"
#endif

namespace cryomux::cli {

namespace {

namespace fs = std::filesystem;
using scenario::Dimension;
using io::format_double;

constexpr const char* kConfigDirEnv = "CRYOMUX_CONFIG_DIR";
constexpr const char* kDefaultConfigFile = "default_assembly.yaml";
constexpr const char* kDefaultScheduleFile = "three_window_schedule.yaml";

// Malformed flag values are usage errors, not domain errors.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double flag_quantity(const std::string& text, Dimension dim, const char* flag) {
    try {
        return scenario::parse_quantity(text, dim);
    } catch (const Error& e) {
        throw UsageError(std::string(flag) + ": " + e.what());
    }
}

std::string utc_timestamp() {
    std::time_t t = std::time(nullptr);
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
        t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    }
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Everything a run records in its manifest.
struct Run {
    std::string command;
    fs::path out_dir = ".";
    std::string config_path = "<built-in>";
    std::optional<std::uint64_t> seed;
    std::vector<std::string> outputs;
    std::vector<std::string> warnings;

    fs::path file(const std::string& name) {
        const fs::path p = out_dir / name;
        outputs.push_back(p.string());
        return p;
    }

    void write_manifest(bool ok, const std::string& error_message, std::ostream& err) const {
        nlohmann::ordered_json j;
        j["command"] = command;
        j["config_path"] = config_path;
        j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
        j["outputs"] = outputs;
        j["warnings"] = warnings;
        j["status"] = ok ? "ok" : "error";
        if (!ok) {
            j["error"] = error_message;
        }
        j["tool_version"] = CRYOMUX_VERSION;
        j["timestamp"] = utc_timestamp();
        const fs::path path = out_dir / ("manifest_" + command + ".json");
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        std::ofstream f(path);
        if (!f) {
            err << "warning: cannot write manifest " << path.string() << '\n';
            return;
        }
        f << j.dump(2) << '\n';
    }
};

struct CommonOptions {
    std::string config;
    std::string out = ".";
};

void add_common(CLI::App* sub, CommonOptions& o) {
    sub->add_option("--config", o.config,
                    "Assembly config (default: $CRYOMUX_CONFIG_DIR/default_assembly.yaml, "
                    "else the built-in default)");
    sub->add_option("--out", o.out, "Output directory")->capture_default_str();
}

std::optional<fs::path> config_dir_file(const char* name) {
    if (const char* dir = std::getenv(kConfigDirEnv)) {
        fs::path p = fs::path(dir) / name;
        if (fs::exists(p)) {
            return p;
        }
    }
    return std::nullopt;
}

scenario::AssemblyConfig load_config(const CommonOptions& o, Run& run) {
    if (!o.config.empty()) {
        run.config_path = o.config;
        return scenario::load_assembly(o.config);
    }
    if (const auto p = config_dir_file(kDefaultConfigFile)) {
        run.config_path = p->string();
        return scenario::load_assembly(*p);
    }
    run.config_path = "<built-in>";
    return scenario::default_assembly();
}

tdma::MuxState parse_mux(const std::string& s) {
    if (s == "none") {
        return tdma::MuxState::none();
    }
    try {
        std::size_t used = 0;
        const int ch = std::stoi(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument(s);
        }
        return tdma::MuxState::select(ch);
    } catch (const Error& e) {
        throw UsageError(std::string("--mux: ") + e.what());
    } catch (const std::exception&) {
        throw UsageError("--mux: expected 'none' or a channel number, got '" + s + "'");
    }
}

std::string mux_tag(const tdma::MuxState& m) {
    return m.is_none() ? std::string("none") : std::to_string(*m.selected());
}

// ---------------------------------------------------------------------------

struct SweepOptions {
    CommonOptions common;
    std::string what;
    std::string mux;
    std::string start;
    std::string stop;
    std::size_t points = 0;
};

rf::FrequencyGrid sweep_grid(const SweepOptions& o, double start, double stop, std::size_t points) {
    if (!o.start.empty()) {
        start = flag_quantity(o.start, Dimension::Frequency, "--start");
    }
    if (!o.stop.empty()) {
        stop = flag_quantity(o.stop, Dimension::Frequency, "--stop");
    }
    if (o.points != 0) {
        points = o.points;
    }
    if (!(stop > start) || points < 3) {
        throw UsageError("sweep needs --stop > --start and --points >= 3");
    }
    return rf::FrequencyGrid::linear(start, stop, points);
}

void write_complex_csv(const fs::path& path, const std::string& name, const rf::TwoPortNetwork& net,
                       bool use_s11) {
    io::CsvWriter csv(path, {"f_hz", name + "_db", name + "_re", name + "_im"});
    for (std::size_t i = 0; i < net.size(); ++i) {
        const rf::Complex v = use_s11 ? net.at(i).s11 : net.at(i).s21;
        csv.row({net.grid()[i], amplitude_to_db(std::max(std::abs(v), 1e-300)), v.real(), v.imag()});
    }
}

int cmd_sweep(const SweepOptions& o, Run& run, std::ostream& out) {
    const scenario::AssemblyConfig cfg = load_config(o.common, run);
    if (o.what == "lna") {
        const auto grid = sweep_grid(o, 400e6, 1.2e9, 801);
        const auto model = components::lna_two_port(cfg.lna, grid);
        {
            io::CsvWriter csv(run.file("sweep_lna.csv"),
                              {"f_hz", "s21_db", "s11_db", "s12_db", "nt_k"});
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const auto& s = model.network.at(i);
                csv.row({grid[i], amplitude_to_db(std::abs(s.s21)), amplitude_to_db(std::abs(s.s11)),
                         amplitude_to_db(std::abs(s.s12)), model.stage.noise_temperature()[i]});
            }
        }
        rf::write_touchstone(run.file("sweep_lna.s2p"), model.network, "cryomux LNA model");
        std::size_t ip = 0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (std::abs(model.network.at(i).s21) > std::abs(model.network.at(ip).s21)) {
                ip = i;
            }
        }
        out << "peak_gain_db: " << format_double(amplitude_to_db(std::abs(model.network.at(ip).s21)))
            << "\npeak_frequency_hz: " << format_double(grid[ip]) << '\n';
        return kExitOk;
    }
    if (o.what == "switch") {
        const tdma::MuxState mux = parse_mux(o.mux.empty() ? "0" : o.mux);
        const auto grid = sweep_grid(o, 400e6, 1.2e9, 801);
        const int path = mux.is_none() ? 0 : *mux.selected();
        const auto model = components::switch_two_port(cfg.switch_spec, mux.selected(), path, grid);
        const std::string tag = "sweep_switch_mux" + mux_tag(mux);
        {
            std::vector<std::string> header{"f_hz"};
            for (int k = 0; k < cfg.switch_spec.n_channels; ++k) {
                header.push_back("path" + std::to_string(k) + "_s21_db");
            }
            header.push_back("nt_k");
            io::CsvWriter csv(run.file(tag + ".csv"), header);
            std::vector<double> row;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                row.assign({grid[i]});
                for (int k = 0; k < cfg.switch_spec.n_channels; ++k) {
                    const auto s = components::switch_s_matrix(cfg.switch_spec, mux.selected(), k, grid[i]);
                    row.push_back(amplitude_to_db(std::abs(s.s21)));
                }
                row.push_back(model.stage.noise_temperature()[i]);
                csv.row(row);
            }
        }
        rf::write_touchstone(run.file(tag + ".s2p"), model.network,
                             "cryomux switch, common port to path " + std::to_string(path));
        return kExitOk;
    }
    const tdma::Assembly assembly(cfg);
    run.warnings = assembly.warnings();
    if (o.what == "assembly-s12") {
        const auto grid = sweep_grid(o, 500e6, 750e6, 5001);
        const auto net = assembly.readout_reflection(grid);
        write_complex_csv(run.file("sweep_assembly_s12.csv"), "s12", net, true);
        rf::write_touchstone(run.file("sweep_assembly_s12.s2p"), net,
                             "readout-node reflection in S11");
        analysis::ResonanceOptions ro;
        ro.parameter = analysis::SParameter::S11;
        const auto res = analysis::extract_resonances(net, ro);
        analysis::write_resonances_csv(run.file("resonances_assembly_s12.csv"), res);
        for (const auto& r : res) {
            out << "resonance_hz: " << format_double(r.f_hz) << " depth_db: "
                << format_double(r.depth_db) << " bw_hz: " << format_double(r.bandwidth_hz) << '\n';
        }
        return kExitOk;
    }
    if (o.what == "assembly-s13") {
        if (o.mux.empty()) {
            throw UsageError("--what assembly-s13 requires --mux");
        }
        const tdma::MuxState mux = parse_mux(o.mux);
        const auto grid = sweep_grid(o, 500e6, 750e6, 5001);
        const auto net = assembly.transmission_sweep(mux, grid);
        const std::string tag = "sweep_assembly_s13_mux" + mux_tag(mux);
        write_complex_csv(run.file(tag + ".csv"), "s13", net, false);
        rf::write_touchstone(run.file(tag + ".s2p"), net, "source-to-demodulator transmission in S21");
        double peak = 0.0;
        for (const auto& s : net.s()) {
            peak = std::max(peak, std::abs(s.s21));
        }
        out << "max_s13_db: " << format_double(amplitude_to_db(peak)) << '\n';
        return kExitOk;
    }
    throw UsageError("--what must be lna, switch, assembly-s12 or assembly-s13");
}

// ---------------------------------------------------------------------------

struct LineshapeOptions {
    CommonOptions common;
    std::string seb = "all";
    std::string vg_start;
    std::string vg_stop;
    std::size_t points = 501;
};

int cmd_lineshape(const LineshapeOptions& o, Run& run, std::ostream& out) {
    const tdma::Assembly assembly(load_config(o.common, run));
    run.warnings = assembly.warnings();
    std::vector<std::size_t> sebs;
    if (o.seb == "all") {
        for (std::size_t i = 0; i < assembly.path_count(); ++i) {
            sebs.push_back(i);
        }
    } else {
        long idx = -1;
        try {
            std::size_t used = 0;
            idx = std::stol(o.seb, &used);
            if (used != o.seb.size()) {
                idx = -1;
            }
        } catch (const std::exception&) {
            throw UsageError("--seb: expected 'all' or an index, got '" + o.seb + "'");
        }
        if (idx < 0 || static_cast<std::size_t>(idx) >= assembly.path_count()) {
            throw Error(ErrorCode::BadSebIndex, "no SEB " + o.seb + " in this assembly (" +
                                                    std::to_string(assembly.path_count()) + " paths)");
        }
        sebs.push_back(static_cast<std::size_t>(idx));
    }
    for (std::size_t i : sebs) {
        const double v0 = assembly.config().seb_paths[i].v0;
        const double a = o.vg_start.empty() ? v0 - 1e-3 : flag_quantity(o.vg_start, Dimension::Voltage, "--vg-start");
        const double b = o.vg_stop.empty() ? v0 + 1e-3 : flag_quantity(o.vg_stop, Dimension::Voltage, "--vg-stop");
        const auto pts = analysis::lineshape_sweep(assembly, i, a, b, o.points);
        analysis::write_lineshape_csv(run.file("lineshape_seb" + std::to_string(i) + ".csv"), pts);
        out << "seb " << i << ": f_hz " << format_double(*assembly.config().path_frequency_hz(i))
            << ", " << pts.size() << " points\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct TdmaOptions {
    CommonOptions common;
    std::string schedule;
    std::string noise = "on";
    std::optional<std::uint64_t> seed;
};

int cmd_tdma(const TdmaOptions& o, Run& run, std::ostream& out) {
    const tdma::Assembly assembly(load_config(o.common, run));
    run.warnings = assembly.warnings();
    tdma::TdmaSchedule schedule = [&] {
        if (!o.schedule.empty()) {
            return scenario::load_schedule(o.schedule);
        }
        if (const auto p = config_dir_file(kDefaultScheduleFile)) {
            return scenario::load_schedule(*p);
        }
        return scenario::three_window_schedule(assembly.config());
    }();
    tdma::SimulationOptions opts;
    opts.noise = o.noise == "on";
    opts.seed = o.seed.value_or(assembly.config().seed);
    run.seed = opts.seed;
    const auto& tones = assembly.config().tones_hz;
    const auto result = tdma::simulate(schedule, tones, assembly, opts);
    run.warnings.insert(run.warnings.end(), result.warnings.begin(), result.warnings.end());
    for (std::size_t k = 0; k < result.traces.size(); ++k) {
        tdma::write_trace_csv(run.file("tdma_tone" + std::to_string(k) + ".csv"), result.traces[k]);
        out << "tone " << k << ": " << format_double(tones[k]) << " Hz, "
            << result.traces[k].samples.size() << " samples\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct SnrOptions {
    CommonOptions common;
    std::string tau = "10 us";
    std::string window = "50 ms";
    std::optional<std::uint64_t> seed;
};

int cmd_snr(const SnrOptions& o, Run& run, std::ostream& out) {
    const double tau = flag_quantity(o.tau, Dimension::Time, "--tau");
    const double window = flag_quantity(o.window, Dimension::Time, "--window");
    const tdma::Assembly assembly(load_config(o.common, run));
    run.warnings = assembly.warnings();
    const std::uint64_t seed = o.seed.value_or(assembly.config().seed);
    run.seed = seed;
    analysis::TwoLevelSetup setup;
    setup.seb = static_cast<std::size_t>(assembly.config().drive.calibrate_seb);
    setup.window_s = window;
    const auto bench = analysis::run_snr_benchmark(assembly, tau, seed, setup);
    std::ostringstream text;
    text << "tone_hz: " << format_double(bench.tone_hz) << '\n'
         << "seb: " << setup.seb << '\n'
         << "seed: " << seed << '\n'
         << analysis::format_snr_report(bench.report)
         << "fidelity: " << format_double(bench.fidelity.fidelity) << '\n'
         << "fidelity_model: " << bench.fidelity.model << '\n';
    {
        std::ofstream f(run.file("snr_report.txt"));
        f << text.str();
    }
    {
        io::CsvWriter csv(run.file("snr_report.csv"),
                          {"tau_s", "snr_power", "signal_sq_v2", "noise_sq_v2", "t_min_s", "fidelity"});
        csv.row({bench.report.tau_s, bench.report.snr_power, bench.report.signal_sq,
                 bench.report.noise_sq, bench.report.t_min_s, bench.fidelity.fidelity});
    }
    out << text.str();
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct FitOptions {
    std::string data;
    std::string model = "sech2";
    double alpha = 0.5;
    std::string vg_column = "vg_v";
    std::string signal_column = "signal_v";
    std::string out = ".";
};

int cmd_fit(const FitOptions& o, Run& run, std::ostream& out) {
    run.config_path = "";
    const io::CsvTable table = io::read_csv(o.data);
    const auto vg = table.column_values(table.column(o.vg_column));
    const auto sig = table.column_values(table.column(o.signal_column));
    std::vector<seb::LineshapeSample> samples(vg.size());
    for (std::size_t i = 0; i < vg.size(); ++i) {
        samples[i] = {vg[i], sig[i]};
    }
    const auto fit = seb::fit_electron_temperature(samples, o.alpha);
    const std::string report = seb::format_fit_report(fit, o.alpha, samples.size());
    {
        std::ofstream f(run.file("fit_report.txt"));
        f << report;
    }
    out << report;
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct ValidateOptions {
    CommonOptions common;
    bool print_normalized = false;
};

int cmd_validate(const ValidateOptions& o, Run& run, std::ostream& out) {
    const scenario::AssemblyConfig cfg = load_config(o.common, run);
    const scenario::ValidatedConfig v = scenario::validate(cfg);
    run.warnings = v.warnings;
    for (const auto& w : v.warnings) {
        out << "warning: " << w << '\n';
    }
    if (o.print_normalized) {
        out << scenario::emit_normalized(v.config);
    } else {
        out << "valid: " << v.config.seb_paths.size() << " SEB path(s)\n";
    }
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"cryomux: multiplexed cryogenic RF readout simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", CRYOMUX_VERSION);

    SweepOptions sweep;
    auto* s = app.add_subcommand("sweep", "Frequency sweep of a component or the assembly");
    add_common(s, sweep.common);
    s->add_option("--what", sweep.what, "lna | switch | assembly-s12 | assembly-s13")
        ->required()
        ->check(CLI::IsMember({"lna", "switch", "assembly-s12", "assembly-s13"}));
    s->add_option("--mux", sweep.mux, "Selected switch channel, or 'none'");
    s->add_option("--start", sweep.start, "Start frequency, e.g. '500 MHz'");
    s->add_option("--stop", sweep.stop, "Stop frequency");
    s->add_option("--points", sweep.points, "Number of grid points");

    LineshapeOptions ls;
    auto* l = app.add_subcommand("lineshape", "Demodulated signal versus gate voltage");
    add_common(l, ls.common);
    l->add_option("--seb", ls.seb, "SEB index or 'all'")->capture_default_str();
    l->add_option("--vg-start", ls.vg_start, "Sweep start (default v0 - 1 mV)");
    l->add_option("--vg-stop", ls.vg_stop, "Sweep stop (default v0 + 1 mV)");
    l->add_option("--points", ls.points, "Number of points")->capture_default_str();

    TdmaOptions td;
    auto* t = app.add_subcommand("tdma", "Time-division multiplexed IQ traces");
    add_common(t, td.common);
    t->add_option("--schedule", td.schedule, "Schedule file (default: the three-window schedule)");
    t->add_option("--noise", td.noise, "on | off")->check(CLI::IsMember({"on", "off"}))->capture_default_str();
    t->add_option("--seed", td.seed, "Master seed (default: config seed)");

    SnrOptions sn;
    auto* n = app.add_subcommand("snr", "Calibrated two-level SNR benchmark");
    add_common(n, sn.common);
    n->add_option("--tau", sn.tau, "Integration time")->capture_default_str();
    n->add_option("--window", sn.window, "Length of each level window")->capture_default_str();
    n->add_option("--seed", sn.seed, "Master seed (default: config seed)");

    FitOptions fo;
    auto* f = app.add_subcommand("fit", "Fit the electron temperature of a lineshape CSV");
    f->add_option("data", fo.data, "CSV with gate voltage and signal columns")->required();
    f->add_option("--model", fo.model, "Lineshape model")->check(CLI::IsMember({"sech2"}))->capture_default_str();
    f->add_option("--alpha", fo.alpha, "Lever arm")->capture_default_str();
    f->add_option("--vg-column", fo.vg_column, "Gate-voltage column")->capture_default_str();
    f->add_option("--signal-column", fo.signal_column, "Signal column")->capture_default_str();
    f->add_option("--out", fo.out, "Output directory")->capture_default_str();

    ValidateOptions va;
    auto* v = app.add_subcommand("validate", "Validate an assembly config");
    add_common(v, va.common);
    v->add_flag("--print-normalized", va.print_normalized, "Emit the canonical form");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsageError;
    }

    Run run;
    int status = kExitOk;
    std::string message;
    try {
        if (s->parsed()) {
            run.command = "sweep";
            run.out_dir = sweep.common.out;
            fs::create_directories(run.out_dir);
            status = cmd_sweep(sweep, run, out);
        } else if (l->parsed()) {
            run.command = "lineshape";
            run.out_dir = ls.common.out;
            fs::create_directories(run.out_dir);
            status = cmd_lineshape(ls, run, out);
        } else if (t->parsed()) {
            run.command = "tdma";
            run.out_dir = td.common.out;
            fs::create_directories(run.out_dir);
            status = cmd_tdma(td, run, out);
        } else if (n->parsed()) {
            run.command = "snr";
            run.out_dir = sn.common.out;
            fs::create_directories(run.out_dir);
            status = cmd_snr(sn, run, out);
        } else if (f->parsed()) {
            run.command = "fit";
            run.out_dir = fo.out;
            fs::create_directories(run.out_dir);
            status = cmd_fit(fo, run, out);
        } else if (v->parsed()) {
            run.command = "validate";
            run.out_dir = va.common.out;
            status = cmd_validate(va, run, out);
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        status = kExitUsageError;
        message = e.what();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        status = kExitDomainError;
        message = e.what();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        status = kExitDomainError;
        message = e.what();
    }
    for (const auto& w : run.warnings) {
        err << "warning: " << w << '\n';
    }
    run.write_manifest(status == kExitOk, message, err);
    return status;
}

}  // namespace cryomux::cli
