// SPDX-License-Identifier: Apache-2.0
#include "cryomux/tdma/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "cryomux/error.hpp"
#include "cryomux/io/csv.hpp"
#include "cryomux/scenario/quantity.hpp"
#include "cryomux/units.hpp"

namespace cryomux::tdma {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Per-path memo of the last gate voltage and its transmission, so static
// gates cost one evaluation per run of identical samples.
struct PathCache {
    double vg = std::numeric_limits<double>::quiet_NaN();
    Complex t = 0.0;
};

}  // namespace

std::pair<std::size_t, std::size_t> IqTrace::index_range(double t_start, double t_end) const {
    const auto to_index = [&](double t) {
        const double x = std::ceil((t - t0) * sample_rate_hz - 1e-9);
        return static_cast<std::size_t>(std::clamp(x, 0.0, static_cast<double>(samples.size())));
    };
    const std::size_t first = to_index(t_start);
    return {first, std::max(first, to_index(t_end))};
}

std::uint64_t derive_tone_seed(std::uint64_t master, std::size_t tone_index) {
    return splitmix64(master + (static_cast<std::uint64_t>(tone_index) + 1) * 0x9E3779B97F4A7C15ULL);
}

SimulationResult simulate(const TdmaSchedule& schedule, std::span<const double> tones_hz,
                          const Assembly& assembly, const SimulationOptions& options) {
    SimulationResult result;
    const auto& cfg = assembly.config();

    const auto gaps = schedule.gaps();
    if (!gaps.empty()) {
        if (options.strict_gaps) {
            std::ostringstream os;
            os << "schedule leaves [" << gaps.front().first << ", " << gaps.front().second
               << ") s uncovered";
            throw Error(ErrorCode::ScheduleGap, os.str());
        }
        for (const auto& [a, b] : gaps) {
            std::ostringstream os;
            os << "schedule gap [" << a << ", " << b << ") s filled with mux = none, idle gates";
            result.warnings.push_back(os.str());
        }
    }
    for (double f : tones_hz) {
        if (!(f > 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "tone frequencies must be > 0");
        }
        if (!cfg.allow_out_of_band_tones &&
            (f < cfg.lna.f_low_3db_hz || f > cfg.lna.f_high_3db_hz)) {
            result.warnings.push_back("tone " +
                                      scenario::format_quantity(f, scenario::Dimension::Frequency) +
                                      " lies outside the LNA 3 dB band");
        }
    }

    const double fs = cfg.sample_rate_hz;
    const int m = assembly.oversampling();
    const double a = std::exp(-kTwoPi * cfg.demod_bandwidth_hz / (fs * m));
    const double t_begin = schedule.start_time();
    const auto n_samples =
        static_cast<std::size_t>(std::llround((schedule.end_time() - t_begin) * fs));
    const std::size_t n_paths = assembly.path_count();
    const std::vector<double> idle = assembly.idle_gates();
    const auto& entries = schedule.entries();

    // Schedule state for each output sample: entry index, or entries.size() in a gap.
    std::vector<std::size_t> state(n_samples);
    {
        std::size_t e = 0;
        for (std::size_t n = 0; n < n_samples; ++n) {
            const double t = t_begin + static_cast<double>(n) / fs;
            while (e < entries.size() && t >= entries[e].t_end) {
                ++e;
            }
            state[n] = (e < entries.size() && t >= entries[e].t_start) ? e : entries.size();
        }
    }

    for (std::size_t k = 0; k < tones_hz.size(); ++k) {
        const double f = tones_hz[k];
        const Complex scale = assembly.drive_amplitude() * assembly.input_attenuation() *
                              assembly.receive_gain(f) *
                              std::polar(1.0, -assembly.demod_phase(f));

        // Gate drive per path for every schedule state (last row: gap, mux none).
        std::vector<std::vector<Complex>> drive(entries.size() + 1, std::vector<Complex>(n_paths));
        for (std::size_t e = 0; e <= entries.size(); ++e) {
            const MuxState mux = e < entries.size() ? entries[e].mux : MuxState::none();
            for (std::size_t i = 0; i < n_paths; ++i) {
                drive[e][i] = assembly.gate_drive(mux, i, f);
            }
        }

        const double sigma2 = assembly.noise_variance(f);
        const double sd_in = std::sqrt(sigma2 * (1.0 + a) / (1.0 - a));
        const double sd_stationary = std::sqrt(sigma2);
        std::mt19937_64 rng(derive_tone_seed(options.seed, k));
        std::normal_distribution<double> normal(0.0, 1.0);

        IqTrace trace{f, fs, t_begin, {}};
        trace.samples.resize(n_samples);
        std::vector<PathCache> cache(n_paths);
        Complex y = 0.0;
        for (std::size_t n = 0; n < n_samples; ++n) {
            const double t = t_begin + static_cast<double>(n) / fs;
            const std::size_t e = state[n];
            Complex sum = 0.0;
            for (std::size_t i = 0; i < n_paths; ++i) {
                double vg = idle[i];
                if (e < entries.size() && i < entries[e].gates.size() && entries[e].gates[i]) {
                    vg = entries[e].gates[i]->value_at(t);
                }
                if (vg != cache[i].vg) {
                    cache[i].vg = vg;
                    cache[i].t = seb::seb_transmission(vg, f, assembly.path(i));
                }
                sum += drive[e][i] * cache[i].t;
            }
            const Complex s = scale * sum;
            if (n == 0) {
                y = s;
                if (options.noise) {
                    const double re = normal(rng);
                    const double im = normal(rng);
                    y += sd_stationary * Complex(re, im);
                }
            }
            Complex acc = 0.0;
            for (int j = 0; j < m; ++j) {
                Complex x = s;
                if (options.noise) {
                    const double re = normal(rng);
                    const double im = normal(rng);
                    x += sd_in * Complex(re, im);
                }
                y = a * y + (1.0 - a) * x;
                acc += y;
            }
            trace.samples[n] = acc / static_cast<double>(m);
        }
        result.traces.push_back(std::move(trace));
    }
    return result;
}

void write_trace_csv(const std::filesystem::path& path, const IqTrace& trace) {
    io::CsvWriter csv(path, {"t_s", "i_v", "q_v"});
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        csv.row({trace.time_at(i), trace.samples[i].real(), trace.samples[i].imag()});
    }
}

}  // namespace cryomux::tdma
