// SPDX-License-Identifier: Apache-2.0
#include "cryomux/analysis/resonances.hpp"

#include <algorithm>
#include <cmath>

#include "cryomux/error.hpp"
#include "cryomux/io/csv.hpp"
#include "cryomux/units.hpp"

namespace cryomux::analysis {

namespace {

// Highest level reached walking from i towards `step` before the trace
// drops below y[i] again (or the edge is hit).
double shoulder(std::span<const double> y, std::size_t i, int step) {
    double best = y[i];
    for (auto j = static_cast<std::ptrdiff_t>(i) + step;
         j >= 0 && j < static_cast<std::ptrdiff_t>(y.size()); j += step) {
        const double v = y[static_cast<std::size_t>(j)];
        if (v < y[i]) {
            break;
        }
        best = std::max(best, v);
    }
    return best;
}

// Frequency where the linear-power trace crosses `level`, walking outwards.
double crossing(std::span<const double> f, std::span<const double> p, std::size_t i, int step,
                double level) {
    auto j = static_cast<std::ptrdiff_t>(i);
    while (true) {
        const auto k = j + step;
        if (k < 0 || k >= static_cast<std::ptrdiff_t>(p.size())) {
            return f[static_cast<std::size_t>(j)];
        }
        const double pj = p[static_cast<std::size_t>(j)];
        const double pk = p[static_cast<std::size_t>(k)];
        if (pk >= level) {
            const double w = (level - pj) / (pk - pj);
            return f[static_cast<std::size_t>(j)] +
                   w * (f[static_cast<std::size_t>(k)] - f[static_cast<std::size_t>(j)]);
        }
        j = k;
    }
}

}  // namespace

std::vector<Resonance> extract_resonances(std::span<const double> f_hz,
                                          std::span<const double> magnitude_db, FeatureKind kind,
                                          double min_prominence_db) {
    if (f_hz.size() != magnitude_db.size() || f_hz.size() < 3) {
        throw Error(ErrorCode::InvalidArgument, "need at least 3 matching frequency/magnitude points");
    }
    // Work on dips throughout; peaks are dips of the negated trace.
    const double sign = kind == FeatureKind::Dip ? 1.0 : -1.0;
    std::vector<double> y(magnitude_db.size());
    std::vector<double> p(magnitude_db.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = sign * magnitude_db[i];
        p[i] = db_to_power(y[i]);
    }

    std::vector<Resonance> out;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (!(y[i] < y[i - 1] && y[i] <= y[i + 1])) {
            continue;
        }
        const double base = std::min(shoulder(y, i, -1), shoulder(y, i, +1));
        if (base - y[i] < min_prominence_db) {
            continue;
        }
        const double curv = y[i - 1] - 2.0 * y[i] + y[i + 1];
        double delta = curv > 0.0 ? 0.5 * (y[i - 1] - y[i + 1]) / curv : 0.0;
        delta = std::clamp(delta, -0.5, 0.5);
        const double y_min = y[i] - 0.25 * (y[i - 1] - y[i + 1]) * delta;
        const double df = delta >= 0.0 ? f_hz[i + 1] - f_hz[i] : f_hz[i] - f_hz[i - 1];

        const double level = 0.5 * (db_to_power(base) + db_to_power(y_min));
        const double lo = crossing(f_hz, p, i, -1, level);
        const double hi = crossing(f_hz, p, i, +1, level);
        out.push_back(Resonance{f_hz[i] + delta * df, base - y_min, hi - lo});
    }
    if (out.empty()) {
        throw Error(ErrorCode::NoResonanceFound, "no feature with prominence >= " +
                                                     std::to_string(min_prominence_db) + " dB");
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.f_hz < b.f_hz; });
    return out;
}

std::vector<Resonance> extract_resonances(const rf::TwoPortNetwork& sweep,
                                          const ResonanceOptions& options) {
    std::vector<double> mag(sweep.size());
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        const rf::SMatrix& s = sweep.at(i);
        rf::Complex v;
        switch (options.parameter) {
            case SParameter::S11: v = s.s11; break;
            case SParameter::S12: v = s.s12; break;
            case SParameter::S21: v = s.s21; break;
            case SParameter::S22: v = s.s22; break;
        }
        // Floor exact zeros so the dB trace stays finite.
        mag[i] = amplitude_to_db(std::max(std::abs(v), 1e-300));
    }
    const auto f = sweep.grid().points();
    return extract_resonances(f, mag, options.kind, options.min_prominence_db);
}

void write_resonances_csv(const std::filesystem::path& path, std::span<const Resonance> list) {
    io::CsvWriter csv(path, {"f_hz", "depth_db", "bw_hz"});
    for (const auto& r : list) {
        csv.row({r.f_hz, r.depth_db, r.bandwidth_hz});
    }
}

}  // namespace cryomux::analysis
