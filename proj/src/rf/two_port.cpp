// SPDX-License-Identifier: Apache-2.0
#include "cryomux/rf/two_port.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "cryomux/error.hpp"

namespace cryomux::rf {

namespace {

void require_same_base(const TwoPortNetwork& first, const TwoPortNetwork& other) {
    if (!(first.grid() == other.grid())) {
        throw Error(ErrorCode::GridMismatch, "cascade operands are defined on different grids");
    }
    if (first.z0() != other.z0()) {
        std::ostringstream os;
        os << "cascade operands use different reference impedances (" << first.z0() << " vs "
           << other.z0() << " ohm)";
        throw Error(ErrorCode::GridMismatch, os.str());
    }
}

}  // namespace

FrequencyGrid::FrequencyGrid(std::vector<double> points_hz) : points_(std::move(points_hz)) {
    if (points_.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "frequency grid needs at least 2 points");
    }
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!(points_[i] > 0.0) || !std::isfinite(points_[i])) {
            throw Error(ErrorCode::InvalidArgument, "frequency grid values must be finite and > 0");
        }
        if (i > 0 && !(points_[i] > points_[i - 1])) {
            throw Error(ErrorCode::InvalidArgument, "frequency grid must be strictly increasing");
        }
    }
}

FrequencyGrid FrequencyGrid::linear(double start_hz, double stop_hz, std::size_t count) {
    if (count < 2) {
        throw Error(ErrorCode::InvalidArgument, "frequency grid needs at least 2 points");
    }
    std::vector<double> pts(count);
    const double step = (stop_hz - start_hz) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        pts[i] = start_hz + step * static_cast<double>(i);
    }
    pts.back() = stop_hz;
    return FrequencyGrid(std::move(pts));
}

Abcd Abcd::reversed() const {
    // For a reciprocal network this is [[D, B], [C, A]]; the general form keeps
    // the determinant consistent for non-reciprocal ones.
    const Complex det = determinant();
    return Abcd{d / det, b / det, c / det, a / det};
}

Abcd operator*(const Abcd& lhs, const Abcd& rhs) {
    return Abcd{lhs.a * rhs.a + lhs.b * rhs.c, lhs.a * rhs.b + lhs.b * rhs.d,
                lhs.c * rhs.a + lhs.d * rhs.c, lhs.c * rhs.b + lhs.d * rhs.d};
}

Abcd series_impedance(Complex z) { return Abcd{1.0, z, 0.0, 1.0}; }

Abcd shunt_admittance(Complex y) { return Abcd{1.0, 0.0, y, 1.0}; }

Abcd s_to_abcd(const SMatrix& s, double z0) {
    if (s.s21 == Complex(0.0)) {
        throw Error(ErrorCode::SingularConversion, "S21 = 0, chain matrix does not exist");
    }
    const Complex two_s21 = 2.0 * s.s21;
    const Complex cross = s.s12 * s.s21;
    return Abcd{((1.0 + s.s11) * (1.0 - s.s22) + cross) / two_s21,
                z0 * ((1.0 + s.s11) * (1.0 + s.s22) - cross) / two_s21,
                ((1.0 - s.s11) * (1.0 - s.s22) - cross) / (two_s21 * z0),
                ((1.0 - s.s11) * (1.0 + s.s22) + cross) / two_s21};
}

SMatrix abcd_to_s(const Abcd& m, double z0) {
    const Complex b_n = m.b / z0;
    const Complex c_n = m.c * z0;
    const Complex den = m.a + b_n + c_n + m.d;
    if (den == Complex(0.0)) {
        throw Error(ErrorCode::SingularConversion, "A + B/z0 + C*z0 + D = 0");
    }
    return SMatrix{(m.a + b_n - c_n - m.d) / den, 2.0 * m.determinant() / den, 2.0 / den,
                   (-m.a + b_n - c_n + m.d) / den};
}

double max_singular_value(const SMatrix& s) {
    // The closed form for a 2x2 loses half the digits when both singular
    // values are close, which is exactly the lossless case.
    Eigen::Matrix2cd m;
    m << s.s11, s.s12, s.s21, s.s22;
    return Eigen::JacobiSVD<Eigen::Matrix2cd>(m).singularValues()(0);
}

TwoPortNetwork::TwoPortNetwork(FrequencyGrid grid, std::vector<SMatrix> s, double z0)
    : grid_(std::move(grid)), s_(std::move(s)), z0_(z0) {
    if (s_.size() != grid_.size()) {
        throw Error(ErrorCode::GridMismatch, "one S-matrix per grid point is required");
    }
    if (!(z0_ > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "reference impedance must be > 0");
    }
}

TwoPortNetwork TwoPortNetwork::thru(FrequencyGrid grid, double z0) {
    std::vector<SMatrix> s(grid.size(), SMatrix{0.0, 1.0, 1.0, 0.0});
    return TwoPortNetwork(std::move(grid), std::move(s), z0);
}

AbcdMatrix::AbcdMatrix(FrequencyGrid grid, std::vector<Abcd> m)
    : grid_(std::move(grid)), m_(std::move(m)) {
    if (m_.size() != grid_.size()) {
        throw Error(ErrorCode::GridMismatch, "one chain matrix per grid point is required");
    }
}

AbcdMatrix s_to_abcd(const TwoPortNetwork& net) {
    std::vector<Abcd> out;
    out.reserve(net.size());
    for (std::size_t i = 0; i < net.size(); ++i) {
        try {
            out.push_back(s_to_abcd(net.at(i), net.z0()));
        } catch (const Error& e) {
            std::ostringstream os;
            os << e.what() << " at " << net.grid()[i] << " Hz";
            throw Error(ErrorCode::SingularConversion, os.str());
        }
    }
    return AbcdMatrix(net.grid(), std::move(out));
}

TwoPortNetwork abcd_to_s(const AbcdMatrix& m, double z0) {
    std::vector<SMatrix> out;
    out.reserve(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        try {
            out.push_back(abcd_to_s(m.at(i), z0));
        } catch (const Error& e) {
            std::ostringstream os;
            os << e.what() << " at " << m.grid()[i] << " Hz";
            throw Error(ErrorCode::SingularConversion, os.str());
        }
    }
    return TwoPortNetwork(m.grid(), std::move(out), z0);
}

TwoPortNetwork cascade(std::span<const TwoPortNetwork> nets) {
    if (nets.empty()) {
        throw Error(ErrorCode::InvalidArgument, "cascade of an empty list");
    }
    for (const auto& n : nets.subspan(1)) {
        require_same_base(nets.front(), n);
    }
    if (nets.size() == 1) {
        return nets.front();
    }
    const auto& grid = nets.front().grid();
    std::vector<Abcd> chain(grid.size());
    for (const auto& n : nets) {
        const AbcdMatrix m = s_to_abcd(n);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            chain[i] = chain[i] * m.at(i);
        }
    }
    return abcd_to_s(AbcdMatrix(grid, std::move(chain)), nets.front().z0());
}

TwoPortNetwork cascade(std::initializer_list<TwoPortNetwork> nets) {
    return cascade(std::span<const TwoPortNetwork>(nets.begin(), nets.size()));
}

TwoPortNetwork resample(const TwoPortNetwork& net, const FrequencyGrid& grid) {
    const auto src = net.grid().points();
    if (grid.front() < src.front() || grid.back() > src.back()) {
        std::ostringstream os;
        os << "target grid [" << grid.front() << ", " << grid.back()
           << "] Hz exceeds source span [" << src.front() << ", " << src.back() << "] Hz";
        throw Error(ErrorCode::OutOfSpan, os.str());
    }
    const auto lerp = [](Complex lo, Complex hi, double w) {
        return Complex(lo.real() + w * (hi.real() - lo.real()),
                       lo.imag() + w * (hi.imag() - lo.imag()));
    };
    std::vector<SMatrix> out;
    out.reserve(grid.size());
    for (double f : grid) {
        auto it = std::lower_bound(src.begin(), src.end(), f);
        auto hi = static_cast<std::size_t>(it - src.begin());
        if (src[hi] == f) {
            out.push_back(net.at(hi));
            continue;
        }
        const std::size_t lo = hi - 1;
        const double w = (f - src[lo]) / (src[hi] - src[lo]);
        const SMatrix& a = net.at(lo);
        const SMatrix& b = net.at(hi);
        out.push_back(SMatrix{lerp(a.s11, b.s11, w), lerp(a.s12, b.s12, w), lerp(a.s21, b.s21, w),
                              lerp(a.s22, b.s22, w)});
    }
    return TwoPortNetwork(grid, std::move(out), net.z0());
}

PropertyReport check_passivity(const TwoPortNetwork& net, double epsilon) {
    PropertyReport report;
    for (std::size_t i = 0; i < net.size(); ++i) {
        const double sv = max_singular_value(net.at(i));
        report.worst_value = std::max(report.worst_value, sv);
        if (sv > 1.0 + epsilon) {
            report.satisfied = false;
            report.violating_frequencies_hz.push_back(net.grid()[i]);
        }
    }
    return report;
}

PropertyReport check_reciprocity(const TwoPortNetwork& net, double tolerance) {
    PropertyReport report;
    for (std::size_t i = 0; i < net.size(); ++i) {
        const double diff = std::abs(net.at(i).s12 - net.at(i).s21);
        report.worst_value = std::max(report.worst_value, diff);
        if (diff > tolerance) {
            report.satisfied = false;
            report.violating_frequencies_hz.push_back(net.grid()[i]);
        }
    }
    return report;
}

}  // namespace cryomux::rf
