// SPDX-License-Identifier: Apache-2.0
#pragma once

// Two-port network algebra. S-parameters at a real reference impedance are the
// canonical representation; ABCD (chain) matrices are used transiently when
// composing networks.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cryomux::rf {

using Complex = std::complex<double>;

inline constexpr double kDefaultZ0 = 50.0;
inline constexpr double kPassivityTolerance = 1e-9;
inline constexpr double kReciprocityTolerance = 1e-9;

/// Strictly increasing list of positive frequencies (Hz), at least 2 points.
class FrequencyGrid {
public:
    explicit FrequencyGrid(std::vector<double> points_hz);

    /// Evenly spaced grid including both end points.
    static FrequencyGrid linear(double start_hz, double stop_hz, std::size_t count);

    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return points_[i]; }
    [[nodiscard]] std::span<const double> points() const noexcept { return points_; }
    [[nodiscard]] double front() const noexcept { return points_.front(); }
    [[nodiscard]] double back() const noexcept { return points_.back(); }

    [[nodiscard]] auto begin() const noexcept { return points_.begin(); }
    [[nodiscard]] auto end() const noexcept { return points_.end(); }

    friend bool operator==(const FrequencyGrid&, const FrequencyGrid&) = default;

private:
    std::vector<double> points_;
};

struct SMatrix {
    Complex s11{0.0};
    Complex s12{0.0};
    Complex s21{0.0};
    Complex s22{0.0};

    friend bool operator==(const SMatrix&, const SMatrix&) = default;
};

/// Chain matrix [[A, B], [C, D]] relating (V1, I1) to (V2, -I2).
struct Abcd {
    Complex a{1.0};
    Complex b{0.0};
    Complex c{0.0};
    Complex d{1.0};

    [[nodiscard]] Complex determinant() const { return a * d - b * c; }

    /// Port-reversed network (port 1 and port 2 swapped).
    [[nodiscard]] Abcd reversed() const;

    friend Abcd operator*(const Abcd& lhs, const Abcd& rhs);
    friend bool operator==(const Abcd&, const Abcd&) = default;
};

// Lumped building blocks.
Abcd series_impedance(Complex z);
Abcd shunt_admittance(Complex y);

// Point conversions at a real reference impedance.
Abcd s_to_abcd(const SMatrix& s, double z0);
SMatrix abcd_to_s(const Abcd& m, double z0);

/// Largest singular value of a 2x2 S-matrix.
double max_singular_value(const SMatrix& s);

class TwoPortNetwork {
public:
    TwoPortNetwork(FrequencyGrid grid, std::vector<SMatrix> s, double z0 = kDefaultZ0);

    /// Ideal thru (S = [[0, 1], [1, 0]]) on a grid.
    static TwoPortNetwork thru(FrequencyGrid grid, double z0 = kDefaultZ0);

    [[nodiscard]] const FrequencyGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const SMatrix> s() const noexcept { return s_; }
    [[nodiscard]] const SMatrix& at(std::size_t i) const { return s_.at(i); }
    [[nodiscard]] double z0() const noexcept { return z0_; }
    [[nodiscard]] std::size_t size() const noexcept { return s_.size(); }

private:
    FrequencyGrid grid_;
    std::vector<SMatrix> s_;
    double z0_;
};

class AbcdMatrix {
public:
    AbcdMatrix(FrequencyGrid grid, std::vector<Abcd> m);

    [[nodiscard]] const FrequencyGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const Abcd> m() const noexcept { return m_; }
    [[nodiscard]] const Abcd& at(std::size_t i) const { return m_.at(i); }
    [[nodiscard]] std::size_t size() const noexcept { return m_.size(); }

private:
    FrequencyGrid grid_;
    std::vector<Abcd> m_;
};

/// Throws SingularConversion when S21 vanishes at some grid point.
AbcdMatrix s_to_abcd(const TwoPortNetwork& net);

/// Throws SingularConversion when A + B/z0 + C*z0 + D vanishes.
TwoPortNetwork abcd_to_s(const AbcdMatrix& m, double z0 = kDefaultZ0);

/// Chain composition in signal-flow order (first element at the source).
/// Throws GridMismatch when grids or reference impedances differ.
TwoPortNetwork cascade(std::span<const TwoPortNetwork> nets);
TwoPortNetwork cascade(std::initializer_list<TwoPortNetwork> nets);

/// Linear interpolation of real and imaginary parts onto `grid`. Throws
/// OutOfSpan when the target extends beyond the source grid.
TwoPortNetwork resample(const TwoPortNetwork& net, const FrequencyGrid& grid);

struct PropertyReport {
    bool satisfied = true;
    double worst_value = 0.0;  // largest singular value, or largest |S12 - S21|
    std::vector<double> violating_frequencies_hz;
};

PropertyReport check_passivity(const TwoPortNetwork& net, double epsilon = kPassivityTolerance);
PropertyReport check_reciprocity(const TwoPortNetwork& net,
                                 double tolerance = kReciprocityTolerance);

}  // namespace cryomux::rf
