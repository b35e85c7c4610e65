#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>

namespace pabidot {

// m x n table: rows are records, columns are attributes.
using DataMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Angles cross the API in degrees.
struct Degrees {
    double value = 0.0;

    constexpr explicit Degrees(double v) : value(v) {}
    double radians() const noexcept;
};

// 1-based attribute index, matching how reflection axes are reported.
struct Axis {
    std::size_t value = 1;

    constexpr explicit Axis(std::size_t v) : value(v) {}
    constexpr std::size_t index() const noexcept { return value - 1; }
    friend constexpr bool operator==(Axis, Axis) = default;
};

} // namespace pabidot
