#pragma once

#include "pabidot/random.hpp"
#include "pabidot/types.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace pabidot {

/// (n+1) x (n+1) transform acting on homogeneous row points (x_1..x_n, 1).
///
/// The last row is always (0,...,0,1); construction from raw entries enforces it.
class HomogeneousMatrix {
public:
    /// Identity transform in n dimensions.
    explicit HomogeneousMatrix(std::size_t n);
    /// Wraps an explicit (n+1)x(n+1) matrix. Throws shape error on a bad last row.
    explicit HomogeneousMatrix(Eigen::MatrixXd entries);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()) - 1; }
    const Eigen::MatrixXd& entries() const noexcept { return entries_; }

    /// Upper-left n x n block (the part that acts on attribute values).
    Eigen::MatrixXd linear() const;
    /// Last column above the homogeneous 1.
    Vector offset() const;

    /// Maps one homogeneous point given in attribute space (length n).
    Vector apply(const Vector& point) const;

    friend HomogeneousMatrix operator*(const HomogeneousMatrix& lhs, const HomogeneousMatrix& rhs);

private:
    Eigen::MatrixXd entries_;
};

/// Subplane (i, j), 1-based with i < j.
struct RotationPlanePair {
    std::size_t i;
    std::size_t j;
    friend bool operator==(const RotationPlanePair&, const RotationPlanePair&) = default;
};

/// All n(n-1)/2 coordinate planes in lexicographic order (1,2),(1,3),...,(n-1,n).
std::vector<RotationPlanePair> rotation_planes(std::size_t n);

/// n x n product of every subplane rotation sharing one angle, multiplied in
/// rotation_planes() order. Used directly by the search, which never needs the
/// homogeneous border.
Eigen::MatrixXd rotation_block(std::size_t n, Degrees theta);

HomogeneousMatrix make_rotation_matrix(std::size_t n, Degrees theta);

/// Identity with entry (ax, ax) negated.
HomogeneousMatrix make_reflection_matrix(std::size_t n, Axis ax);

/// Identity with i.i.d. offsets drawn strictly inside (0, 1).
HomogeneousMatrix make_translation_matrix(std::size_t n, Rng& rng);

/// Reflect, then translate, then rotate every row of `data`:
/// D' = (M * T * RF * [D 1]^T)^T with the homogeneous column stripped.
DataMatrix apply_composite(const HomogeneousMatrix& rotation,
                           const HomogeneousMatrix& translation,
                           const HomogeneousMatrix& reflection,
                           const DataMatrix& data);

/// Applies a single homogeneous transform to every row of `data`.
DataMatrix apply_transform(const HomogeneousMatrix& transform, const DataMatrix& data);

} // namespace pabidot
