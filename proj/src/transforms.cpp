#include "pabidot/transforms.hpp"

#include "pabidot/error.hpp"

#include <cmath>
#include <string>

namespace pabidot {

namespace {

void require_dimension(std::size_t n)
{
    if (n < 2) {
        throw Error(ErrorKind::dimension,
                    "transform dimension must be at least 2, got " + std::to_string(n));
    }
}

} // namespace

HomogeneousMatrix::HomogeneousMatrix(std::size_t n)
    : entries_(Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n + 1),
                                         static_cast<Eigen::Index>(n + 1)))
{
    require_dimension(n);
}

HomogeneousMatrix::HomogeneousMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries))
{
    if (entries_.rows() != entries_.cols() || entries_.rows() < 3) {
        throw Error(ErrorKind::shape, "homogeneous matrix must be square with size >= 3");
    }
    const auto last = entries_.rows() - 1;
    for (Eigen::Index c = 0; c < last; ++c) {
        if (entries_(last, c) != 0.0) {
            throw Error(ErrorKind::shape, "homogeneous matrix last row must be (0,...,0,1)");
        }
    }
    if (entries_(last, last) != 1.0) {
        throw Error(ErrorKind::shape, "homogeneous matrix last row must be (0,...,0,1)");
    }
}

Eigen::MatrixXd HomogeneousMatrix::linear() const
{
    const auto n = entries_.rows() - 1;
    return entries_.topLeftCorner(n, n);
}

Vector HomogeneousMatrix::offset() const
{
    const auto n = entries_.rows() - 1;
    return entries_.topRightCorner(n, 1);
}

Vector HomogeneousMatrix::apply(const Vector& point) const
{
    if (static_cast<std::size_t>(point.size()) != dim()) {
        throw Error(ErrorKind::shape, "point length does not match transform dimension");
    }
    return linear() * point + offset();
}

HomogeneousMatrix operator*(const HomogeneousMatrix& lhs, const HomogeneousMatrix& rhs)
{
    if (lhs.dim() != rhs.dim()) {
        throw Error(ErrorKind::shape, "cannot compose transforms of different dimension");
    }
    return HomogeneousMatrix(Eigen::MatrixXd(lhs.entries_ * rhs.entries_));
}

std::vector<RotationPlanePair> rotation_planes(std::size_t n)
{
    std::vector<RotationPlanePair> planes;
    planes.reserve(n * (n - 1) / 2);
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = i + 1; j <= n; ++j) {
            planes.push_back({i, j});
        }
    }
    return planes;
}

Eigen::MatrixXd rotation_block(std::size_t n, Degrees theta)
{
    require_dimension(n);
    const double c = std::cos(theta.radians());
    const double s = std::sin(theta.radians());
    const auto size = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd product = Eigen::MatrixXd::Identity(size, size);

    // Right-multiplying by the (i, j) Givens factor only mixes columns i and j:
    //   G(i,i) = c, G(j,i) = s, G(i,j) = -s, G(j,j) = c.
    for (const auto& plane : rotation_planes(n)) {
        const auto i = static_cast<Eigen::Index>(plane.i - 1);
        const auto j = static_cast<Eigen::Index>(plane.j - 1);
        const Eigen::VectorXd col_i = product.col(i);
        const Eigen::VectorXd col_j = product.col(j);
        product.col(i) = c * col_i + s * col_j;
        product.col(j) = -s * col_i + c * col_j;
    }
    return product;
}

HomogeneousMatrix make_rotation_matrix(std::size_t n, Degrees theta)
{
    HomogeneousMatrix identity(n);
    Eigen::MatrixXd entries = identity.entries();
    const auto size = static_cast<Eigen::Index>(n);
    entries.topLeftCorner(size, size) = rotation_block(n, theta);
    return HomogeneousMatrix(std::move(entries));
}

HomogeneousMatrix make_reflection_matrix(std::size_t n, Axis ax)
{
    require_dimension(n);
    if (ax.value < 1 || ax.value > n) {
        throw Error(ErrorKind::axis, "reflection axis " + std::to_string(ax.value) +
                                         " outside 1.." + std::to_string(n));
    }
    Eigen::MatrixXd entries = HomogeneousMatrix(n).entries();
    const auto k = static_cast<Eigen::Index>(ax.index());
    entries(k, k) = -1.0;
    return HomogeneousMatrix(std::move(entries));
}

HomogeneousMatrix make_translation_matrix(std::size_t n, Rng& rng)
{
    require_dimension(n);
    Eigen::MatrixXd entries = HomogeneousMatrix(n).entries();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto last = static_cast<Eigen::Index>(n);
    for (Eigen::Index r = 0; r < last; ++r) {
        double t = 0.0;
        do {
            t = unit(rng);
        } while (t <= 0.0 || t >= 1.0);
        entries(r, last) = t;
    }
    return HomogeneousMatrix(std::move(entries));
}

DataMatrix apply_transform(const HomogeneousMatrix& transform, const DataMatrix& data)
{
    if (static_cast<std::size_t>(data.cols()) != transform.dim()) {
        throw Error(ErrorKind::shape, "data has " + std::to_string(data.cols()) +
                                          " columns but transform dimension is " +
                                          std::to_string(transform.dim()));
    }
    // Row form of (A x + b) for every record: D A^T + 1 b^T.
    const Eigen::MatrixXd linear = transform.linear();
    const Eigen::RowVectorXd offset = transform.offset().transpose();
    DataMatrix out = data * linear.transpose();
    out.rowwise() += offset;
    return out;
}

DataMatrix apply_composite(const HomogeneousMatrix& rotation,
                           const HomogeneousMatrix& translation,
                           const HomogeneousMatrix& reflection,
                           const DataMatrix& data)
{
    return apply_transform(rotation * translation * reflection, data);
}

} // namespace pabidot
