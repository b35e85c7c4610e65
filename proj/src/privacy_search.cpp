#include "pabidot/privacy_search.hpp"

#include "pabidot/error.hpp"
#include "pabidot/normalization.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <string>
#include <string_view>
#include <thread>

namespace pabidot {

namespace {

constexpr double kUnitDiagonalTolerance = 1e-6;

void validate_covariance(const Eigen::MatrixXd& cov)
{
    if (cov.rows() != cov.cols() || cov.rows() < 2) {
        throw Error(ErrorKind::input, "covariance must be square with at least 2 attributes");
    }
    if (!cov.allFinite()) {
        throw Error(ErrorKind::input, "covariance has non-finite entries");
    }
    for (Eigen::Index j = 0; j < cov.rows(); ++j) {
        if (std::abs(cov(j, j) - 1.0) > kUnitDiagonalTolerance) {
            throw Error(ErrorKind::input,
                        "covariance diagonal entry " + std::to_string(j) +
                            " is not 1; expected the covariance of z-scored data");
        }
    }
    if (!cov.isApprox(cov.transpose(), 1e-12)) {
        throw Error(ErrorKind::input, "covariance is not symmetric");
    }
}

void require_axis(std::size_t n, Axis ax)
{
    if (ax.value < 1 || ax.value > n) {
        throw Error(ErrorKind::axis, "axis " + std::to_string(ax.value) + " outside 1.." +
                                         std::to_string(n));
    }
}

constexpr double kTieTolerance = 1e-12;

// Var(D - Dp) for every attribute, given the rotation block R and the reflection axis.
// Reflection on the right of R negates column ax of R.
Vector difference_variances(const Eigen::MatrixXd& cov, const Eigen::MatrixXd& rotation,
                            std::size_t axis_index)
{
    Eigen::MatrixXd a = rotation;
    a.col(static_cast<Eigen::Index>(axis_index)) *= -1.0;

    const Eigen::MatrixXd ac = a * cov;
    const Vector var_perturbed = (ac.array() * a.array()).rowwise().sum();
    const Vector cov_cross = (cov.array() * a.array()).rowwise().sum();
    return cov.diagonal() + var_perturbed - 2.0 * cov_cross;
}

} // namespace

AngleSet AngleSet::standard()
{
    constexpr int excluded[] = {30, 45, 60, 90, 120, 135, 150};
    AngleSet set;
    set.degrees.reserve(172);
    for (int d = 1; d <= 179; ++d) {
        if (std::find(std::begin(excluded), std::end(excluded), d) == std::end(excluded)) {
            set.degrees.push_back(static_cast<double>(d));
        }
    }
    return set;
}

PrivacyGrid PrivacyGrid::from_cells(Eigen::MatrixXd phi, std::vector<double> angles)
{
    if (static_cast<std::size_t>(phi.rows()) != angles.size() || phi.rows() == 0 ||
        phi.cols() == 0) {
        throw Error(ErrorKind::shape, "privacy grid must have one non-empty row per angle");
    }
    PrivacyGrid grid;
    grid.per_angle_min.resize(phi.rows());
    for (Eigen::Index i = 0; i < phi.rows(); ++i) {
        grid.per_angle_min[i] = phi.row(i).minCoeff();
    }
    // Cells within kTieTolerance are ties: smallest angle first, then smallest axis.
    const double best = grid.per_angle_min.maxCoeff();
    const double row_tol = kTieTolerance * std::max(1.0, std::abs(best));
    Eigen::Index best_row = 0;
    while (grid.per_angle_min[best_row] < best - row_tol) {
        ++best_row;
    }
    const double row_min = grid.per_angle_min[best_row];
    const double axis_tol = kTieTolerance * std::max(1.0, std::abs(row_min));
    Eigen::Index best_axis = 0;
    while (phi(best_row, best_axis) > row_min + axis_tol) {
        ++best_axis;
    }
    grid.Phi = grid.per_angle_min[best_row];
    grid.theta_optimal = angles[static_cast<std::size_t>(best_row)];
    grid.rif_optimal = static_cast<std::size_t>(best_axis) + 1;
    grid.phi = std::move(phi);
    grid.angles = std::move(angles);
    return grid;
}

double phi_bruteforce(const DataMatrix& normalized, Degrees theta, Axis ax,
                      const HomogeneousMatrix& translation)
{
    const auto n = static_cast<std::size_t>(normalized.cols());
    if (translation.dim() != n) {
        throw Error(ErrorKind::shape, "translation dimension does not match data width");
    }
    const DataMatrix perturbed = apply_composite(make_rotation_matrix(n, theta), translation,
                                                 make_reflection_matrix(n, ax), normalized);
    return column_variances(normalized - perturbed).minCoeff();
}

Vector difference_variances_fast(const Eigen::MatrixXd& cov, Degrees theta, Axis ax)
{
    validate_covariance(cov);
    const auto n = static_cast<std::size_t>(cov.rows());
    require_axis(n, ax);
    return difference_variances(cov, rotation_block(n, theta), ax.index());
}

double phi_fast(const Eigen::MatrixXd& cov, Degrees theta, Axis ax)
{
    return difference_variances_fast(cov, theta, ax).minCoeff();
}

std::size_t default_thread_count()
{
    if (const char* env = std::getenv("PABIDOT_THREADS")) {
        std::string_view text(env);
        std::size_t value = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec == std::errc() && ptr == text.data() + text.size() && value > 0) {
            return value;
        }
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

PrivacyGrid search_optimal(const Eigen::MatrixXd& cov, const AngleSet& angles,
                           std::size_t threads)
{
    validate_covariance(cov);
    if (angles.size() == 0) {
        throw Error(ErrorKind::parameter, "angle set is empty");
    }
    const auto n = static_cast<std::size_t>(cov.rows());
    const auto rows = static_cast<Eigen::Index>(angles.size());
    Eigen::MatrixXd phi(rows, static_cast<Eigen::Index>(n));

    // Workers claim whole rows: one rotation per angle, then every axis.
    std::atomic<Eigen::Index> next{0};
    auto worker = [&] {
        for (Eigen::Index i = next.fetch_add(1); i < rows; i = next.fetch_add(1)) {
            const Eigen::MatrixXd rotation =
                rotation_block(n, Degrees(angles.degrees[static_cast<std::size_t>(i)]));
            for (std::size_t ax = 0; ax < n; ++ax) {
                phi(i, static_cast<Eigen::Index>(ax)) =
                    difference_variances(cov, rotation, ax).minCoeff();
            }
        }
    };

    if (threads == 0) {
        threads = default_thread_count();
    }
    threads = std::min<std::size_t>(threads, angles.size());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    return PrivacyGrid::from_cells(std::move(phi), angles.degrees);
}

} // namespace pabidot
