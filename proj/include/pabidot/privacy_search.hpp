#pragma once

#include "pabidot/transforms.hpp"
#include "pabidot/types.hpp"

#include <cstddef>
#include <vector>

namespace pabidot {

/// Candidate rotation angles in degrees, in the order the grid rows are laid out.
struct AngleSet {
    std::vector<double> degrees;

    /// Integer degrees 1..179 minus {30, 45, 60, 90, 120, 135, 150}: 172 angles.
    static AngleSet standard();

    std::size_t size() const noexcept { return degrees.size(); }
};

/// Local minimum guarantees over every (angle, axis) cell and their reductions.
struct PrivacyGrid {
    Eigen::MatrixXd phi;        // |angles| x n, phi(i, ax-1)
    std::vector<double> angles; // degrees, row labels of phi
    Vector per_angle_min;       // min over axes of each row
    double Phi = 0.0;           // per_angle_min at theta_optimal
    double theta_optimal = 0.0; // degrees
    std::size_t rif_optimal = 0; // 1-based axis

    std::size_t attribute_count() const noexcept { return static_cast<std::size_t>(phi.cols()); }

    /// Builds the reductions from a filled grid. Ties go to the smallest angle row, then the
    /// smallest axis; values within 1e-12 (relative, floor 1) of each other count as tied.
    static PrivacyGrid from_cells(Eigen::MatrixXd phi, std::vector<double> angles);
};

/// Minimum over attributes of Var(x_j - p_j), with the perturbed matrix materialized:
/// P = (M(theta) * T * RF(ax) * D^T)^T on the z-scored data.
double phi_bruteforce(const DataMatrix& normalized, Degrees theta, Axis ax,
                      const HomogeneousMatrix& translation);

/// Per-attribute Var(x_j - p_j) computed from the covariance of the z-scored data alone:
///   cov(j,j) + diag(A C A^T)_j - 2 * sum_k A(j,k) C(j,k),   A = R(theta) * RF(ax).
/// Throws input error unless cov is square, symmetric, and unit-diagonal within 1e-6.
Vector difference_variances_fast(const Eigen::MatrixXd& cov, Degrees theta, Axis ax);

double phi_fast(const Eigen::MatrixXd& cov, Degrees theta, Axis ax);

/// Fills the whole grid with phi_fast and reduces it. `threads == 0` picks a default
/// (PABIDOT_THREADS or the hardware concurrency). Output does not depend on `threads`.
PrivacyGrid search_optimal(const Eigen::MatrixXd& cov, const AngleSet& angles,
                           std::size_t threads = 0);

/// Worker count used when callers pass 0.
std::size_t default_thread_count();

} // namespace pabidot
