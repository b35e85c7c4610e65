#pragma once

#include "pabidot/types.hpp"

namespace pabidot {

/// Per-attribute mean and sample (m-1) standard deviation.
struct ColumnStats {
    Vector means;
    Vector stds;

    std::size_t size() const noexcept { return static_cast<std::size_t>(means.size()); }
};

/// Throws constant_column (naming the 0-based column) when any column has a single value,
/// and empty_data when fewer than two rows are given.
ColumnStats column_stats(const DataMatrix& data);

DataMatrix zscore(const DataMatrix& data, const ColumnStats& stats);
DataMatrix inverse_zscore(const DataMatrix& data, const ColumnStats& stats);

/// Sample covariance (m-1 denominator) of the columns of `data`.
Eigen::MatrixXd sample_covariance(const DataMatrix& data);

/// Sample variance of each column.
Vector column_variances(const DataMatrix& data);

} // namespace pabidot
