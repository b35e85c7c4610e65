#include "pabidot/normalization.hpp"

#include "pabidot/error.hpp"

#include <string>

namespace pabidot {

namespace {

void require_width(const DataMatrix& data, const ColumnStats& stats)
{
    if (static_cast<std::size_t>(data.cols()) != stats.size() ||
        stats.means.size() != stats.stds.size()) {
        throw Error(ErrorKind::shape, "data has " + std::to_string(data.cols()) +
                                          " columns but stats describe " +
                                          std::to_string(stats.size()));
    }
}

} // namespace

ColumnStats column_stats(const DataMatrix& data)
{
    if (data.rows() < 2) {
        throw Error(ErrorKind::empty_data, "column statistics need at least 2 rows, got " +
                                               std::to_string(data.rows()));
    }
    if (data.cols() < 1) {
        throw Error(ErrorKind::empty_data, "data has no columns");
    }
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
        if (data.col(c).maxCoeff() == data.col(c).minCoeff()) {
            throw Error(ErrorKind::constant_column,
                        "column " + std::to_string(c) + " is constant (zero standard deviation)");
        }
    }

    ColumnStats stats;
    stats.means = data.colwise().mean().transpose();
    const DataMatrix centered = data.rowwise() - stats.means.transpose();
    stats.stds = (centered.colwise().squaredNorm() / static_cast<double>(data.rows() - 1))
                     .cwiseSqrt()
                     .transpose();
    return stats;
}

DataMatrix zscore(const DataMatrix& data, const ColumnStats& stats)
{
    require_width(data, stats);
    DataMatrix out = data.rowwise() - stats.means.transpose();
    out.array().rowwise() /= stats.stds.transpose().array();
    return out;
}

DataMatrix inverse_zscore(const DataMatrix& data, const ColumnStats& stats)
{
    require_width(data, stats);
    DataMatrix out = data;
    out.array().rowwise() *= stats.stds.transpose().array();
    out.rowwise() += stats.means.transpose();
    return out;
}

Eigen::MatrixXd sample_covariance(const DataMatrix& data)
{
    if (data.rows() < 2) {
        throw Error(ErrorKind::empty_data, "covariance needs at least 2 rows");
    }
    const DataMatrix centered = data.rowwise() - data.colwise().mean();
    Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(data.rows() - 1);
    return (cov + cov.transpose()) * 0.5;
}

Vector column_variances(const DataMatrix& data)
{
    if (data.rows() < 2) {
        throw Error(ErrorKind::empty_data, "variance needs at least 2 rows");
    }
    const DataMatrix centered = data.rowwise() - data.colwise().mean();
    return (centered.colwise().squaredNorm() / static_cast<double>(data.rows() - 1)).transpose();
}

} // namespace pabidot
