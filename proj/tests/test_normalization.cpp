#include "oracles.hpp"

#include "pabidot/error.hpp"
#include "pabidot/normalization.hpp"

#include <doctest.h>

using namespace pabidot;

TEST_CASE("stats of 1,2,3")
{
    DataMatrix d(3, 1);
    d << 1, 2, 3;
    const auto s = column_stats(d);
    CHECK(s.means[0] == 2.0);
    CHECK(s.stds[0] == 1.0);
    const DataMatrix z = zscore(d, s);
    CHECK(z(0, 0) == -1.0);
    CHECK(z(1, 0) == 0.0);
    CHECK(z(2, 0) == 1.0);
}

TEST_CASE("constant column is an error naming the column")
{
    DataMatrix d(3, 2);
    d << 1, 5, 2, 5, 3, 5;
    try {
        column_stats(d);
        FAIL("expected constant-column error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::constant_column);
        CHECK(std::string(e.what()).find("column 1") != std::string::npos);
    }
}

TEST_CASE("a single row is not enough")
{
    try {
        column_stats(DataMatrix::Ones(1, 3));
        FAIL("expected empty-data error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::empty_data);
    }
}

TEST_CASE("stats match the two-pass oracle")
{
    std::mt19937_64 rng(2024);
    DataMatrix d = oracle::random_matrix(1000, 4, rng);
    d.col(1) = d.col(1) * 1e3 + Eigen::VectorXd::Constant(1000, 5e4);
    d.col(3) = d.col(3) * 1e-2 - Eigen::VectorXd::Constant(1000, 7.0);
    const auto s = column_stats(d);
    for (Eigen::Index c = 0; c < 4; ++c) {
        const auto col = oracle::column(d, c);
        const double mu = oracle::mean_of(col);
        const double sd = std::sqrt(oracle::sample_variance(col));
        CHECK(std::abs(s.means[c] - mu) <= 1e-10 * std::max(1.0, std::abs(mu)));
        CHECK(std::abs(s.stds[c] - sd) <= 1e-10 * std::max(1.0, sd));
    }
}

TEST_CASE("z-scored columns have zero mean and unit sample variance")
{
    std::mt19937_64 rng(8);
    DataMatrix d = oracle::random_correlated(500, 5, rng);
    d.col(0) *= 1e4;
    const DataMatrix z = zscore(d, column_stats(d));
    for (Eigen::Index c = 0; c < z.cols(); ++c) {
        const auto col = oracle::column(z, c);
        CHECK(std::abs(oracle::mean_of(col)) < 1e-9);
        CHECK(std::abs(oracle::sample_variance(col) - 1.0) < 1e-9);
    }
}

TEST_CASE("inverse z-score")
{
    DataMatrix z(3, 1);
    z << -1, 0, 1;
    ColumnStats s{Vector::Constant(1, 2.0), Vector::Constant(1, 1.0)};
    const DataMatrix d = inverse_zscore(z, s);
    CHECK(d(0, 0) == 1.0);
    CHECK(d(1, 0) == 2.0);
    CHECK(d(2, 0) == 3.0);

    ColumnStats s3{Vector(3), Vector(3)};
    s3.means << 4, -2, 9;
    s3.stds << 1, 2, 3;
    const DataMatrix back = inverse_zscore(DataMatrix::Zero(5, 3), s3);
    for (Eigen::Index r = 0; r < 5; ++r) {
        CHECK(back.row(r) == s3.means.transpose());
    }
}

TEST_CASE("z-score round trips in both directions")
{
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        DataMatrix d = oracle::random_correlated(60, 4, rng) * 37.0;
        const auto s = column_stats(d);
        CHECK((inverse_zscore(zscore(d, s), s) - d).cwiseAbs().maxCoeff() < 1e-9);
        CHECK((zscore(inverse_zscore(d, s), s) - d).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("width mismatch")
{
    ColumnStats s{Vector::Zero(2), Vector::Ones(2)};
    try {
        zscore(DataMatrix::Zero(3, 3), s);
        FAIL("expected shape error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::shape);
    }
    CHECK_THROWS_AS(inverse_zscore(DataMatrix::Zero(3, 1), s), Error);
}

TEST_CASE("sample covariance of z-scored data has unit diagonal")
{
    std::mt19937_64 rng(4);
    const DataMatrix d = oracle::random_correlated(300, 6, rng);
    const Eigen::MatrixXd cov = sample_covariance(zscore(d, column_stats(d)));
    CHECK((cov.diagonal() - Vector::Ones(6)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(cov == cov.transpose());
}
