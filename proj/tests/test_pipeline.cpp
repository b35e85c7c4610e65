#include "oracles.hpp"

#include "pabidot/error.hpp"
#include "pabidot/normalization.hpp"
#include "pabidot/pipeline.hpp"

#include <doctest.h>

#include <algorithm>
#include <limits>
#include <numbers>
#include <numeric>

using namespace pabidot;

namespace {

DataMatrix sample_table(std::uint64_t seed, std::size_t m = 300, std::size_t n = 5)
{
    std::mt19937_64 rng(seed);
    DataMatrix d = oracle::random_correlated(m, n, rng);
    for (Eigen::Index c = 0; c < d.cols(); ++c) {
        d.col(c) = d.col(c) * (3.0 + 10.0 * static_cast<double>(c)) +
                   Eigen::VectorXd::Constant(d.rows(), 50.0 * static_cast<double>(c));
    }
    return d;
}

std::vector<std::vector<double>> sorted_rows(const DataMatrix& d)
{
    std::vector<std::vector<double>> rows;
    for (Eigen::Index r = 0; r < d.rows(); ++r) {
        rows.emplace_back();
        for (Eigen::Index c = 0; c < d.cols(); ++c) rows.back().push_back(d(r, c));
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

} // namespace

TEST_CASE("expansion with zero noise is the identity")
{
    Rng rng(1);
    const DataMatrix d = sample_table(1, 50, 3);
    CHECK(randomized_expansion(d, 0.0, rng) == d);
}

TEST_CASE("expansion moves every value away from zero and keeps zeros")
{
    Rng rng(2);
    DataMatrix d = sample_table(2, 200, 4);
    d(0, 0) = 0.0;
    d(5, 2) = 0.0;
    const DataMatrix e = randomized_expansion(d, 0.7, rng);
    CHECK(e(0, 0) == 0.0);
    CHECK(e(5, 2) == 0.0);
    for (Eigen::Index r = 0; r < d.rows(); ++r) {
        for (Eigen::Index c = 0; c < d.cols(); ++c) {
            if (d(r, c) == 0.0) continue;
            CHECK(std::signbit(e(r, c)) == std::signbit(d(r, c)));
            CHECK(std::abs(e(r, c)) >= std::abs(d(r, c)));
        }
    }
}

TEST_CASE("expansion of ones follows the half-normal mean")
{
    Rng rng(3);
    const double sigma = 0.3;
    const DataMatrix e = randomized_expansion(DataMatrix::Ones(1000, 1000), sigma, rng);
    const double expected = 1.0 + sigma * std::sqrt(2.0 / std::numbers::pi);
    CHECK(std::abs(e.mean() - expected) < 0.002);
    CHECK(std::abs(expected - 1.2394) < 1e-4);
}

TEST_CASE("negative or non-finite noise is a parameter error")
{
    Rng rng(4);
    for (double bad : {-0.1, std::nan(""), std::numeric_limits<double>::infinity()}) {
        try {
            randomized_expansion(DataMatrix::Ones(2, 2), bad, rng);
            FAIL("expected parameter error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::parameter);
        }
    }
}

TEST_CASE("shuffle keeps the multiset of rows and reports the permutation")
{
    Rng rng(5);
    const DataMatrix d = sample_table(5, 100, 3);
    std::vector<std::size_t> perm;
    const DataMatrix s = shuffle_rows(d, rng, &perm);
    CHECK(sorted_rows(s) == sorted_rows(d));

    std::vector<std::size_t> sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> iota(perm.size());
    std::iota(iota.begin(), iota.end(), std::size_t{0});
    CHECK(sorted == iota);
    CHECK(perm != iota);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        CHECK(s.row(static_cast<Eigen::Index>(i)) == d.row(static_cast<Eigen::Index>(perm[i])));
    }
    CHECK(unshuffle_rows(s, perm) == d);
    CHECK(apply_permutation(std::vector<int>{10, 20, 30}, {2, 0, 1}) == std::vector<int>{30, 10, 20});
}

TEST_CASE("shuffle of a single row and determinism")
{
    Rng rng(6);
    DataMatrix one(1, 3);
    one << 1, 2, 3;
    CHECK(shuffle_rows(one, rng) == one);

    Rng a(7), b(7);
    const DataMatrix d = sample_table(7, 40, 2);
    CHECK(shuffle_rows(d, a) == shuffle_rows(d, b));
}

TEST_CASE("perturb is deterministic under a fixed seed")
{
    const DataMatrix d = sample_table(8);
    PerturbationConfig cfg;
    cfg.seed = 42;
    const auto a = perturb(d, cfg);
    cfg.threads = 1;
    const auto b = perturb(d, cfg);
    CHECK(a.data == b.data);
    CHECK(a.permutation == b.permutation);
    CHECK(a.report.grid.Phi == b.report.grid.Phi);

    cfg.seed = 43;
    const auto c = perturb(d, cfg);
    CHECK(c.data != a.data);
    CHECK(c.report.grid.Phi == a.report.grid.Phi);
}

TEST_CASE("perturb reports shape, sigma and seed")
{
    const DataMatrix d = sample_table(9, 120, 4);
    PerturbationConfig cfg;
    cfg.seed = 3;
    cfg.sigma = 0.5;
    const auto out = perturb(d, cfg);
    CHECK(out.data.rows() == 120);
    CHECK(out.data.cols() == 4);
    CHECK(out.report.row_count == 120);
    CHECK(out.report.column_count == 4);
    CHECK(out.report.sigma == 0.5);
    CHECK(out.report.seed == 3);
    CHECK(out.report.wall_time_seconds > 0.0);
    CHECK(out.report.grid.phi.rows() == 172);
}

TEST_CASE("without noise the released difference variance equals the reported optimum")
{
    for (std::uint64_t seed : {10u, 11u, 12u}) {
        const DataMatrix d = sample_table(seed, 400, 3 + seed % 4);
        PerturbationConfig cfg;
        cfg.seed = seed;
        cfg.sigma = 0.0;
        const auto out = perturb(d, cfg);
        const DataMatrix aligned = unshuffle_rows(out.data, out.permutation);

        const auto stats = column_stats(d);
        const DataMatrix diff = zscore(d, stats) - zscore(aligned, stats);
        double smallest = 1e300;
        for (Eigen::Index c = 0; c < diff.cols(); ++c) {
            smallest = std::min(smallest, oracle::sample_variance(oracle::column(diff, c)));
        }
        CHECK(std::abs(smallest - out.report.grid.Phi) < 1e-6);
    }
}

TEST_CASE("with both hooks off the z-space map is an isometry")
{
    const DataMatrix d = sample_table(13, 60, 4);
    PerturbationConfig cfg;
    cfg.seed = 1;
    const auto out = perturb(d, cfg, PipelineHooks{false, false});
    std::vector<std::size_t> iota(60);
    std::iota(iota.begin(), iota.end(), std::size_t{0});
    CHECK(out.permutation == iota);

    const auto stats = column_stats(d);
    const DataMatrix zo = zscore(d, stats);
    const DataMatrix zp = zscore(out.data, stats);
    double worst = 0.0;
    for (Eigen::Index a = 0; a < zo.rows(); ++a) {
        for (Eigen::Index b = a + 1; b < zo.rows(); ++b) {
            worst = std::max(worst, std::abs(oracle::row_distance(zo, a, b) -
                                             oracle::row_distance(zp, a, b)));
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("search only matches the perturbation grid")
{
    const DataMatrix d = sample_table(14);
    PerturbationConfig cfg;
    cfg.seed = 9;
    const auto report = search_parameters(d, cfg);
    const auto out = perturb(d, cfg);
    CHECK(report.grid.phi == out.report.grid.phi);
    CHECK(report.grid.theta_optimal == out.report.grid.theta_optimal);
    CHECK(report.grid.rif_optimal == out.report.grid.rif_optimal);
}

TEST_CASE("perturb input errors")
{
    PerturbationConfig cfg;
    auto kind_of = [&](const DataMatrix& d) {
        try {
            perturb(d, cfg);
        } catch (const Error& e) {
            return e.kind();
        }
        FAIL("expected an error");
        return ErrorKind::io;
    };
    CHECK(kind_of(DataMatrix::Ones(1, 3)) == ErrorKind::empty_data);
    CHECK(kind_of(sample_table(15, 10, 1)) == ErrorKind::dimension);
    DataMatrix constant = sample_table(16, 10, 3);
    constant.col(2).setConstant(4.0);
    CHECK(kind_of(constant) == ErrorKind::constant_column);
    cfg.sigma = -1.0;
    CHECK(kind_of(sample_table(17, 10, 3)) == ErrorKind::parameter);

    CHECK_THROWS_AS(unshuffle_rows(DataMatrix::Ones(3, 2), {0, 1}), Error);
}
