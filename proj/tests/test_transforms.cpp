#include "oracles.hpp"

#include "pabidot/error.hpp"
#include "pabidot/transforms.hpp"

#include <doctest.h>

using namespace pabidot;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("rotation planes are lexicographic and complete")
{
    const auto planes = rotation_planes(4);
    const std::vector<RotationPlanePair> expected{{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}};
    CHECK(planes == expected);
    for (std::size_t n = 2; n <= 12; ++n) {
        CHECK(rotation_planes(n).size() == n * (n - 1) / 2);
    }
}

TEST_CASE("rotation at zero degrees is the identity")
{
    const auto m = make_rotation_matrix(2, Degrees(0));
    CHECK(max_abs(m.entries() - Eigen::MatrixXd::Identity(3, 3)) == 0.0);
}

TEST_CASE("quarter turn in two dimensions")
{
    const auto m = make_rotation_matrix(2, Degrees(90));
    Eigen::MatrixXd expected(3, 3);
    expected << 0, -1, 0, 1, 0, 0, 0, 0, 1;
    CHECK(max_abs(m.entries() - expected) < 1e-15);
}

TEST_CASE("three-dimensional rotation matches explicit Givens product")
{
    const auto m = make_rotation_matrix(3, Degrees(40));
    const Eigen::MatrixXd expected = oracle::givens_factor(3, 1, 2, 40) *
                                     oracle::givens_factor(3, 1, 3, 40) *
                                     oracle::givens_factor(3, 2, 3, 40);
    CHECK(max_abs(m.entries() - expected) < 1e-14);
}

TEST_CASE("rotation matches the dense oracle product for larger n")
{
    for (std::size_t n : {5u, 9u, 14u}) {
        for (double deg : {1.0, 37.0, 113.0, 179.0}) {
            const auto m = make_rotation_matrix(n, Degrees(deg));
            CHECK(max_abs(m.entries() - oracle::concatenated_rotation(n, deg)) < 1e-12);
        }
    }
}

TEST_CASE("rotation is orthogonal with unit determinant")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> angle(-360.0, 360.0);
    for (std::size_t n = 2; n <= 20; ++n) {
        for (int k = 0; k < 100; ++k) {
            const auto m = make_rotation_matrix(n, Degrees(angle(rng))).entries();
            const auto size = static_cast<Eigen::Index>(n + 1);
            CHECK(max_abs(m * m.transpose() - Eigen::MatrixXd::Identity(size, size)) < 1e-9);
            CHECK(std::abs(m.determinant() - 1.0) < 1e-9);
            CHECK(m.row(size - 1).head(size - 1).isZero(0.0));
            CHECK(m(size - 1, size - 1) == 1.0);
        }
    }
}

TEST_CASE("dimension below two is rejected")
{
    CHECK_THROWS_AS(make_rotation_matrix(1, Degrees(10)), Error);
    try {
        make_rotation_matrix(1, Degrees(10));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::dimension);
    }
}

TEST_CASE("reflection negates exactly one axis")
{
    Eigen::MatrixXd expected = Eigen::MatrixXd::Identity(4, 4);
    expected(0, 0) = -1;
    CHECK(make_reflection_matrix(3, Axis(1)).entries() == expected);

    Eigen::MatrixXd expected2 = Eigen::MatrixXd::Identity(3, 3);
    expected2(1, 1) = -1;
    CHECK(make_reflection_matrix(2, Axis(2)).entries() == expected2);
}

TEST_CASE("reflection is an involution")
{
    for (std::size_t n = 2; n <= 8; ++n) {
        for (std::size_t ax = 1; ax <= n; ++ax) {
            const auto rf = make_reflection_matrix(n, Axis(ax));
            const auto twice = rf * rf;
            const auto size = static_cast<Eigen::Index>(n + 1);
            CHECK(twice.entries() == Eigen::MatrixXd::Identity(size, size));
            Eigen::VectorXd p = Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(n), -2, 3);
            CHECK(rf.apply(rf.apply(p)) == p);
        }
    }
}

TEST_CASE("reflection axis out of range")
{
    for (std::size_t bad : {0u, 4u}) {
        try {
            make_reflection_matrix(3, Axis(bad));
            FAIL("expected axis error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::axis);
        }
    }
}

TEST_CASE("translation coefficients lie strictly inside (0, 1)")
{
    Rng rng(123);
    for (int k = 0; k < 200; ++k) {
        const auto t = make_translation_matrix(6, rng);
        const auto offset = t.offset();
        CHECK(offset.minCoeff() > 0.0);
        CHECK(offset.maxCoeff() < 1.0);
        CHECK(t.linear() == Eigen::MatrixXd::Identity(6, 6));
    }
}

TEST_CASE("translation is deterministic under a seed and moves the origin to t")
{
    Rng a(99), b(99);
    const auto ta = make_translation_matrix(4, a);
    const auto tb = make_translation_matrix(4, b);
    CHECK(ta.entries() == tb.entries());

    Eigen::VectorXd origin = Eigen::VectorXd::Zero(5);
    origin(4) = 1.0;
    const Eigen::VectorXd moved = ta.entries() * origin;
    CHECK(moved.head(4) == ta.offset());
    CHECK(moved(4) == 1.0);
}

TEST_CASE("identity composite leaves data unchanged")
{
    std::mt19937_64 rng(3);
    const DataMatrix data = oracle::random_matrix(20, 3, rng);
    const HomogeneousMatrix id(3);
    CHECK(apply_composite(id, id, id, data) == data);
}

TEST_CASE("hand-computed two-dimensional composite")
{
    DataMatrix row(1, 2);
    row << 1, 0;
    const DataMatrix out = apply_composite(make_rotation_matrix(2, Degrees(90)), HomogeneousMatrix(2),
                                           make_reflection_matrix(2, Axis(1)), row);
    CHECK(std::abs(out(0, 0)) < 1e-15);
    CHECK(std::abs(out(0, 1) + 1.0) < 1e-15);
}

TEST_CASE("composite preserves pairwise distances")
{
    std::mt19937_64 rng(11);
    Rng trng(12);
    std::uniform_real_distribution<double> angle(0.0, 180.0);
    for (std::size_t n : {2u, 3u, 7u, 15u}) {
        const DataMatrix data = oracle::random_matrix(40, n, rng);
        std::uniform_int_distribution<std::size_t> axis(1, n);
        const DataMatrix out =
            apply_composite(make_rotation_matrix(n, Degrees(angle(rng))),
                            make_translation_matrix(n, trng), make_reflection_matrix(n, Axis(axis(rng))),
                            data);
        double worst = 0.0;
        for (Eigen::Index a = 0; a < data.rows(); ++a) {
            for (Eigen::Index b = a + 1; b < data.rows(); ++b) {
                worst = std::max(worst, std::abs(oracle::row_distance(data, a, b) -
                                                 oracle::row_distance(out, a, b)));
            }
        }
        CHECK(worst < 1e-9);
    }
}

TEST_CASE("composite equals sequential application")
{
    std::mt19937_64 rng(5);
    Rng trng(6);
    const std::size_t n = 6;
    const DataMatrix data = oracle::random_matrix(50, n, rng);
    const auto m = make_rotation_matrix(n, Degrees(71));
    const auto t = make_translation_matrix(n, trng);
    const auto rf = make_reflection_matrix(n, Axis(4));

    const DataMatrix composite = apply_composite(m, t, rf, data);
    const DataMatrix sequential = oracle::apply_rowwise(
        m.entries(), oracle::apply_rowwise(t.entries(), oracle::apply_rowwise(rf.entries(), data)));
    CHECK(max_abs(composite - sequential) < 1e-12);
}

TEST_CASE("composite rejects a width mismatch")
{
    const DataMatrix data = DataMatrix::Zero(4, 3);
    const HomogeneousMatrix id(2);
    try {
        apply_composite(id, id, id, data);
        FAIL("expected shape error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::shape);
    }
}

TEST_CASE("homogeneous matrix rejects a bad last row")
{
    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
    bad(2, 0) = 0.5;
    CHECK_THROWS_AS(HomogeneousMatrix{bad}, Error);
}
