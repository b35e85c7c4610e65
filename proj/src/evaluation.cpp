#include "pabidot/evaluation.hpp"

#include "pabidot/error.hpp"
#include "pabidot/normalization.hpp"
#include "pabidot/privacy_search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <string>
#include <thread>

namespace pabidot {

namespace {

void require_same_shape(const DataMatrix& a, const DataMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorKind::shape, "original is " + std::to_string(a.rows()) + "x" +
                                          std::to_string(a.cols()) + " but perturbed is " +
                                          std::to_string(b.rows()) + "x" +
                                          std::to_string(b.cols()));
    }
}

Vector column_std(const DataMatrix& data)
{
    return column_variances(data).cwiseSqrt();
}

std::vector<double> row_values(const DataMatrix& data, Eigen::Index r)
{
    std::vector<double> out(static_cast<std::size_t>(data.cols()));
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
        out[static_cast<std::size_t>(c)] = data(r, c);
    }
    return out;
}

std::vector<double> col_values(const DataMatrix& data, Eigen::Index c)
{
    return {data.col(c).data(), data.col(c).data() + data.rows()};
}

void require_alpha(double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorKind::parameter, "significance level must lie in (0, 1)");
    }
}

// z-scoring that tolerates constant columns (they become all-zero features).
DataMatrix standardize_features(const DataMatrix& data)
{
    const Vector means = data.colwise().mean().transpose();
    DataMatrix out = data.rowwise() - means.transpose();
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
        const double sd = std::sqrt(out.col(c).squaredNorm() / static_cast<double>(out.rows() - 1));
        if (sd > 0.0) {
            out.col(c) /= sd;
        }
    }
    return out;
}

template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn)
{
    threads = std::min(threads == 0 ? default_thread_count() : threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                fn(i);
            }
        });
    }
}

} // namespace

ResistanceResult ResistanceResult::from_columns(Vector per_column_std)
{
    ResistanceResult result;
    result.min = per_column_std.size() > 0 ? per_column_std.minCoeff() : 0.0;
    result.avg = per_column_std.size() > 0 ? per_column_std.mean() : 0.0;
    result.per_column_std = std::move(per_column_std);
    return result;
}

ResistanceResult naive_inference_resistance(const DataMatrix& original, const DataMatrix& perturbed)
{
    require_same_shape(original, perturbed);
    const DataMatrix a = zscore(original, column_stats(original));
    const DataMatrix b = zscore(perturbed, column_stats(perturbed));
    return ResistanceResult::from_columns(column_std(a - b));
}

ResistanceResult known_io_attack(const DataMatrix& original, const DataMatrix& perturbed,
                                 double known_fraction, Rng& rng)
{
    require_same_shape(original, perturbed);
    if (!(known_fraction > 0.0 && known_fraction <= 1.0)) {
        throw Error(ErrorKind::parameter, "known fraction must lie in (0, 1]");
    }
    const auto m = static_cast<std::size_t>(original.rows());
    const auto n = static_cast<std::size_t>(original.cols());
    const auto known =
        static_cast<std::size_t>(std::ceil(known_fraction * static_cast<double>(m)));
    if (known < n + 1) {
        throw Error(ErrorKind::attack_setup,
                    "known-I/O attack needs at least " + std::to_string(n + 1) +
                        " known rows for an affine fit, got " + std::to_string(known));
    }

    // Partial Fisher-Yates: the first `known` slots are a uniform sample without replacement.
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = 0; i < known && i + 1 < m; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, m - 1);
        std::swap(order[i], order[pick(rng)]);
    }

    const auto width = static_cast<Eigen::Index>(n + 1);
    Eigen::MatrixXd design(static_cast<Eigen::Index>(known), width);
    Eigen::MatrixXd target(static_cast<Eigen::Index>(known), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < known; ++r) {
        const auto src = static_cast<Eigen::Index>(order[r]);
        const auto dst = static_cast<Eigen::Index>(r);
        design.row(dst).head(static_cast<Eigen::Index>(n)) = perturbed.row(src);
        design(dst, static_cast<Eigen::Index>(n)) = 1.0;
        target.row(dst) = original.row(src);
    }
    const Eigen::MatrixXd coefficients = design.completeOrthogonalDecomposition().solve(target);

    Eigen::MatrixXd full(original.rows(), width);
    full.leftCols(static_cast<Eigen::Index>(n)) = perturbed;
    full.col(static_cast<Eigen::Index>(n)).setOnes();
    const DataMatrix reconstruction = full * coefficients;

    const ColumnStats stats = column_stats(original);
    return ResistanceResult::from_columns(
        column_std(zscore(original, stats) - zscore(reconstruction, stats)));
}

double shannon_entropy(std::span<const double> values, double lo, double hi, std::size_t bins)
{
    if (bins < 2) {
        throw Error(ErrorKind::parameter, "entropy needs at least 2 bins");
    }
    if (values.empty() || !(hi > lo)) {
        return 0.0;
    }
    std::vector<std::size_t> counts(bins, 0);
    const double width = hi - lo;
    for (double v : values) {
        auto b = static_cast<std::size_t>((v - lo) / width * static_cast<double>(bins));
        counts[std::min(b, bins - 1)] += 1;
    }
    double h = 0.0;
    const auto total = static_cast<double>(values.size());
    for (auto c : counts) {
        if (c > 0) {
            const double p = static_cast<double>(c) / total;
            h -= p * std::log2(p);
        }
    }
    return h;
}

double entropy_increase(const DataMatrix& original, const DataMatrix& perturbed, std::size_t bins)
{
    if (original.cols() != perturbed.cols()) {
        throw Error(ErrorKind::shape, "entropy comparison needs matching attribute counts");
    }
    if (bins < 2) {
        throw Error(ErrorKind::parameter, "entropy needs at least 2 bins");
    }
    if (original.cols() == 0) {
        return 0.0;
    }
    double total_gain = 0.0;
    for (Eigen::Index c = 0; c < original.cols(); ++c) {
        const double lo = std::min(original.col(c).minCoeff(), perturbed.col(c).minCoeff());
        const double hi = std::max(original.col(c).maxCoeff(), perturbed.col(c).maxCoeff());
        if (!(hi > lo)) {
            continue;
        }
        const auto before = col_values(original, c);
        const auto after = col_values(perturbed, c);
        total_gain += shannon_entropy(after, lo, hi, bins) - shannon_entropy(before, lo, hi, bins);
    }
    return total_gain / static_cast<double>(original.cols());
}

double ks_statistic(std::span<const double> a, std::span<const double> b)
{
    if (a.empty() || b.empty()) {
        throw Error(ErrorKind::empty_data, "KS statistic needs two non-empty samples");
    }
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());

    const auto nx = static_cast<double>(x.size());
    const auto ny = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double sup = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) {
            ++i;
        }
        while (j < y.size() && y[j] == v) {
            ++j;
        }
        sup = std::max(sup, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return sup;
}

double ks_critical_value(double alpha, std::size_t na, std::size_t nb)
{
    require_alpha(alpha);
    if (na == 0 || nb == 0) {
        throw Error(ErrorKind::empty_data, "KS critical value needs non-empty samples");
    }
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    const auto a = static_cast<double>(na);
    const auto b = static_cast<double>(nb);
    return c * std::sqrt((a + b) / (a * b));
}

BiasResult ks_record_bias(const DataMatrix& original, const DataMatrix& perturbed, double alpha)
{
    require_same_shape(original, perturbed);
    require_alpha(alpha);
    if (original.cols() < 2) {
        throw Error(ErrorKind::dimension, "record-wise KS test needs at least 2 attributes");
    }
    const auto n = static_cast<std::size_t>(original.cols());
    const double critical = ks_critical_value(alpha, n, n);

    BiasResult result;
    for (Eigen::Index r = 0; r < original.rows(); ++r) {
        if (ks_statistic(row_values(original, r), row_values(perturbed, r)) < critical) {
            ++result.similar_record_count;
        }
    }
    result.percentage = original.rows() > 0 ? static_cast<double>(result.similar_record_count) /
                                                  static_cast<double>(original.rows())
                                            : 0.0;
    return result;
}

AttributeBias ks_attribute_bias(const DataMatrix& original, const DataMatrix& perturbed,
                                double alpha)
{
    if (original.cols() != perturbed.cols()) {
        throw Error(ErrorKind::shape, "attribute-wise KS test needs matching attribute counts");
    }
    require_alpha(alpha);
    AttributeBias result;
    result.critical_value = ks_critical_value(alpha, static_cast<std::size_t>(original.rows()),
                                              static_cast<std::size_t>(perturbed.rows()));
    result.statistics.resize(original.cols());
    for (Eigen::Index c = 0; c < original.cols(); ++c) {
        result.statistics[c] = ks_statistic(col_values(original, c), col_values(perturbed, c));
        result.rejected.push_back(result.statistics[c] >= result.critical_value);
    }
    return result;
}

double knn_utility(const DataMatrix& data, std::span<const int> labels, std::size_t k,
                   std::size_t folds, Rng& rng, std::size_t threads)
{
    const auto m = static_cast<std::size_t>(data.rows());
    if (labels.size() != m) {
        throw Error(ErrorKind::shape, "label count does not match row count");
    }
    if (folds < 2 || folds > m) {
        throw Error(ErrorKind::parameter, "fold count must lie in 2..m");
    }
    if (k < 1) {
        throw Error(ErrorKind::parameter, "k must be at least 1");
    }
    // Smallest training split comes from the largest test fold.
    const std::size_t largest_fold = (m + folds - 1) / folds;
    if (k >= m - largest_fold) {
        throw Error(ErrorKind::parameter, "k = " + std::to_string(k) +
                                              " is not smaller than the training fold size " +
                                              std::to_string(m - largest_fold));
    }

    const DataMatrix features = standardize_features(data);
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = features;

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = m; i > 1; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(order[i - 1], order[pick(rng)]);
    }

    std::vector<std::size_t> fold_of(m);
    for (std::size_t pos = 0; pos < m; ++pos) {
        fold_of[order[pos]] = pos * folds / m;
    }

    std::vector<char> correct(m, 0);
    parallel_for(m, threads, [&](std::size_t query) {
        const std::size_t fold = fold_of[query];
        std::vector<std::pair<double, std::size_t>> dist;
        dist.reserve(m);
        for (std::size_t other = 0; other < m; ++other) {
            if (fold_of[other] == fold) {
                continue;
            }
            const double d = (rows.row(static_cast<Eigen::Index>(query)) -
                              rows.row(static_cast<Eigen::Index>(other)))
                                 .squaredNorm();
            dist.emplace_back(d, other);
        }
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

        // Majority vote; ties go to the class whose member ranked nearest.
        std::map<int, std::pair<std::size_t, std::size_t>> votes; // label -> (count, best rank)
        for (std::size_t rank = 0; rank < k; ++rank) {
            auto [it, inserted] = votes.try_emplace(labels[dist[rank].second], 0, rank);
            it->second.first += 1;
        }
        int predicted = votes.begin()->first;
        std::pair<std::size_t, std::size_t> best{0, k};
        for (const auto& [label, tally] : votes) {
            if (tally.first > best.first ||
                (tally.first == best.first && tally.second < best.second)) {
                best = tally;
                predicted = label;
            }
        }
        correct[query] = predicted == labels[query] ? 1 : 0;
    });

    std::vector<double> hits(folds, 0.0);
    std::vector<double> sizes(folds, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        hits[fold_of[i]] += correct[i];
        sizes[fold_of[i]] += 1.0;
    }
    double accuracy = 0.0;
    for (std::size_t f = 0; f < folds; ++f) {
        accuracy += hits[f] / sizes[f];
    }
    return accuracy / static_cast<double>(folds);
}

} // namespace pabidot
