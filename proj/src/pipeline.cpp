#include "pabidot/pipeline.hpp"

#include "pabidot/error.hpp"
#include "pabidot/normalization.hpp"
#include "pabidot/transforms.hpp"

#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

namespace pabidot {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    const std::chrono::duration<double> elapsed = Clock::now() - start;
    return std::max(elapsed.count(), 1e-9);
}

void require_shape(const DataMatrix& data)
{
    if (data.rows() < 2) {
        throw Error(ErrorKind::empty_data, "perturbation needs at least 2 records, got " +
                                               std::to_string(data.rows()));
    }
    if (data.cols() < 2) {
        throw Error(ErrorKind::dimension, "perturbation needs at least 2 numeric attributes, got " +
                                              std::to_string(data.cols()));
    }
}

} // namespace

bool ReportMetrics::empty() const noexcept
{
    return !ni_min && !ni_avg && !io_min && !io_avg && !known_fraction && !entropy_gain &&
           !ks_similar_percentage && !knn_accuracy_original && !knn_accuracy_perturbed &&
           !alignment;
}

DataMatrix randomized_expansion(const DataMatrix& data, double sigma, Rng& rng)
{
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
        throw Error(ErrorKind::parameter, "noise standard deviation must be finite and >= 0");
    }
    DataMatrix out = data;
    if (sigma == 0.0) {
        return out;
    }
    std::normal_distribution<double> noise(0.0, sigma);
    double* values = out.data();
    const Eigen::Index count = out.size();
    for (Eigen::Index k = 0; k < count; ++k) {
        // One draw per entry, zeros included.
        const double magnitude = std::abs(noise(rng));
        const double x = values[k];
        if (x > 0.0) {
            values[k] = x + magnitude;
        } else if (x < 0.0) {
            values[k] = x - magnitude;
        }
    }
    return out;
}

DataMatrix shuffle_rows(const DataMatrix& data, Rng& rng, std::vector<std::size_t>* permutation)
{
    const auto m = static_cast<std::size_t>(data.rows());
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = m; i > 1; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(order[i - 1], order[pick(rng)]);
    }

    DataMatrix out(data.rows(), data.cols());
    for (std::size_t i = 0; i < m; ++i) {
        out.row(static_cast<Eigen::Index>(i)) = data.row(static_cast<Eigen::Index>(order[i]));
    }
    if (permutation != nullptr) {
        *permutation = std::move(order);
    }
    return out;
}

DataMatrix unshuffle_rows(const DataMatrix& data, const std::vector<std::size_t>& permutation)
{
    if (permutation.size() != static_cast<std::size_t>(data.rows())) {
        throw Error(ErrorKind::shape, "permutation length does not match row count");
    }
    DataMatrix out(data.rows(), data.cols());
    for (std::size_t i = 0; i < permutation.size(); ++i) {
        if (permutation[i] >= permutation.size()) {
            throw Error(ErrorKind::input, "permutation entry out of range");
        }
        out.row(static_cast<Eigen::Index>(permutation[i])) = data.row(static_cast<Eigen::Index>(i));
    }
    return out;
}

PerturbationReport search_parameters(const DataMatrix& data, const PerturbationConfig& config)
{
    const auto start = Clock::now();
    require_shape(data);
    const ColumnStats stats = column_stats(data);
    const Eigen::MatrixXd cov = sample_covariance(zscore(data, stats));

    PerturbationReport report;
    report.grid = search_optimal(cov, AngleSet::standard(), config.threads);
    report.sigma = config.sigma;
    report.seed = config.seed;
    report.class_column = config.class_column;
    report.row_count = static_cast<std::size_t>(data.rows());
    report.column_count = static_cast<std::size_t>(data.cols());
    report.search_time_seconds = seconds_since(start);
    report.wall_time_seconds = report.search_time_seconds;
    return report;
}

PerturbationOutcome perturb(const DataMatrix& data, const PerturbationConfig& config,
                            const PipelineHooks& hooks)
{
    const auto start = Clock::now();
    require_shape(data);
    if (!(config.sigma >= 0.0) || !std::isfinite(config.sigma)) {
        throw Error(ErrorKind::parameter, "noise standard deviation must be finite and >= 0");
    }
    const auto n = static_cast<std::size_t>(data.cols());

    const ColumnStats stats = column_stats(data);
    const DataMatrix normalized = zscore(data, stats);
    const Eigen::MatrixXd cov = sample_covariance(normalized);

    Rng translation_rng = derive_stream(config.seed, Stream::translation);
    const HomogeneousMatrix translation = make_translation_matrix(n, translation_rng);

    const auto search_start = Clock::now();
    PrivacyGrid grid = search_optimal(cov, AngleSet::standard(), config.threads);
    const double search_seconds = seconds_since(search_start);

    const HomogeneousMatrix rotation = make_rotation_matrix(n, Degrees(grid.theta_optimal));
    const HomogeneousMatrix reflection = make_reflection_matrix(n, Axis(grid.rif_optimal));
    DataMatrix transformed = apply_composite(rotation, translation, reflection, normalized);

    if (hooks.expand) {
        Rng expansion_rng = derive_stream(config.seed, Stream::expansion);
        transformed = randomized_expansion(transformed, config.sigma, expansion_rng);
    }
    DataMatrix released = inverse_zscore(transformed, stats);

    PerturbationOutcome outcome;
    if (hooks.shuffle) {
        Rng shuffle_rng = derive_stream(config.seed, Stream::shuffle);
        outcome.data = shuffle_rows(released, shuffle_rng, &outcome.permutation);
    } else {
        outcome.permutation.resize(static_cast<std::size_t>(data.rows()));
        std::iota(outcome.permutation.begin(), outcome.permutation.end(), std::size_t{0});
        outcome.data = std::move(released);
    }

    PerturbationReport& report = outcome.report;
    report.grid = std::move(grid);
    report.sigma = config.sigma;
    report.seed = config.seed;
    report.class_column = config.class_column;
    report.row_count = static_cast<std::size_t>(data.rows());
    report.column_count = n;
    report.search_time_seconds = search_seconds;
    report.wall_time_seconds = seconds_since(start);
    return outcome;
}

} // namespace pabidot
