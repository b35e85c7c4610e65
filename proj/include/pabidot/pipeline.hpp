#pragma once

#include "pabidot/privacy_search.hpp"
#include "pabidot/random.hpp"
#include "pabidot/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pabidot {

struct PerturbationConfig {
    double sigma = 0.3; // expansion noise std, z-score units
    std::uint64_t seed = 0;
    std::optional<std::string> class_column;
    std::size_t threads = 0; // 0: default_thread_count()
};

/// Evaluation results attached to a report; absent entries were not computed.
struct ReportMetrics {
    std::optional<double> ni_min, ni_avg;
    std::optional<double> io_min, io_avg;
    std::optional<double> known_fraction;
    std::optional<double> entropy_gain;
    std::optional<double> ks_similar_percentage;
    std::optional<double> knn_accuracy_original, knn_accuracy_perturbed;
    std::optional<std::string> alignment; // how original/perturbed rows were paired

    bool empty() const noexcept;
    friend bool operator==(const ReportMetrics&, const ReportMetrics&) = default;
};

struct PerturbationReport {
    PrivacyGrid grid;
    double sigma = 0.3;
    std::uint64_t seed = 0;
    std::optional<std::string> class_column;
    std::size_t row_count = 0;
    std::size_t column_count = 0;
    double wall_time_seconds = 0.0;
    double search_time_seconds = 0.0;
    ReportMetrics metrics;
};

/// x -> sign(x) * (|x| + |g|), g ~ N(0, sigma) per entry; zeros stay zero.
DataMatrix randomized_expansion(const DataMatrix& data, double sigma, Rng& rng);

/// Fisher-Yates row permutation. `permutation[i]` receives the input row placed at output row i.
DataMatrix shuffle_rows(const DataMatrix& data, Rng& rng,
                        std::vector<std::size_t>* permutation = nullptr);

/// Stage switches for oracle checks. The CLI always runs with both enabled.
struct PipelineHooks {
    bool expand = true;
    bool shuffle = true;
};

struct PerturbationOutcome {
    DataMatrix data;                      // released matrix, same shape as the input
    std::vector<std::size_t> permutation; // output row i came from input row permutation[i]
    PerturbationReport report;
};

/// Full perturbation of a numeric matrix (class column already removed by the caller).
PerturbationOutcome perturb(const DataMatrix& data, const PerturbationConfig& config,
                            const PipelineHooks& hooks = {});

/// Search only: z-score, covariance, grid. Never touches the records beyond statistics.
PerturbationReport search_parameters(const DataMatrix& data, const PerturbationConfig& config);

/// Reorders `values` so that entry i is values[permutation[i]].
template <class T>
std::vector<T> apply_permutation(const std::vector<T>& values,
                                 const std::vector<std::size_t>& permutation)
{
    std::vector<T> out;
    out.reserve(permutation.size());
    for (auto src : permutation) {
        out.push_back(values.at(src));
    }
    return out;
}

/// Undoes a row shuffle: output row permutation[i] = input row i.
DataMatrix unshuffle_rows(const DataMatrix& data, const std::vector<std::size_t>& permutation);

} // namespace pabidot
