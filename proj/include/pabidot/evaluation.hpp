#pragma once

#include "pabidot/random.hpp"
#include "pabidot/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace pabidot {

/// Per-attribute std(original_j - estimate_j) in z-score units, plus min and mean.
struct ResistanceResult {
    Vector per_column_std;
    double min = 0.0;
    double avg = 0.0;

    static ResistanceResult from_columns(Vector per_column_std);
};

struct BiasResult {
    std::size_t similar_record_count = 0;
    double percentage = 0.0; // similar_record_count / m, in [0, 1]
};

/// Both matrices are z-scored with their own statistics before differencing.
/// Rows must be aligned (same record in the same row).
ResistanceResult naive_inference_resistance(const DataMatrix& original, const DataMatrix& perturbed);

/// Linear reconstruction adversary: knows ceil(known_fraction * m) aligned row pairs, fits
/// original ~ [perturbed 1] * B by least squares, and reconstructs every row. The score is the
/// std of z(original) - z(reconstruction), both normalized with the original's statistics.
ResistanceResult known_io_attack(const DataMatrix& original, const DataMatrix& perturbed,
                                 double known_fraction, Rng& rng);

/// Shannon entropy in bits of `values` binned into `bins` equal-width bins over [lo, hi].
double shannon_entropy(std::span<const double> values, double lo, double hi, std::size_t bins);

/// Mean over attributes of H(perturbed_j) - H(original_j), both binned over the union range.
double entropy_increase(const DataMatrix& original, const DataMatrix& perturbed,
                        std::size_t bins = 100);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Asymptotic two-sample critical value c(alpha) * sqrt((na + nb) / (na * nb)),
/// c(alpha) = sqrt(-ln(alpha / 2) / 2).
double ks_critical_value(double alpha, std::size_t na, std::size_t nb);

/// Record-wise test: a record is similar when the KS statistic between its original and
/// perturbed values is below the critical value.
BiasResult ks_record_bias(const DataMatrix& original, const DataMatrix& perturbed,
                          double alpha = 0.05);

/// Attribute-wise test: same statistic applied column by column.
struct AttributeBias {
    Vector statistics;
    std::vector<bool> rejected;
    double critical_value = 0.0;
};

AttributeBias ks_attribute_bias(const DataMatrix& original, const DataMatrix& perturbed,
                                double alpha = 0.05);

/// k-fold cross-validated k-NN accuracy (Euclidean on z-scored features, unstratified folds).
double knn_utility(const DataMatrix& data, std::span<const int> labels, std::size_t k,
                   std::size_t folds, Rng& rng, std::size_t threads = 0);

} // namespace pabidot
