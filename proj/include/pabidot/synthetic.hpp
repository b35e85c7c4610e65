#pragma once

#include "pabidot/random.hpp"
#include "pabidot/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace pabidot {

/// m x n correlated Gaussian table: independent normals mixed by a random n x n matrix,
/// shifted and scaled per column so attributes carry different units.
DataMatrix make_gaussian_table(std::size_t m, std::size_t n, Rng& rng);

/// Labelled table for utility checks.
struct LabelledTable {
    DataMatrix data;
    std::vector<int> labels;
};

/// Two Gaussian classes in n dimensions whose centres differ by `separation` along every
/// axis, each with unit-variance correlated noise.
LabelledTable make_two_class_table(std::size_t m, std::size_t n, double separation, Rng& rng);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least-squares line through (x, y).
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

struct BenchRow {
    std::size_t rows = 0;
    std::size_t cols = 0;
    double seconds = 0.0;
    double search_seconds = 0.0;
};

/// Times a full perturbation of a fresh synthetic table for every row count.
std::vector<BenchRow> run_scaling_bench(std::span<const std::size_t> row_counts, std::size_t cols,
                                        std::uint64_t seed, double sigma = 0.3,
                                        std::size_t threads = 0);

} // namespace pabidot
