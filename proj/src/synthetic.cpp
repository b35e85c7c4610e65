#include "pabidot/synthetic.hpp"

#include "pabidot/error.hpp"
#include "pabidot/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

namespace pabidot {

namespace {

Eigen::MatrixXd random_mixing(std::size_t n, Rng& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto size = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd mix(size, size);
    for (Eigen::Index r = 0; r < size; ++r) {
        for (Eigen::Index c = 0; c < size; ++c) {
            mix(r, c) = (r == c ? 1.0 : 0.0) + 0.4 * normal(rng);
        }
    }
    return mix;
}

DataMatrix standard_normals(std::size_t m, std::size_t n, Rng& rng)
{
    std::normal_distribution<double> normal(0.0, 1.0);
    DataMatrix z(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    for (Eigen::Index c = 0; c < z.cols(); ++c) {
        for (Eigen::Index r = 0; r < z.rows(); ++r) {
            z(r, c) = normal(rng);
        }
    }
    return z;
}

} // namespace

DataMatrix make_gaussian_table(std::size_t m, std::size_t n, Rng& rng)
{
    const Eigen::MatrixXd mix = random_mixing(n, rng);
    DataMatrix data = standard_normals(m, n, rng) * mix;
    std::uniform_real_distribution<double> scale(0.5, 50.0);
    std::uniform_real_distribution<double> shift(-100.0, 100.0);
    for (Eigen::Index c = 0; c < data.cols(); ++c) {
        data.col(c) = data.col(c) * scale(rng) + Eigen::VectorXd::Constant(data.rows(), shift(rng));
    }
    return data;
}

LabelledTable make_two_class_table(std::size_t m, std::size_t n, double separation, Rng& rng)
{
    Eigen::MatrixXd mix = random_mixing(n, rng);
    // Unit variance per attribute after mixing.
    for (Eigen::Index c = 0; c < mix.cols(); ++c) {
        mix.col(c) /= mix.col(c).norm();
    }
    LabelledTable table;
    table.data = standard_normals(m, n, rng) * mix;
    table.labels.resize(m);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t r = 0; r < m; ++r) {
        const int label = coin(rng) ? 1 : 0;
        table.labels[r] = label;
        const double offset = label == 1 ? separation / 2.0 : -separation / 2.0;
        table.data.row(static_cast<Eigen::Index>(r)).array() += offset;
    }
    return table;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorKind::parameter, "line fit needs at least two paired points");
    }
    const auto count = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / count;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / count;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) {
        throw Error(ErrorKind::parameter, "line fit needs distinct x values");
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

std::vector<BenchRow> run_scaling_bench(std::span<const std::size_t> row_counts, std::size_t cols,
                                        std::uint64_t seed, double sigma, std::size_t threads)
{
    std::vector<BenchRow> rows;
    for (std::size_t m : row_counts) {
        Rng rng = derive_stream(seed ^ m, Stream::synthetic);
        const DataMatrix data = make_gaussian_table(m, cols, rng);

        PerturbationConfig config;
        config.sigma = sigma;
        config.seed = seed;
        config.threads = threads;
        const auto start = std::chrono::steady_clock::now();
        const PerturbationOutcome outcome = perturb(data, config);
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        rows.push_back({m, cols, elapsed.count(), outcome.report.search_time_seconds});
    }
    return rows;
}

} // namespace pabidot
