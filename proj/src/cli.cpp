#include "pabidot/cli.hpp"

#include "pabidot/evaluation.hpp"
#include "pabidot/io.hpp"
#include "pabidot/pipeline.hpp"
#include "pabidot/synthetic.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

namespace pabidot {

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
    std::string class_column;
    bool no_header = false;
    std::string on_missing = "error";
    std::size_t threads = 0;
};

CsvOptions csv_options(const CommonOptions& common)
{
    CsvOptions options;
    options.has_header = !common.no_header;
    if (!common.class_column.empty()) {
        options.class_column = common.class_column;
    }
    options.on_missing = common.on_missing == "drop" ? OnMissing::drop_row : OnMissing::error;
    return options;
}

void add_common(CLI::App& cmd, CommonOptions& common)
{
    cmd.add_option("--class-column", common.class_column,
                   "Column passed through unperturbed (name, or 0-based index without header)");
    cmd.add_flag("--no-header", common.no_header, "Input files have no header row");
    cmd.add_option("--on-missing", common.on_missing, "Missing or non-numeric cells: error|drop")
        ->check(CLI::IsMember({"error", "drop"}));
    cmd.add_option("--threads", common.threads, "Worker threads (0: PABIDOT_THREADS or all cores)");
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag)
{
    if (flag) {
        return *flag;
    }
    if (const char* env = std::getenv("PABIDOT_SEED")) {
        std::string_view text(env);
        std::uint64_t value = 0;
        const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size()) {
            throw Error(ErrorKind::parameter, "PABIDOT_SEED is not an unsigned integer");
        }
        return value;
    }
    std::random_device device;
    return (static_cast<std::uint64_t>(device()) << 32) | device();
}

Dataset load_input(const std::string& path, const CommonOptions& common, std::ostream& err)
{
    Dataset dataset = load_csv(path, csv_options(common));
    if (dataset.dropped_rows > 0) {
        err << "pabidot: warning: dropped " << dataset.dropped_rows
            << " rows with missing or non-numeric cells from '" << path << "'\n";
    }
    return dataset;
}

void print_selection(const PrivacyGrid& grid, std::ostream& out)
{
    out << "theta_optimal=" << grid.theta_optimal << " rif_optimal=" << grid.rif_optimal
        << " Phi=" << std::setprecision(6) << grid.Phi << '\n';
}

void write_permutation(const fs::path& path, const std::vector<std::size_t>& permutation)
{
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
    }
    out << "output_row,input_row\n";
    for (std::size_t i = 0; i < permutation.size(); ++i) {
        out << i << ',' << permutation[i] << '\n';
    }
}

std::vector<std::size_t> read_permutation(const fs::path& path)
{
    CsvOptions options;
    const Dataset table = load_csv(path, options);
    if (table.matrix.cols() != 2) {
        throw Error(ErrorKind::parse, "permutation file must have two columns");
    }
    std::vector<std::size_t> permutation(static_cast<std::size_t>(table.matrix.rows()));
    for (Eigen::Index r = 0; r < table.matrix.rows(); ++r) {
        const double out_row = table.matrix(r, 0);
        const double in_row = table.matrix(r, 1);
        if (out_row != static_cast<double>(r) || in_row < 0 ||
            in_row >= static_cast<double>(permutation.size()) || in_row != std::floor(in_row)) {
            throw Error(ErrorKind::parse, "bad permutation entry at row " + std::to_string(r + 1));
        }
        permutation[static_cast<std::size_t>(r)] = static_cast<std::size_t>(in_row);
    }
    return permutation;
}

std::vector<std::string> split_list(const std::string& text)
{
    std::vector<std::string> items;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (!item.empty()) {
            items.push_back(item);
        }
    }
    return items;
}

void print_error(std::ostream& err, ExitCode code, std::string_view kind, std::string_view message)
{
    std::string escaped;
    for (char ch : message) {
        if (ch == '"' || ch == '\\') {
            escaped.push_back('\\');
        }
        escaped.push_back(ch == '\n' ? ' ' : ch);
    }
    err << "pabidot: error code=" << static_cast<int>(code) << " kind=" << kind << " message=\""
        << escaped << "\"\n";
}

} // namespace

ExitCode exit_code_for(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::dimension: return ExitCode::dimension;
    case ErrorKind::axis: return ExitCode::axis;
    case ErrorKind::shape: return ExitCode::shape;
    case ErrorKind::constant_column: return ExitCode::constant_column;
    case ErrorKind::empty_data: return ExitCode::empty_data;
    case ErrorKind::parameter: return ExitCode::parameter;
    case ErrorKind::input: return ExitCode::input;
    case ErrorKind::attack_setup: return ExitCode::attack_setup;
    case ErrorKind::file_not_found: return ExitCode::file_not_found;
    case ErrorKind::parse: return ExitCode::parse;
    case ErrorKind::io: return ExitCode::io;
    }
    return ExitCode::internal;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"PABIDOT: optimal geometric perturbation for numeric tabular data", "pabidot"};
    app.require_subcommand(1);

    // perturb
    CommonOptions perturb_common;
    std::string perturb_in, perturb_out, perturb_report, permutation_out;
    double sigma = 0.3;
    std::optional<std::uint64_t> perturb_seed;
    bool drop_constant = false;
    auto* perturb_cmd = app.add_subcommand("perturb", "Release a perturbed copy of a CSV table");
    perturb_cmd->add_option("input", perturb_in, "Input CSV")->required();
    perturb_cmd->add_option("output", perturb_out, "Output CSV")->required();
    perturb_cmd->add_option("--sigma", sigma, "Randomized expansion noise std (z-score units)");
    perturb_cmd->add_option("--seed", perturb_seed, "Root seed (default: PABIDOT_SEED or random)");
    perturb_cmd->add_option("--report", perturb_report, "Write the run report here");
    perturb_cmd->add_option("--permutation-out", permutation_out,
                            "Write the row shuffle (owner-side, for evaluation) here");
    perturb_cmd->add_flag("--drop-constant", drop_constant, "Drop constant columns with a warning");
    add_common(*perturb_cmd, perturb_common);

    // search
    CommonOptions search_common;
    std::string search_in, search_report;
    bool search_curve = false;
    bool search_drop_constant = false;
    auto* search_cmd = app.add_subcommand("search", "Find optimal parameters without releasing data");
    search_cmd->add_option("input", search_in, "Input CSV")->required();
    search_cmd->add_option("--report", search_report, "Write the grid report here");
    search_cmd->add_flag("--curve", search_curve, "Print the per-angle minimum guarantee curve");
    search_cmd->add_flag("--drop-constant", search_drop_constant, "Drop constant columns with a warning");
    add_common(*search_cmd, search_common);

    // evaluate
    CommonOptions eval_common;
    std::string eval_original, eval_perturbed, eval_report, eval_permutation;
    std::string attacks = "ni,io,ks,entropy";
    double known_fraction = 0.1;
    double alpha = 0.05;
    std::size_t bins = 100;
    std::size_t knn_k = 1;
    std::size_t knn_folds = 10;
    std::optional<std::uint64_t> eval_seed;
    auto* eval_cmd = app.add_subcommand("evaluate", "Score a release against its original");
    eval_cmd->add_option("original", eval_original, "Original CSV")->required();
    eval_cmd->add_option("perturbed", eval_perturbed, "Perturbed CSV")->required();
    eval_cmd->add_option("--attacks", attacks, "Comma list of ni,io,ks,entropy,knn");
    eval_cmd->add_option("--known-fraction", known_fraction, "Known-I/O adversary's share of rows");
    eval_cmd->add_option("--alpha", alpha, "KS significance level");
    eval_cmd->add_option("--bins", bins, "Entropy histogram bins");
    eval_cmd->add_option("--k", knn_k, "Neighbours for the k-NN utility check");
    eval_cmd->add_option("--folds", knn_folds, "Cross-validation folds for the k-NN check");
    eval_cmd->add_option("--seed", eval_seed, "Seed for attack sampling and folds");
    eval_cmd->add_option("--permutation", eval_permutation,
                         "Row shuffle written by `perturb --permutation-out`, to realign rows");
    eval_cmd->add_option("--report", eval_report,
                         "Report to update (an existing report gains a metrics section)");
    add_common(*eval_cmd, eval_common);

    // bench
    std::string bench_rows = "100000,200000,400000,800000";
    std::size_t bench_cols = 28;
    std::uint64_t bench_seed = 1;
    double bench_sigma = 0.3;
    std::size_t bench_threads = 0;
    auto* bench_cmd = app.add_subcommand("bench", "Synthetic scaling run with a timing table");
    bench_cmd->add_option("--rows", bench_rows, "Comma list of row counts");
    bench_cmd->add_option("--cols", bench_cols, "Attribute count");
    bench_cmd->add_option("--seed", bench_seed, "Seed");
    bench_cmd->add_option("--sigma", bench_sigma, "Noise std");
    bench_cmd->add_option("--threads", bench_threads, "Worker threads");

    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.emplace_back("pabidot");
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) {
        argv.push_back(a.data());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        print_error(err, ExitCode::usage, "usage", e.what());
        return static_cast<int>(ExitCode::usage);
    }

    try {
        if (*perturb_cmd) {
            Dataset dataset = load_input(perturb_in, perturb_common, err);
            if (drop_constant) {
                for (const auto& name : drop_constant_columns(dataset)) {
                    err << "pabidot: warning: dropped constant column '" << name << "'\n";
                }
            }
            PerturbationConfig config;
            config.sigma = sigma;
            config.seed = resolve_seed(perturb_seed);
            config.class_column = dataset.class_name;
            config.threads = perturb_common.threads;

            PerturbationOutcome outcome = perturb(dataset.matrix, config);
            Dataset released = dataset.permuted(outcome.permutation);
            released.matrix = outcome.data;
            write_csv(perturb_out, released);

            if (!permutation_out.empty()) {
                write_permutation(permutation_out, outcome.permutation);
            }
            if (!perturb_report.empty()) {
                RunManifest manifest{config, perturb_in, perturb_out, perturb_report};
                emit_report(outcome.report, perturb_report, manifest);
            }
            print_selection(outcome.report.grid, out);
            out << "seed=" << config.seed << " rows=" << outcome.report.row_count
                << " columns=" << outcome.report.column_count << '\n';
        } else if (*search_cmd) {
            Dataset dataset = load_input(search_in, search_common, err);
            if (search_drop_constant) {
                for (const auto& name : drop_constant_columns(dataset)) {
                    err << "pabidot: warning: dropped constant column '" << name << "'\n";
                }
            }
            PerturbationConfig config;
            config.class_column = dataset.class_name;
            config.threads = search_common.threads;
            const PerturbationReport report = search_parameters(dataset.matrix, config);
            if (!search_report.empty()) {
                RunManifest manifest{config, search_in, "", search_report};
                emit_report(report, search_report, manifest);
            }
            print_selection(report.grid, out);
            if (search_curve) {
                out << "theta,phi_min\n";
                for (std::size_t i = 0; i < report.grid.angles.size(); ++i) {
                    out << report.grid.angles[i] << ','
                        << format_double(report.grid.per_angle_min[static_cast<Eigen::Index>(i)])
                        << '\n';
                }
            }
        } else if (*eval_cmd) {
            const Dataset original = load_input(eval_original, eval_common, err);
            Dataset perturbed = load_input(eval_perturbed, eval_common, err);
            if (!eval_permutation.empty()) {
                const auto permutation = read_permutation(eval_permutation);
                perturbed.matrix = unshuffle_rows(perturbed.matrix, permutation);
                if (!perturbed.class_values.empty()) {
                    std::vector<std::string> aligned(perturbed.class_values.size());
                    for (std::size_t i = 0; i < permutation.size(); ++i) {
                        aligned.at(permutation[i]) = perturbed.class_values.at(i);
                    }
                    perturbed.class_values = std::move(aligned);
                }
            }
            if (original.matrix.rows() != perturbed.matrix.rows() ||
                original.matrix.cols() != perturbed.matrix.cols()) {
                throw Error(ErrorKind::shape,
                            "original is " + std::to_string(original.matrix.rows()) + "x" +
                                std::to_string(original.matrix.cols()) + " but perturbed is " +
                                std::to_string(perturbed.matrix.rows()) + "x" +
                                std::to_string(perturbed.matrix.cols()));
            }

            PerturbationReport report;
            std::optional<RunManifest> manifest;
            if (!eval_report.empty() && fs::exists(eval_report)) {
                report = read_report(eval_report);
                manifest = read_manifest(eval_report);
            } else {
                report.row_count = static_cast<std::size_t>(original.matrix.rows());
                report.column_count = static_cast<std::size_t>(original.matrix.cols());
                report.class_column = original.class_name;
            }
            const std::uint64_t seed = resolve_seed(eval_seed);
            ReportMetrics& metrics = report.metrics;
            metrics.alignment = eval_permutation.empty() ? "rows assumed aligned"
                                                         : "rows realigned with recorded permutation";
            for (const auto& attack : split_list(attacks)) {
                if (attack == "ni") {
                    const auto r = naive_inference_resistance(original.matrix, perturbed.matrix);
                    metrics.ni_min = r.min;
                    metrics.ni_avg = r.avg;
                    out << "NI_min=" << r.min << " NI_avg=" << r.avg << '\n';
                } else if (attack == "io") {
                    Rng rng = derive_stream(seed, Stream::attack);
                    const auto r =
                        known_io_attack(original.matrix, perturbed.matrix, known_fraction, rng);
                    metrics.io_min = r.min;
                    metrics.io_avg = r.avg;
                    metrics.known_fraction = known_fraction;
                    out << "IO_min=" << r.min << " IO_avg=" << r.avg << '\n';
                } else if (attack == "ks") {
                    const auto r = ks_record_bias(original.matrix, perturbed.matrix, alpha);
                    metrics.ks_similar_percentage = r.percentage;
                    out << "KS_similar=" << r.similar_record_count << " ("
                        << 100.0 * r.percentage << "%)\n";
                } else if (attack == "entropy") {
                    const double gain = entropy_increase(original.matrix, perturbed.matrix, bins);
                    metrics.entropy_gain = gain;
                    out << "AIG=" << gain << '\n';
                } else if (attack == "knn") {
                    if (original.class_values.empty() || perturbed.class_values.empty()) {
                        throw Error(ErrorKind::parameter, "knn utility needs --class-column");
                    }
                    Rng rng_a = derive_stream(seed, Stream::folds);
                    Rng rng_b = derive_stream(seed, Stream::folds);
                    const auto labels_a = original.class_labels();
                    const auto labels_b = perturbed.class_labels();
                    metrics.knn_accuracy_original =
                        knn_utility(original.matrix, labels_a, knn_k, knn_folds, rng_a,
                                    eval_common.threads);
                    metrics.knn_accuracy_perturbed =
                        knn_utility(perturbed.matrix, labels_b, knn_k, knn_folds, rng_b,
                                    eval_common.threads);
                    out << "kNN_original=" << *metrics.knn_accuracy_original
                        << " kNN_perturbed=" << *metrics.knn_accuracy_perturbed << '\n';
                } else {
                    throw Error(ErrorKind::parameter, "unknown attack '" + attack + "'");
                }
            }
            if (!eval_report.empty()) {
                emit_report(report, eval_report, manifest);
            }
        } else if (*bench_cmd) {
            std::vector<std::size_t> counts;
            for (const auto& item : split_list(bench_rows)) {
                std::size_t value = 0;
                const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
                if (ec != std::errc() || ptr != item.data() + item.size() || value < 2) {
                    throw Error(ErrorKind::parameter, "bad row count '" + item + "'");
                }
                counts.push_back(value);
            }
            const auto rows = run_scaling_bench(counts, bench_cols, bench_seed, bench_sigma, bench_threads);
            out << "rows,cols,seconds,search_seconds\n";
            std::vector<double> x, y;
            for (const auto& row : rows) {
                out << row.rows << ',' << row.cols << ',' << std::setprecision(6) << row.seconds
                    << ',' << row.search_seconds << '\n';
                x.push_back(static_cast<double>(row.rows));
                y.push_back(row.seconds);
            }
            if (rows.size() >= 2) {
                const LinearFit fit = fit_line(x, y);
                out << "linear_fit slope=" << fit.slope << " intercept=" << fit.intercept
                    << " r2=" << fit.r_squared << '\n';
            }
        }
    } catch (const Error& e) {
        const ExitCode code = exit_code_for(e.kind());
        print_error(err, code, to_string(e.kind()), e.what());
        return static_cast<int>(code);
    } catch (const std::exception& e) {
        print_error(err, ExitCode::internal, "internal", e.what());
        return static_cast<int>(ExitCode::internal);
    }
    return 0;
}

} // namespace pabidot
