#pragma once

#include "pabidot/pipeline.hpp"
#include "pabidot/types.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pabidot {

/// Numeric table plus an optional pass-through class column.
struct Dataset {
    DataMatrix matrix;
    std::vector<std::string> column_names; // one per matrix column; empty without a header
    std::optional<std::string> class_name;
    std::optional<std::size_t> class_position; // 0-based column position in the file
    std::vector<std::string> class_values;     // raw text, one per row
    std::string source_path;
    std::size_t dropped_rows = 0;

    /// Class values mapped to small integers in order of first appearance.
    std::vector<int> class_labels() const;
    /// Copy with rows reordered so that row i is this row permutation[i]. The class column
    /// travels with its row.
    Dataset permuted(const std::vector<std::size_t>& permutation) const;
};

enum class OnMissing { error, drop_row };

struct CsvOptions {
    bool has_header = true;
    /// Header name, or a 0-based index when the file has no header.
    std::optional<std::string> class_column;
    OnMissing on_missing = OnMissing::error;
};

/// Throws file_not_found, parse (with 1-based data row and column), or empty_data.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Writes header (when names are known) and rows; doubles use the shortest round-trip form.
/// Missing parent directories are created.
void write_csv(const std::filesystem::path& path, const Dataset& dataset);

/// Drops constant numeric columns in place and returns their names (or indices).
std::vector<std::string> drop_constant_columns(Dataset& dataset);

inline constexpr int kReportFormatVersion = 1;

struct RunManifest {
    PerturbationConfig config;
    std::string input_path;
    std::string output_path;
    std::string report_path;
    int format_version = kReportFormatVersion;

    friend bool operator==(const RunManifest& a, const RunManifest& b)
    {
        return a.config.sigma == b.config.sigma && a.config.seed == b.config.seed &&
               a.config.class_column == b.config.class_column &&
               a.input_path == b.input_path && a.output_path == b.output_path &&
               a.report_path == b.report_path && a.format_version == b.format_version;
    }
};

nlohmann::json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& doc);

/// Report document. Sections with nothing to say (grid for evaluate-only runs, metrics
/// before evaluation) are omitted.
nlohmann::json to_json(const PerturbationReport& report,
                       const std::optional<RunManifest>& manifest = std::nullopt);
PerturbationReport report_from_json(const nlohmann::json& doc);

void emit_report(const PerturbationReport& report, const std::filesystem::path& path,
                 const std::optional<RunManifest>& manifest = std::nullopt);
PerturbationReport read_report(const std::filesystem::path& path);
/// The run manifest stored in a report file, if it has one.
std::optional<RunManifest> read_manifest(const std::filesystem::path& path);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

} // namespace pabidot
