#include "pabidot/io.hpp"

#include "pabidot/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string_view>

namespace pabidot {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Row = std::vector<std::string>;

// RFC 4180 style: comma separated, double-quoted fields with "" escapes, CRLF or LF.
std::vector<Row> parse_records(std::string_view text)
{
    std::vector<Row> rows;
    Row row;
    std::string field;
    bool in_quotes = false;
    bool row_has_content = false;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
    };
    auto end_row = [&] {
        end_field();
        if (row_has_content || row.size() > 1 || !row.front().empty()) {
            rows.push_back(std::move(row));
        }
        row.clear();
        row_has_content = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
        case '"':
            in_quotes = true;
            row_has_content = true;
            break;
        case ',':
            end_field();
            row_has_content = true;
            break;
        case '\r':
            break;
        case '\n':
            end_row();
            break;
        default:
            field.push_back(ch);
        }
    }
    if (in_quotes) {
        throw Error(ErrorKind::parse, "unterminated quoted field at end of file");
    }
    if (!field.empty() || !row.empty()) {
        end_row();
    }
    return rows;
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

bool is_missing(std::string_view s)
{
    return s.empty() || s == "?" || s == "NA" || s == "NaN" || s == "nan";
}

std::optional<double> parse_number(std::string_view s)
{
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::string quote_if_needed(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') {
            out.push_back('"');
        }
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

std::size_t resolve_class_position(const std::string& column, const Row& header, bool has_header,
                                   std::size_t width)
{
    if (has_header) {
        const auto it = std::find(header.begin(), header.end(), column);
        if (it != header.end()) {
            return static_cast<std::size_t>(it - header.begin());
        }
    }
    std::size_t index = 0;
    const auto [ptr, ec] = std::from_chars(column.data(), column.data() + column.size(), index);
    if (ec == std::errc() && ptr == column.data() + column.size() && index < width) {
        return index;
    }
    throw Error(ErrorKind::input, "class column '" + column + "' not found");
}

json vector_json(const Vector& v)
{
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v[i]);
    }
    return out;
}

template <class T>
void put_optional(json& doc, const char* key, const std::optional<T>& value)
{
    if (value) {
        doc[key] = *value;
    }
}

template <class T>
std::optional<T> get_optional(const json& doc, const char* key)
{
    if (doc.contains(key) && !doc.at(key).is_null()) {
        return doc.at(key).get<T>();
    }
    return std::nullopt;
}

json config_json(const PerturbationConfig& config)
{
    json doc{{"sigma", config.sigma}, {"seed", config.seed}};
    put_optional(doc, "class_column", config.class_column);
    return doc;
}

PerturbationConfig config_from_json(const json& doc)
{
    PerturbationConfig config;
    config.sigma = doc.at("sigma").get<double>();
    config.seed = doc.at("seed").get<std::uint64_t>();
    config.class_column = get_optional<std::string>(doc, "class_column");
    return config;
}

} // namespace

std::vector<int> Dataset::class_labels() const
{
    std::map<std::string, int> codes;
    std::vector<int> labels;
    labels.reserve(class_values.size());
    for (const auto& v : class_values) {
        const auto [it, inserted] = codes.try_emplace(v, static_cast<int>(codes.size()));
        labels.push_back(it->second);
    }
    return labels;
}

Dataset Dataset::permuted(const std::vector<std::size_t>& permutation) const
{
    if (permutation.size() != static_cast<std::size_t>(matrix.rows())) {
        throw Error(ErrorKind::shape, "permutation length does not match row count");
    }
    Dataset out = *this;
    for (std::size_t i = 0; i < permutation.size(); ++i) {
        out.matrix.row(static_cast<Eigen::Index>(i)) =
            matrix.row(static_cast<Eigen::Index>(permutation[i]));
    }
    if (!class_values.empty()) {
        out.class_values = apply_permutation(class_values, permutation);
    }
    return out;
}

Dataset load_csv(const fs::path& path, const CsvOptions& options)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(fs::exists(path) ? ErrorKind::io : ErrorKind::file_not_found,
                    "cannot open '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    std::vector<Row> records = parse_records(buffer.str());

    Row header;
    if (options.has_header) {
        if (records.empty()) {
            throw Error(ErrorKind::empty_data, "'" + path.string() + "' has no header row");
        }
        header = std::move(records.front());
        records.erase(records.begin());
        for (auto& name : header) {
            name = std::string(trim(name));
        }
    }
    if (records.empty()) {
        throw Error(ErrorKind::empty_data, "'" + path.string() + "' has no data rows");
    }
    const std::size_t width = options.has_header ? header.size() : records.front().size();

    Dataset dataset;
    dataset.source_path = path.string();
    if (options.class_column) {
        dataset.class_position =
            resolve_class_position(*options.class_column, header, options.has_header, width);
        dataset.class_name = options.has_header ? header[*dataset.class_position]
                                                : std::to_string(*dataset.class_position);
    }
    for (std::size_t c = 0; c < width; ++c) {
        if (c == dataset.class_position) {
            continue;
        }
        dataset.column_names.push_back(options.has_header ? header[c] : std::string());
    }
    if (!options.has_header) {
        dataset.column_names.clear();
    }

    const std::size_t numeric_width = width - (dataset.class_position ? 1 : 0);
    std::vector<double> values;
    values.reserve(records.size() * numeric_width);
    std::size_t kept = 0;
    for (std::size_t r = 0; r < records.size(); ++r) {
        const Row& rec = records[r];
        const std::size_t data_row = r + 1;
        if (rec.size() != width) {
            throw Error(ErrorKind::parse, "row " + std::to_string(data_row) + " has " +
                                              std::to_string(rec.size()) + " fields, expected " +
                                              std::to_string(width) + " (row=" +
                                              std::to_string(data_row) + ")");
        }
        std::vector<double> parsed;
        parsed.reserve(numeric_width);
        std::string class_value;
        bool drop = false;
        for (std::size_t c = 0; c < width && !drop; ++c) {
            const auto cell = trim(rec[c]);
            if (c == dataset.class_position) {
                class_value = std::string(cell);
                continue;
            }
            auto number = is_missing(cell) ? std::nullopt : parse_number(cell);
            if (!number) {
                if (options.on_missing == OnMissing::drop_row) {
                    drop = true;
                    break;
                }
                throw Error(ErrorKind::parse,
                            "non-numeric cell '" + std::string(cell) + "' at (" +
                                std::to_string(data_row) + "," + std::to_string(c + 1) +
                                ") (row=" + std::to_string(data_row) +
                                " col=" + std::to_string(c + 1) + ")");
            }
            parsed.push_back(*number);
        }
        if (drop) {
            ++dataset.dropped_rows;
            continue;
        }
        values.insert(values.end(), parsed.begin(), parsed.end());
        if (dataset.class_position) {
            dataset.class_values.push_back(std::move(class_value));
        }
        ++kept;
    }
    if (kept == 0) {
        throw Error(ErrorKind::empty_data,
                    "every row of '" + path.string() + "' was dropped for missing values");
    }

    dataset.matrix.resize(static_cast<Eigen::Index>(kept), static_cast<Eigen::Index>(numeric_width));
    for (std::size_t r = 0; r < kept; ++r) {
        for (std::size_t c = 0; c < numeric_width; ++c) {
            dataset.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                values[r * numeric_width + c];
        }
    }
    return dataset;
}

std::string format_double(double value)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) {
        throw Error(ErrorKind::io, "cannot format number");
    }
    return std::string(buf, ptr);
}

void write_csv(const fs::path& path, const Dataset& dataset)
{
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) {
            throw Error(ErrorKind::io, "cannot create directory '" + path.parent_path().string() +
                                           "': " + ec.message());
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
    }

    const auto cols = static_cast<std::size_t>(dataset.matrix.cols());
    const bool has_class = dataset.class_position.has_value() && !dataset.class_values.empty();
    const std::size_t class_at = has_class ? std::min(*dataset.class_position, cols) : 0;

    std::string line;
    if (!dataset.column_names.empty()) {
        for (std::size_t c = 0, written = 0; c <= cols; ++c) {
            if (has_class && c == class_at) {
                line += (written++ ? "," : "") + quote_if_needed(dataset.class_name.value_or("class"));
            }
            if (c < cols) {
                line += (written++ ? "," : "") + quote_if_needed(dataset.column_names.at(c));
            }
        }
        out << line << '\n';
    }
    for (Eigen::Index r = 0; r < dataset.matrix.rows(); ++r) {
        line.clear();
        for (std::size_t c = 0, written = 0; c <= cols; ++c) {
            if (has_class && c == class_at) {
                line += (written++ ? "," : "") +
                        quote_if_needed(dataset.class_values.at(static_cast<std::size_t>(r)));
            }
            if (c < cols) {
                line += (written++ ? "," : "") +
                        format_double(dataset.matrix(r, static_cast<Eigen::Index>(c)));
            }
        }
        out << line << '\n';
    }
    out.flush();
    if (!out) {
        throw Error(ErrorKind::io, "write to '" + path.string() + "' failed");
    }
}

std::vector<std::string> drop_constant_columns(Dataset& dataset)
{
    std::vector<std::string> dropped;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index c = 0; c < dataset.matrix.cols(); ++c) {
        if (dataset.matrix.rows() > 0 &&
            dataset.matrix.col(c).maxCoeff() == dataset.matrix.col(c).minCoeff()) {
            dropped.push_back(dataset.column_names.empty()
                                  ? std::to_string(c)
                                  : dataset.column_names[static_cast<std::size_t>(c)]);
        } else {
            keep.push_back(c);
        }
    }
    if (dropped.empty()) {
        return dropped;
    }
    DataMatrix kept(dataset.matrix.rows(), static_cast<Eigen::Index>(keep.size()));
    std::vector<std::string> names;
    for (std::size_t k = 0; k < keep.size(); ++k) {
        kept.col(static_cast<Eigen::Index>(k)) = dataset.matrix.col(keep[k]);
        if (!dataset.column_names.empty()) {
            names.push_back(dataset.column_names[static_cast<std::size_t>(keep[k])]);
        }
    }
    if (dataset.class_position) {
        // Numeric column c sits left of the class slot exactly when c < class_position.
        std::size_t before = 0;
        for (Eigen::Index c = 0; c < dataset.matrix.cols(); ++c) {
            const bool was_dropped = std::find(keep.begin(), keep.end(), c) == keep.end();
            if (was_dropped && static_cast<std::size_t>(c) < *dataset.class_position) {
                ++before;
            }
        }
        *dataset.class_position -= before;
    }
    dataset.matrix = std::move(kept);
    dataset.column_names = std::move(names);
    return dropped;
}

json to_json(const RunManifest& manifest)
{
    return json{
        {"format_version", manifest.format_version},
        {"config", config_json(manifest.config)},
        {"input_path", manifest.input_path},
        {"output_path", manifest.output_path},
        {"report_path", manifest.report_path},
    };
}

RunManifest manifest_from_json(const json& doc)
{
    try {
        RunManifest manifest;
        manifest.format_version = doc.at("format_version").get<int>();
        manifest.config = config_from_json(doc.at("config"));
        manifest.input_path = doc.at("input_path").get<std::string>();
        manifest.output_path = doc.at("output_path").get<std::string>();
        manifest.report_path = doc.at("report_path").get<std::string>();
        return manifest;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::parse, std::string("malformed run manifest: ") + e.what());
    }
}

json to_json(const PerturbationReport& report, const std::optional<RunManifest>& manifest)
{
    json doc;
    doc["format_version"] = kReportFormatVersion;
    PerturbationConfig config;
    config.sigma = report.sigma;
    config.seed = report.seed;
    config.class_column = report.class_column;
    doc["config"] = config_json(config);
    doc["data"] = {{"rows", report.row_count}, {"columns", report.column_count}};

    const PrivacyGrid& grid = report.grid;
    if (grid.phi.size() > 0) {
        doc["selection"] = {
            {"Phi", grid.Phi},
            {"theta_optimal", grid.theta_optimal},
            {"rif_optimal", grid.rif_optimal},
        };
        json rows = json::array();
        for (Eigen::Index i = 0; i < grid.phi.rows(); ++i) {
            rows.push_back(vector_json(grid.phi.row(i).transpose()));
        }
        doc["grid"] = {
            {"angles_degrees", grid.angles},
            {"per_angle_min", vector_json(grid.per_angle_min)},
            {"phi", std::move(rows)},
        };
    }
    doc["timing"] = {
        {"wall_time_seconds", report.wall_time_seconds},
        {"search_time_seconds", report.search_time_seconds},
    };

    const ReportMetrics& m = report.metrics;
    if (!m.empty()) {
        json metrics = json::object();
        put_optional(metrics, "ni_min", m.ni_min);
        put_optional(metrics, "ni_avg", m.ni_avg);
        put_optional(metrics, "io_min", m.io_min);
        put_optional(metrics, "io_avg", m.io_avg);
        put_optional(metrics, "known_fraction", m.known_fraction);
        put_optional(metrics, "entropy_gain", m.entropy_gain);
        put_optional(metrics, "ks_similar_percentage", m.ks_similar_percentage);
        put_optional(metrics, "knn_accuracy_original", m.knn_accuracy_original);
        put_optional(metrics, "knn_accuracy_perturbed", m.knn_accuracy_perturbed);
        put_optional(metrics, "alignment", m.alignment);
        doc["metrics"] = std::move(metrics);
    }
    if (manifest) {
        doc["manifest"] = to_json(*manifest);
    }
    return doc;
}

PerturbationReport report_from_json(const json& doc)
{
    try {
        const int version = doc.at("format_version").get<int>();
        if (version > kReportFormatVersion) {
            throw Error(ErrorKind::parse,
                        "report format version " + std::to_string(version) + " is newer than " +
                            std::to_string(kReportFormatVersion));
        }
        PerturbationReport report;
        const PerturbationConfig config = config_from_json(doc.at("config"));
        report.sigma = config.sigma;
        report.seed = config.seed;
        report.class_column = config.class_column;
        report.row_count = doc.at("data").at("rows").get<std::size_t>();
        report.column_count = doc.at("data").at("columns").get<std::size_t>();

        if (doc.contains("grid")) {
            const json& g = doc.at("grid");
            const json& rows = g.at("phi");
            const auto n = rows.empty() ? 0 : rows.front().size();
            Eigen::MatrixXd phi(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(n));
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (rows[i].size() != n) {
                    throw Error(ErrorKind::parse, "ragged privacy grid in report");
                }
                for (std::size_t c = 0; c < n; ++c) {
                    phi(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                        rows[i][c].get<double>();
                }
            }
            report.grid = PrivacyGrid::from_cells(std::move(phi),
                                                  g.at("angles_degrees").get<std::vector<double>>());
        }
        const json& timing = doc.at("timing");
        report.wall_time_seconds = timing.at("wall_time_seconds").get<double>();
        report.search_time_seconds = timing.at("search_time_seconds").get<double>();

        if (doc.contains("metrics")) {
            const json& metrics = doc.at("metrics");
            ReportMetrics& m = report.metrics;
            m.ni_min = get_optional<double>(metrics, "ni_min");
            m.ni_avg = get_optional<double>(metrics, "ni_avg");
            m.io_min = get_optional<double>(metrics, "io_min");
            m.io_avg = get_optional<double>(metrics, "io_avg");
            m.known_fraction = get_optional<double>(metrics, "known_fraction");
            m.entropy_gain = get_optional<double>(metrics, "entropy_gain");
            m.ks_similar_percentage = get_optional<double>(metrics, "ks_similar_percentage");
            m.knn_accuracy_original = get_optional<double>(metrics, "knn_accuracy_original");
            m.knn_accuracy_perturbed = get_optional<double>(metrics, "knn_accuracy_perturbed");
            m.alignment = get_optional<std::string>(metrics, "alignment");
        }
        return report;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::parse, std::string("malformed report: ") + e.what());
    }
}

void emit_report(const PerturbationReport& report, const fs::path& path,
                 const std::optional<RunManifest>& manifest)
{
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::io, "cannot open '" + path.string() + "' for writing");
    }
    out << to_json(report, manifest).dump(2) << '\n';
    if (!out) {
        throw Error(ErrorKind::io, "write to '" + path.string() + "' failed");
    }
}

namespace {

json read_json(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::file_not_found, "cannot open report '" + path.string() + "'");
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::parse, "report '" + path.string() + "' is not valid: " + e.what());
    }
    return doc;
}

} // namespace

PerturbationReport read_report(const fs::path& path)
{
    return report_from_json(read_json(path));
}

std::optional<RunManifest> read_manifest(const fs::path& path)
{
    const json doc = read_json(path);
    if (!doc.contains("manifest")) {
        return std::nullopt;
    }
    return manifest_from_json(doc.at("manifest"));
}

} // namespace pabidot
