#pragma once

// Tabular command output in comma-separated or JSON form.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace tqkd {

inline constexpr int kSchemaVersion = 1;
inline constexpr int kDefaultPrecision = 12;

enum class OutputFormat { csv, json };

inline OutputFormat parse_format(const std::string& name) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    throw std::invalid_argument("unknown format '" + name + "' (expected csv or json)");
}

inline std::string format_name(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

struct OutputRecord {
    std::string command;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    int exit_code = 0;

    void add_row(std::vector<Cell> row) {
        if (row.size() != columns.size()) throw std::logic_error("row width does not match columns");
        rows.push_back(std::move(row));
    }
};

/// Shortest decimal with `precision` significant digits.
inline std::string format_number(double v, int precision) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

namespace detail {

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline std::string cell_text(const Cell& c, int precision) {
    struct Visitor {
        int precision;
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(double v) const { return format_number(v, precision); }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
        std::string operator()(const std::string& v) const { return v; }
    };
    return std::visit(Visitor{precision}, c);
}

inline nlohmann::ordered_json cell_json(const Cell& c, int precision) {
    using json = nlohmann::ordered_json;
    struct Visitor {
        int precision;
        json operator()(std::monostate) const { return nullptr; }
        json operator()(double v) const {
            if (!std::isfinite(v)) return format_number(v, precision);
            return std::strtod(format_number(v, precision).c_str(), nullptr);
        }
        json operator()(std::int64_t v) const { return v; }
        json operator()(bool v) const { return v; }
        json operator()(const std::string& v) const { return v; }
    };
    return std::visit(Visitor{precision}, c);
}

}  // namespace detail

/// CSV: one '#' metadata line, a header row, then data rows.
inline void write_csv(std::ostream& os, const OutputRecord& rec, int precision = kDefaultPrecision) {
    os << "# schema_version=" << kSchemaVersion << " command=" << rec.command;
    for (const auto& [k, v] : rec.parameters) os << ' ' << k << '=' << v;
    os << '\n';
    for (std::size_t i = 0; i < rec.columns.size(); ++i) {
        os << (i ? "," : "") << detail::csv_escape(rec.columns[i]);
    }
    os << '\n';
    for (const auto& row : rec.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << detail::csv_escape(detail::cell_text(row[i], precision));
        }
        os << '\n';
    }
}

inline nlohmann::ordered_json to_json(const OutputRecord& rec, int precision = kDefaultPrecision) {
    using json = nlohmann::ordered_json;
    json params = json::object();
    for (const auto& [k, v] : rec.parameters) params[k] = v;
    json rows = json::array();
    for (const auto& row : rec.rows) {
        json r = json::array();
        for (const auto& c : row) r.push_back(detail::cell_json(c, precision));
        rows.push_back(std::move(r));
    }
    json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = rec.command;
    j["parameters"] = std::move(params);
    j["columns"] = rec.columns;
    j["rows"] = std::move(rows);
    return j;
}

inline void write_record(std::ostream& os, const OutputRecord& rec, OutputFormat format,
                         int precision = kDefaultPrecision) {
    if (format == OutputFormat::csv) {
        write_csv(os, rec, precision);
    } else {
        os << to_json(rec, precision).dump(2) << '\n';
    }
}

inline std::string render(const OutputRecord& rec, OutputFormat format, int precision = kDefaultPrecision) {
    std::ostringstream os;
    write_record(os, rec, format, precision);
    return os.str();
}

}  // namespace tqkd
