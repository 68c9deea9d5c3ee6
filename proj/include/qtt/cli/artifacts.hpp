#pragma once

// CSV and SVG emitters.
//
// CSV layout (version 1):
//   # qtt-csv v1 <table>
//   col_a_unit,col_b_unit,...
//   1.234567890123e-23,...
// Numbers are printed with %.12e; text cells (e.g. "unresolved") verbatim.

#include <string>
#include <variant>
#include <vector>

namespace qtt::cli {

inline constexpr int kCsvSchemaVersion = 1;

class CsvTable {
public:
    using Cell = std::variant<double, long long, std::string>;

    CsvTable(std::string table, std::vector<std::string> columns);

    void add_row(std::vector<Cell> row);

    [[nodiscard]] const std::string& table() const { return table_; }
    [[nodiscard]] const std::vector<std::string>& columns() const { return columns_; }
    [[nodiscard]] std::size_t rows() const { return rows_.size(); }
    [[nodiscard]] std::string render() const;

private:
    std::string table_;
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

[[nodiscard]] std::string format_number(double v);

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    bool dashed = false;
};

struct SvgPlot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    std::vector<SvgSeries> series;

    /// Self-contained SVG document (inline styles, no external references).
    [[nodiscard]] std::string render() const;
};

/// Parsed CSV produced by CsvTable::render(); used by tests and tooling.
struct CsvDocument {
    std::string comment;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::size_t column(const std::string& name) const;
    [[nodiscard]] double number(std::size_t row, const std::string& name) const;
};

[[nodiscard]] CsvDocument parse_csv(const std::string& text);

}  // namespace qtt::cli
