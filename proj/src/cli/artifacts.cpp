#include "qtt/cli/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qtt::cli {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

CsvTable::CsvTable(std::string table, std::vector<std::string> columns)
    : table_(std::move(table)), columns_(std::move(columns)) {}

void CsvTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw std::logic_error("csv: row width mismatch");
    rows_.push_back(std::move(row));
}

std::string CsvTable::render() const {
    std::string out = "# qtt-csv v" + std::to_string(kCsvSchemaVersion) + " " + table_ + "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        out += (i ? "," : "") + columns_[i];
    }
    out += "\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, double>) {
                        out += format_number(v);
                    } else if constexpr (std::is_same_v<T, long long>) {
                        out += std::to_string(v);
                    } else {
                        out += v;
                    }
                },
                row[i]);
        }
        out += "\n";
    }
    return out;
}

namespace {

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace

std::string SvgPlot::render() const {
    constexpr double width = 720, height = 480;
    constexpr double left = 80, right = 160, top = 40, bottom = 60;
    const double pw = width - left - right;
    const double ph = height - top - bottom;

    auto tx = [&](double x) { return log_x ? std::log10(x) : x; };

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.y[i]) || (log_x && s.x[i] <= 0)) continue;
            xmin = std::min(xmin, tx(s.x[i]));
            xmax = std::max(xmax, tx(s.x[i]));
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    }
    if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymin -= 0.5, ymax += 0.5;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    auto px = [&](double x) { return left + (tx(x) - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << fmt(width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">"
      << escape_xml(title) << "</text>\n"
      << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int i = 0; i <= 5; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 5.0;
        const double fy = ymin + (ymax - ymin) * i / 5.0;
        const double gx = left + pw * i / 5.0;
        const double gy = top + ph - ph * i / 5.0;
        o << "<line x1=\"" << fmt(gx) << "\" y1=\"" << top + ph << "\" x2=\"" << fmt(gx) << "\" y2=\""
          << top + ph + 5 << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << fmt(gx) << "\" y=\"" << top + ph + 20
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
          << tick_label(log_x ? std::pow(10.0, fx) : fx) << "</text>\n"
          << "<line x1=\"" << left - 5 << "\" y1=\"" << fmt(gy) << "\" x2=\"" << left << "\" y2=\""
          << fmt(gy) << "\" stroke=\"black\"/>\n"
          << "<text x=\"" << left - 8 << "\" y=\"" << fmt(gy + 4)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << tick_label(fy)
          << "</text>\n";
    }
    o << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << height - 15
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape_xml(x_label)
      << "</text>\n"
      << "<text x=\"18\" y=\"" << fmt(top + ph / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"13\" transform=\"rotate(-90 18 " << fmt(top + ph / 2) << ")\">" << escape_xml(y_label)
      << "</text>\n";

    double legend_y = top + 10;
    for (const auto& s : series) {
        o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
          << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"";
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!std::isfinite(s.y[i]) || (log_x && s.x[i] <= 0)) continue;
            o << fmt(px(s.x[i])) << "," << fmt(py(s.y[i])) << " ";
        }
        o << "\"/>\n";
        o << "<line x1=\"" << left + pw + 10 << "\" y1=\"" << fmt(legend_y) << "\" x2=\"" << left + pw + 30
          << "\" y2=\"" << fmt(legend_y) << "\" stroke=\"" << s.color << "\" stroke-width=\"2\""
          << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << "/>\n"
          << "<text x=\"" << left + pw + 35 << "\" y=\"" << fmt(legend_y + 4)
          << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(s.label) << "</text>\n";
        legend_y += 18;
    }
    o << "</svg>\n";
    return o.str();
}

namespace {
std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t pos = 0;
    while (true) {
        const std::size_t end = line.find(',', pos);
        cells.push_back(line.substr(pos, end == std::string::npos ? std::string::npos : end - pos));
        if (end == std::string::npos) break;
        pos = end + 1;
    }
    return cells;
}
}  // namespace

CsvDocument parse_csv(const std::string& text) {
    CsvDocument doc;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            doc.comment = line;
            continue;
        }
        if (!have_header) {
            doc.columns = split(line);
            have_header = true;
        } else {
            doc.rows.push_back(split(line));
        }
    }
    return doc;
}

std::size_t CsvDocument::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw std::out_of_range("csv: no column " + name);
    return static_cast<std::size_t>(it - columns.begin());
}

double CsvDocument::number(std::size_t row, const std::string& name) const {
    return std::stod(rows.at(row).at(column(name)));
}

}  // namespace qtt::cli
