#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace hqc {

inline constexpr const char* kToolVersion = "0.1.0";

/// One asserted inequality: its formula, measured slack and outcome.
/// `slack >= -tolerance` is the pass rule.
struct Verdict {
    std::string id;
    std::string anchor;
    double slack = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

Verdict make_verdict(std::string id, std::string anchor, double slack, double tolerance = 0.0);
/// Strict form: passes only when slack > 0.
Verdict make_strict_verdict(std::string id, std::string anchor, double slack);

struct Report {
    std::string operation;
    std::string input_digest;
    nlohmann::json parameters = nlohmann::json::object();
    nlohmann::json aggregates = nlohmann::json::object();
    std::vector<Verdict> verdicts;
    std::string csv_path;

    bool passed() const;
    nlohmann::json to_json() const;
};

/// Fixed-column CSV; doubles printed with 17 significant digits.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}
    void add_row(const std::vector<double>& row);
    std::string text() const;
    void write(const std::string& path) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<double>> rows_;
};

/// Scalar field on a regular nx x ny grid, row 0 at y = y_lo. NaN cells are
/// drawn blank (outside the domain).
struct HeatmapData {
    std::size_t nx = 0;
    std::size_t ny = 0;
    double x_lo = -1.0, x_hi = 1.0, y_lo = -1.0, y_hi = 1.0;
    std::vector<double> values;
    std::string title;
    std::string quantity;
};

/// SVG heatmap with a fixed blue-white-red palette centred at `center`
/// (symmetric range), plus a colour bar labelled with the range.
std::string heatmap_svg(const HeatmapData& data, double center);

void write_text(const std::string& path, const std::string& text);

std::string format_double(double v);

}  // namespace hqc
