#include "hqc/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hqc/errors.hpp"

namespace hqc {

using nlohmann::json;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Verdict make_verdict(std::string id, std::string anchor, double slack, double tolerance) {
    return {std::move(id), std::move(anchor), slack, tolerance, slack >= -tolerance};
}

Verdict make_strict_verdict(std::string id, std::string anchor, double slack) {
    return {std::move(id), std::move(anchor), slack, 0.0, slack > 0.0};
}

bool Report::passed() const {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

json Report::to_json() const {
    json j;
    j["format_version"] = 1;
    j["tool_version"] = kToolVersion;
    j["operation"] = operation;
    j["input_digest"] = input_digest;
    j["parameters"] = parameters;
    j["aggregates"] = aggregates;
    json vs = json::array();
    for (const auto& v : verdicts)
        vs.push_back({{"id", v.id}, {"anchor", v.anchor}, {"slack", v.slack}, {"tolerance", v.tolerance},
                      {"pass", v.pass}});
    j["verdicts"] = vs;
    j["passed"] = passed();
    if (!csv_path.empty()) j["csv"] = csv_path;
    return j;
}

void CsvTable::add_row(const std::vector<double>& row) {
    if (row.size() != columns_.size()) throw PreconditionError("CSV row width differs from the header");
    rows_.push_back(row);
}

std::string CsvTable::text() const {
    std::string out;
    for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? "," : "") + columns_[i];
    out += '\n';
    for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_double(r[i]);
        out += '\n';
    }
    return out;
}

void CsvTable::write(const std::string& path) const { write_text(path, text()); }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
    if (!out) throw Error("write failed for " + path);
}

namespace {

// Diverging palette, blue (low) through white to red (high).
constexpr std::array<std::array<int, 3>, 5> kPalette{{
    {{33, 102, 172}},
    {{146, 197, 222}},
    {{247, 247, 247}},
    {{244, 165, 130}},
    {{178, 24, 43}},
}};

std::string colour(double t) {
    t = std::clamp(t, 0.0, 1.0) * (kPalette.size() - 1);
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(t), kPalette.size() - 2);
    const double u = t - static_cast<double>(i);
    char buf[8];
    int c[3];
    for (int k = 0; k < 3; ++k)
        c[k] = static_cast<int>(std::lround(kPalette[i][k] + u * (kPalette[i + 1][k] - kPalette[i][k])));
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c[0], c[1], c[2]);
    return buf;
}

std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

std::string heatmap_svg(const HeatmapData& d, double center) {
    if (d.values.size() != d.nx * d.ny || d.nx == 0 || d.ny == 0)
        throw PreconditionError("heatmap grid size mismatch");
    double spread = 0.0;
    for (double v : d.values)
        if (std::isfinite(v)) spread = std::max(spread, std::abs(v - center));
    if (spread == 0.0) spread = 1.0;

    const double cell = std::max(2.0, std::floor(400.0 / static_cast<double>(std::max(d.nx, d.ny))));
    const double w = cell * d.nx, h = cell * d.ny;
    const double margin = 40.0, bar = 20.0;
    const double width = margin * 2 + w + 90.0, height = margin * 2 + h;

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    s << "<text x=\"" << margin << "\" y=\"" << margin - 15 << "\" font-size=\"13\">" << d.title << "</text>\n";
    for (std::size_t r = 0; r < d.ny; ++r) {
        for (std::size_t c = 0; c < d.nx; ++c) {
            const double v = d.values[r * d.nx + c];
            if (!std::isfinite(v)) continue;
            // Row 0 is the bottom of the picture.
            s << "<rect x=\"" << margin + c * cell << "\" y=\"" << margin + (d.ny - 1 - r) * cell
              << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\""
              << colour(0.5 + 0.5 * (v - center) / spread) << "\"/>\n";
        }
    }
    s << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << w << "\" height=\"" << h
      << "\" fill=\"none\" stroke=\"#444\"/>\n";
    s << "<text x=\"" << margin << "\" y=\"" << margin + h + 15 << "\">x: " << label(d.x_lo) << " .. "
      << label(d.x_hi) << ", y: " << label(d.y_lo) << " .. " << label(d.y_hi) << "</text>\n";

    // Colour bar, top = centre + spread.
    const double bx = margin + w + 20.0;
    constexpr int kSteps = 64;
    for (int k = 0; k < kSteps; ++k) {
        const double t = 1.0 - (k + 0.5) / kSteps;
        s << "<rect x=\"" << bx << "\" y=\"" << margin + h * k / kSteps << "\" width=\"" << bar
          << "\" height=\"" << h / kSteps + 0.5 << "\" fill=\"" << colour(t) << "\"/>\n";
    }
    s << "<text x=\"" << bx + bar + 4 << "\" y=\"" << margin + 10 << "\">" << label(center + spread) << "</text>\n";
    s << "<text x=\"" << bx + bar + 4 << "\" y=\"" << margin + h / 2 + 4 << "\">" << label(center) << "</text>\n";
    s << "<text x=\"" << bx + bar + 4 << "\" y=\"" << margin + h << "\">" << label(center - spread) << "</text>\n";
    s << "<text x=\"" << bx << "\" y=\"" << margin - 4 << "\">" << d.quantity << "</text>\n";
    s << "</svg>\n";
    return s.str();
}

}  // namespace hqc
