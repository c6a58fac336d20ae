#include "polar/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <ostream>

namespace polar {

namespace {

constexpr const char* columns[] = {
    "ebn0_db",  "frames",     "bit_errors",   "frame_errors", "ber",
    "fer",      "ti_mbps",    "lat_avg_us",   "lat_worst_us", "esc_mean",
};

std::vector<std::string> format_cells(const PointStats& p) {
    char buf[64];
    std::vector<std::string> cells;
    auto put = [&](const char* fmt, auto v) {
        std::snprintf(buf, sizeof buf, fmt, v);
        cells.emplace_back(buf);
    };
    put("%.6g", p.ebn0_db);
    put("%" PRIu64, p.frames);
    put("%" PRIu64, p.bit_errors);
    put("%" PRIu64, p.frame_errors);
    put("%.6e", p.ber);
    put("%.6e", p.fer);
    put("%.3f", p.ti_mbps);
    put("%.3f", p.lat_avg_us);
    put("%.3f", p.lat_worst_us);
    put("%.4f", p.esc_mean);
    return cells;
}

} // namespace

std::string format_csv_row(const PointStats& p) {
    std::string row;
    bool first = true;
    for (const auto& c : format_cells(p)) {
        if (!first) row += ',';
        first = false;
        row += c;
    }
    return row;
}

void write_report(std::ostream& os, ReportFormat format,
                  const std::vector<std::string>& meta, const SimStats& stats) {
    for (const auto& m : meta) os << "# " << m << '\n';
    const std::size_t ncols = sizeof columns / sizeof columns[0];

    if (format == ReportFormat::csv) {
        for (std::size_t i = 0; i < ncols; ++i)
            os << (i ? "," : "") << columns[i];
        os << '\n';
        for (const auto& p : stats.points) os << format_csv_row(p) << '\n';
        return;
    }

    std::vector<std::vector<std::string>> rows;
    rows.reserve(stats.points.size());
    for (const auto& p : stats.points) rows.push_back(format_cells(p));
    std::vector<std::size_t> width(ncols);
    for (std::size_t i = 0; i < ncols; ++i) {
        width[i] = std::string(columns[i]).size();
        for (const auto& r : rows) width[i] = std::max(width[i], r[i].size());
    }
    for (std::size_t i = 0; i < ncols; ++i) {
        os << (i ? "  " : "");
        os.width(std::streamsize(width[i]));
        os << columns[i];
    }
    os << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < ncols; ++i) {
            os << (i ? "  " : "");
            os.width(std::streamsize(width[i]));
            os << r[i];
        }
        os << '\n';
    }
}

} // namespace polar
