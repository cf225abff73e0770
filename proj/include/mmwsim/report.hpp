#pragma once

// Result serialisation: the sweep CSV, the per-slot JSONL event trace and a
// self-contained SVG chart of success rate against speed.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmwsim/engine.hpp"
#include "mmwsim/errors.hpp"

namespace mmwsim {

namespace detail {

inline std::string format_double(const char* spec, double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), spec, value);
    return buffer;
}

/// %g for axis-friendly numbers (30 rather than 30.000000).
inline std::string compact(double value) { return format_double("%g", value); }

/// Fixed six decimals for rates and means; locale-independent because the
/// process never leaves the "C" locale.
inline std::string fixed6(double value) { return format_double("%.6f", value); }

} // namespace detail

/// Render the sweep rows as CSV, LF line endings, rows already expected in
/// (speed, scheme) order.
inline std::string results_csv(std::span<const AggregateRow> rows) {
    std::string out =
        "speed_kmh,scheme,seeds,success_rate_mean,success_rate_stderr,"
        "handovers_mean,cluster_size_mean\n";
    for (const auto& row : rows) {
        out += detail::compact(row.speed_kmh);
        out += ',';
        out += row.scheme;
        out += ',';
        out += std::to_string(row.seeds);
        out += ',';
        out += detail::fixed6(row.success_rate_mean);
        out += ',';
        out += detail::fixed6(row.success_rate_stderr);
        out += ',';
        out += detail::fixed6(row.handovers_mean);
        out += ',';
        out += detail::fixed6(row.cluster_size_mean);
        out += '\n';
    }
    return out;
}

/// Write a file atomically: the content lands under a temporary name and is
/// renamed into place, so a failed run never leaves a partial file.
inline void write_text_atomic(const std::filesystem::path& path,
                              const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream stream(tmp, std::ios::binary | std::ios::trunc);
        if (!stream) throw IoError("cannot open " + tmp.string() + " for writing");
        stream.write(content.data(),
                     static_cast<std::streamsize>(content.size()));
        if (!stream) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot move " + tmp.string() + " into place: " +
                      ec.message());
    }
}

/// One trace record as a JSON line.
inline std::string jsonl_line(const TraceRecord& record) {
    nlohmann::json j;
    j["speed_kmh"] = record.speed_kmh;
    j["scheme"] = to_string(record.scheme);
    j["run"] = record.run_index;
    j["slot"] = record.outcome.slot;
    j["success"] = record.outcome.success;
    j["cause"] = to_string(record.outcome.cause);
    j["best_sinr_db"] = std::isfinite(record.outcome.best_sinr_db)
                            ? record.outcome.best_sinr_db
                            : -1e9;
    j["serving"] = record.serving;
    j["anchor"] = record.anchor;
    if (record.cluster_update && !record.cluster_update->empty()) {
        nlohmann::json u;
        u["additions"] = record.cluster_update->additions;
        u["removals"] = record.cluster_update->removals;
        u["anchor_from"] = record.cluster_update->anchor_from;
        u["anchor_to"] = record.cluster_update->anchor_to;
        j["cluster_update"] = u;
    }
    if (record.handover) {
        nlohmann::json h;
        h["from"] = record.handover->from_gnb;
        h["to"] = record.handover->to_gnb;
        h["interruption_slots"] = record.handover->interruption_slots;
        j["handover"] = h;
    }
    return j.dump();
}

/// Self-contained SVG line chart of mean success rate against speed, one
/// series per scheme with +/- one standard error whiskers.  No external
/// resources: inline styling only, generic font stack.
inline std::string render_success_figure(std::span<const AggregateRow> rows) {
    const double width = 640, height = 420;
    const double left = 70, right = 24, top = 40, bottom = 56;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    std::vector<double> speeds;
    double y_min = 1.0, y_max = 0.0;
    for (const auto& row : rows) {
        if (std::find(speeds.begin(), speeds.end(), row.speed_kmh) == speeds.end())
            speeds.push_back(row.speed_kmh);
        y_min = std::min(y_min, row.success_rate_mean - 3 * row.success_rate_stderr);
        y_max = std::max(y_max, row.success_rate_mean + 3 * row.success_rate_stderr);
    }
    std::sort(speeds.begin(), speeds.end());
    if (speeds.empty()) return "<svg xmlns=\"http://www.w3.org/2000/svg\"/>";
    y_min = std::max(0.0, std::floor((y_min - 0.005) * 100.0) / 100.0);
    y_max = std::min(1.0, std::ceil((y_max + 0.005) * 100.0) / 100.0);
    if (y_max - y_min < 0.02) {
        y_min = std::max(0.0, y_min - 0.01);
        y_max = std::min(1.0, y_max + 0.01);
    }
    const double x_lo = speeds.front(), x_hi = speeds.back();
    const double x_span = x_hi > x_lo ? x_hi - x_lo : 1.0;

    auto x_of = [&](double speed) {
        return left + (speed - x_lo) / x_span * plot_w;
    };
    auto y_of = [&](double rate) {
        return top + (y_max - rate) / (y_max - y_min) * plot_h;
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
           detail::compact(width) + "\" height=\"" + detail::compact(height) +
           "\" viewBox=\"0 0 " + detail::compact(width) + " " +
           detail::compact(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    svg += "<text x=\"" + detail::compact(width / 2) +
           "\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\" "
           "text-anchor=\"middle\">Average success rate vs UE speed</text>\n";

    // Axes and gridlines.
    for (int tick = 0; tick <= 5; ++tick) {
        const double rate = y_min + (y_max - y_min) * tick / 5.0;
        const double y = y_of(rate);
        svg += "<line x1=\"" + detail::compact(left) + "\" y1=\"" +
               detail::compact(y) + "\" x2=\"" + detail::compact(left + plot_w) +
               "\" y2=\"" + detail::compact(y) +
               "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + detail::compact(left - 8) + "\" y=\"" +
               detail::compact(y + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\" "
               "text-anchor=\"end\">" +
               detail::format_double("%.3f", rate) + "</text>\n";
    }
    for (double speed : speeds) {
        const double x = x_of(speed);
        svg += "<line x1=\"" + detail::compact(x) + "\" y1=\"" +
               detail::compact(top + plot_h) + "\" x2=\"" + detail::compact(x) +
               "\" y2=\"" + detail::compact(top + plot_h + 5) +
               "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + detail::compact(x) + "\" y=\"" +
               detail::compact(top + plot_h + 20) +
               "\" font-family=\"sans-serif\" font-size=\"11\" "
               "text-anchor=\"middle\">" +
               detail::compact(speed) + "</text>\n";
    }
    svg += "<line x1=\"" + detail::compact(left) + "\" y1=\"" +
           detail::compact(top) + "\" x2=\"" + detail::compact(left) +
           "\" y2=\"" + detail::compact(top + plot_h) +
           "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + detail::compact(left) + "\" y1=\"" +
           detail::compact(top + plot_h) + "\" x2=\"" +
           detail::compact(left + plot_w) + "\" y2=\"" +
           detail::compact(top + plot_h) +
           "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + detail::compact(left + plot_w / 2) + "\" y=\"" +
           detail::compact(height - 14) +
           "\" font-family=\"sans-serif\" font-size=\"12\" "
           "text-anchor=\"middle\">UE speed (km/h)</text>\n";
    svg += "<text x=\"18\" y=\"" + detail::compact(top + plot_h / 2) +
           "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
           "transform=\"rotate(-90 18 " + detail::compact(top + plot_h / 2) +
           ")\">average success rate</text>\n";

    const struct {
        const char* scheme;
        const char* colour;
        const char* label;
    } series[] = {{"multi", "#4c72b0", "multi-connectivity cluster"},
                  {"single", "#c44e52", "single-connectivity handover"}};

    double legend_y = top + 12;
    for (const auto& s : series) {
        std::string points;
        std::string whiskers;
        std::string markers;
        for (double speed : speeds) {
            for (const auto& row : rows) {
                if (row.speed_kmh != speed || row.scheme != s.scheme) continue;
                const double x = x_of(speed);
                const double y = y_of(row.success_rate_mean);
                points += detail::compact(x) + "," + detail::compact(y) + " ";
                const double y1 =
                    y_of(row.success_rate_mean - row.success_rate_stderr);
                const double y0 =
                    y_of(row.success_rate_mean + row.success_rate_stderr);
                whiskers += "<line x1=\"" + detail::compact(x) + "\" y1=\"" +
                            detail::compact(y0) + "\" x2=\"" + detail::compact(x) +
                            "\" y2=\"" + detail::compact(y1) + "\" stroke=\"" +
                            s.colour + "\" stroke-width=\"1.5\"/>\n";
                markers += "<circle cx=\"" + detail::compact(x) + "\" cy=\"" +
                           detail::compact(y) + "\" r=\"3.5\" fill=\"" +
                           s.colour + "\"/>\n";
            }
        }
        if (points.empty()) continue;
        svg += "<polyline points=\"" + points + "\" fill=\"none\" stroke=\"" +
               s.colour + "\" stroke-width=\"2\"/>\n";
        svg += whiskers;
        svg += markers;
        svg += "<line x1=\"" + detail::compact(left + plot_w - 232) + "\" y1=\"" +
               detail::compact(legend_y) + "\" x2=\"" +
               detail::compact(left + plot_w - 208) + "\" y2=\"" +
               detail::compact(legend_y) + "\" stroke=\"" + s.colour +
               "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + detail::compact(left + plot_w - 200) + "\" y=\"" +
               detail::compact(legend_y + 4) +
               "\" font-family=\"sans-serif\" font-size=\"11\">" + s.label +
               "</text>\n";
        legend_y += 18;
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace mmwsim
