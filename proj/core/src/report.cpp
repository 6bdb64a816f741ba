#include "snowforge/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "csv.hpp"

namespace snowforge {

std::string_view metric_name(Metric m) noexcept {
    switch (m) {
        case Metric::Keypoints: return "keypoints";
        case Metric::MatchesPrev: return "matches_prev";
        case Metric::PsnrDb: return "psnr_db";
        case Metric::Ssim: return "ssim";
    }
    return "unknown";
}

Metric parse_metric(std::string_view name) {
    for (Metric m : {Metric::Keypoints, Metric::MatchesPrev, Metric::PsnrDb, Metric::Ssim}) {
        if (metric_name(m) == name) return m;
    }
    throw Error(Errc::SchemaError, "unknown metric '" + std::string(name) + "'");
}

namespace {

constexpr Metric kAllMetrics[] = {Metric::Keypoints, Metric::MatchesPrev, Metric::PsnrDb, Metric::Ssim};

std::optional<double> value_of(const MetricsRow& r, Metric m) {
    switch (m) {
        case Metric::Keypoints: return r.keypoints;
        case Metric::MatchesPrev:
            if (r.matches_prev) return *r.matches_prev;
            return std::nullopt;
        case Metric::PsnrDb: return r.psnr_db;
        case Metric::Ssim: return r.ssim;
    }
    return std::nullopt;
}

template <typename T>
bool parse_number(const std::string& s, T& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

}  // namespace

std::vector<MetricsRow> parse_metrics_csv(std::string_view text, std::string_view origin) {
    std::vector<MetricsRow> rows;
    std::vector<std::string> fields;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::size_t pos = 0;
    auto fail = [&](const std::string& what) -> Error {
        return Error(Errc::SchemaError, std::string(origin) + ":" + std::to_string(line_no) + ": " + what);
    };
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != kMetricsHeader) throw fail("expected header '" + std::string(kMetricsHeader) + "'");
            header_seen = true;
            continue;
        }
        if (!csv::split(line, fields)) throw fail("unbalanced quote");
        if (fields.size() != 7) throw fail("expected 7 fields, found " + std::to_string(fields.size()));
        MetricsRow r;
        r.sequence_id = fields[0];
        r.method = fields[1];
        if (!parse_number(fields[2], r.t) || r.t < 0) throw fail("bad t '" + fields[2] + "'");
        if (!parse_number(fields[3], r.keypoints) || r.keypoints < 0) throw fail("bad keypoints '" + fields[3] + "'");
        if (!fields[4].empty()) {
            int m = 0;
            if (!parse_number(fields[4], m) || m < 0) throw fail("bad matches_prev '" + fields[4] + "'");
            r.matches_prev = m;
        }
        if (!parse_double(fields[5], r.psnr_db)) throw fail("bad psnr_db '" + fields[5] + "'");
        if (!parse_double(fields[6], r.ssim)) throw fail("bad ssim '" + fields[6] + "'");
        rows.push_back(std::move(r));
    }
    if (!header_seen) throw Error(Errc::SchemaError, std::string(origin) + ": empty metrics file");
    if (rows.empty()) throw Error(Errc::SchemaError, std::string(origin) + ": empty metrics file (header only)");
    return rows;
}

std::vector<MetricsRow> read_metrics_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_metrics_csv(ss.str(), path.string());
}

std::vector<SummaryRow> summarize(const std::vector<MetricsRow>& rows) {
    if (rows.empty()) throw Error(Errc::SchemaError, "no metrics rows to summarize");
    std::vector<std::pair<std::string, std::string>> order;
    std::map<std::pair<std::string, std::string>, std::vector<const MetricsRow*>> groups;
    for (const auto& r : rows) {
        auto key = std::make_pair(r.sequence_id, r.method);
        auto [it, inserted] = groups.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.push_back(&r);
    }
    std::vector<SummaryRow> out;
    for (const auto& key : order) {
        const auto& group = groups[key];
        for (Metric m : kAllMetrics) {
            std::vector<double> values;
            for (const auto* r : group) {
                if (auto v = value_of(*r, m)) values.push_back(*v);
            }
            if (values.empty()) continue;
            const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
            out.push_back({key.first, key.second, m, values.size(), mean_of(values), median_of(values), *lo, *hi});
        }
    }
    return out;
}

std::vector<SummaryRow> summarize(const std::vector<fs::path>& csv_paths) {
    std::vector<MetricsRow> all;
    for (const auto& p : csv_paths) {
        auto rows = read_metrics_csv(p);
        all.insert(all.end(), std::make_move_iterator(rows.begin()), std::make_move_iterator(rows.end()));
    }
    return summarize(all);
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::string out = "sequence_id,method,metric,count,mean,median,min,max\n";
    for (const auto& r : rows) {
        out += csv::quote(r.sequence_id) + ',' + csv::quote(r.method) + ',' + std::string(metric_name(r.metric)) + ',' +
               std::to_string(r.count) + ',' + fmt("%.6f", r.mean) + ',' + fmt("%.6f", r.median) + ',' +
               fmt("%.6f", r.min) + ',' + fmt("%.6f", r.max) + '\n';
    }
    return out;
}

std::string summary_table(const std::vector<SummaryRow>& rows) {
    std::vector<std::vector<std::string>> cells;
    cells.push_back({"sequence", "method", "metric", "n", "mean", "median", "min", "max"});
    for (const auto& r : rows) {
        cells.push_back({r.sequence_id, r.method, std::string(metric_name(r.metric)), std::to_string(r.count),
                         fmt("%.3f", r.mean), fmt("%.3f", r.median), fmt("%.3f", r.min), fmt("%.3f", r.max)});
    }
    std::vector<std::size_t> width(cells.front().size(), 0);
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::string out;
    for (const auto& row : cells) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            const bool numeric = c >= 3;
            const std::string pad(width[c] - row[c].size(), ' ');
            line += numeric ? pad + row[c] : row[c] + pad;
            if (c + 1 < row.size()) line += "  ";
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out += line + '\n';
    }
    return out;
}

std::vector<double> moving_average(const std::vector<double>& values, int window) {
    if (window < 1 || window % 2 == 0) {
        throw Error(Errc::InvalidArgument, "smoothing window must be odd and >= 1, got " + std::to_string(window));
    }
    const auto n = static_cast<long long>(values.size());
    const long long half = window / 2;
    std::vector<double> out(values.size());
    for (long long i = 0; i < n; ++i) {
        const long long lo = std::max(0LL, i - half);
        const long long hi = std::min(n - 1, i + half);
        double sum = 0.0;
        for (long long k = lo; k <= hi; ++k) sum += values[static_cast<std::size_t>(k)];
        out[static_cast<std::size_t>(i)] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

std::vector<ChartSeries> chart_series(const ChartSpec& spec, const std::vector<MetricsRow>& rows) {
    std::vector<std::string> sequences;
    for (const auto& r : rows) {
        if (spec.sequence_id && r.sequence_id != *spec.sequence_id) continue;
        if (std::find(sequences.begin(), sequences.end(), r.sequence_id) == sequences.end()) {
            sequences.push_back(r.sequence_id);
        }
    }
    const bool multi = sequences.size() > 1;

    std::vector<std::pair<std::string, std::string>> order;
    std::map<std::pair<std::string, std::string>, std::vector<std::pair<long long, double>>> points;
    for (const auto& r : rows) {
        if (spec.sequence_id && r.sequence_id != *spec.sequence_id) continue;
        if (!spec.methods.empty() &&
            std::find(spec.methods.begin(), spec.methods.end(), r.method) == spec.methods.end()) {
            continue;
        }
        const auto v = value_of(r, spec.metric);
        if (!v) continue;
        auto key = std::make_pair(r.sequence_id, r.method);
        auto [it, inserted] = points.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.emplace_back(r.t, *v);
    }
    if (!spec.methods.empty()) {
        // Listed methods plot in the order given.
        std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
            auto pos = [&](const std::string& m) {
                return std::find(spec.methods.begin(), spec.methods.end(), m) - spec.methods.begin();
            };
            return pos(a.second) < pos(b.second);
        });
    }
    if (order.empty()) throw Error(Errc::SchemaError, "no data for metric " + std::string(metric_name(spec.metric)));

    std::vector<ChartSeries> out;
    for (const auto& key : order) {
        auto pts = points[key];
        std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        ChartSeries s;
        s.label = multi ? key.first + "/" + key.second : key.second;
        if (pts.size() < 2) {
            throw Error(Errc::SchemaError, "series '" + s.label + "' has fewer than two points");
        }
        for (const auto& [t, v] : pts) {
            s.t.push_back(t);
            s.raw.push_back(v);
        }
        s.smoothed = moving_average(s.raw, spec.smoothing_window);
        out.push_back(std::move(s));
    }
    return out;
}

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string escape_xml(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string chart_title(Metric m) {
    switch (m) {
        case Metric::Keypoints: return "Keypoints per frame (lower is better)";
        case Metric::MatchesPrev: return "Frame-to-frame matches (higher is better)";
        case Metric::PsnrDb: return "PSNR vs clean [dB] (higher is better)";
        case Metric::Ssim: return "SSIM vs clean (higher is better)";
    }
    return "";
}

// Tick label with just enough decimals for the axis span.
std::string tick_label(double v, double span) {
    if (span >= 20.0) return fmt("%.0f", v);
    if (span >= 2.0) return fmt("%.1f", v);
    if (span >= 0.2) return fmt("%.2f", v);
    return fmt("%.4f", v);
}

}  // namespace

std::string render_chart(const ChartSpec& spec, const std::vector<MetricsRow>& rows) {
    const auto series = chart_series(spec, rows);

    constexpr double kWidth = 800, kHeight = 450;
    constexpr double kLeft = 80, kRight = 190, kTop = 50, kBottom = 60;
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;

    long long t_min = series.front().t.front(), t_max = series.front().t.front();
    double v_min = series.front().raw.front(), v_max = v_min;
    for (const auto& s : series) {
        t_min = std::min(t_min, s.t.front());
        t_max = std::max(t_max, s.t.back());
        for (double v : s.raw) {
            v_min = std::min(v_min, v);
            v_max = std::max(v_max, v);
        }
    }
    if (v_max - v_min < 1e-12) {
        v_min -= 1.0;
        v_max += 1.0;
    } else {
        const double pad = 0.05 * (v_max - v_min);
        v_min -= pad;
        v_max += pad;
    }
    if (t_max == t_min) ++t_max;

    auto px = [&](double t) { return kLeft + (t - static_cast<double>(t_min)) / static_cast<double>(t_max - t_min) * plot_w; };
    auto py = [&](double v) { return kTop + (v_max - v) / (v_max - v_min) * plot_h; };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"450\" viewBox=\"0 0 800 450\" "
           "font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"450\" fill=\"#ffffff\"/>\n";
    svg += "<text x=\"" + fmt("%.1f", kLeft + plot_w / 2) + "\" y=\"28\" text-anchor=\"middle\" font-size=\"15\">" +
           escape_xml(chart_title(spec.metric)) + "</text>\n";
    if (spec.smoothing_window > 1) {
        svg += "<text x=\"" + fmt("%.1f", kLeft + plot_w / 2) +
               "\" y=\"44\" text-anchor=\"middle\" font-size=\"11\" fill=\"#555555\">moving average over " +
               std::to_string(spec.smoothing_window) + " frames; raw values faint</text>\n";
    }

    // Axes and grid.
    svg += "<g stroke=\"#000000\" stroke-width=\"1\">\n";
    svg += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + fmt("%.2f", kTop + plot_h) + "\" x2=\"" +
           fmt("%.2f", kLeft + plot_w) + "\" y2=\"" + fmt("%.2f", kTop + plot_h) + "\"/>\n";
    svg += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + fmt("%.2f", kTop) + "\" x2=\"" + fmt("%.2f", kLeft) +
           "\" y2=\"" + fmt("%.2f", kTop + plot_h) + "\"/>\n";
    svg += "</g>\n";
    constexpr int kTicks = 5;
    svg += "<g fill=\"#000000\">\n";
    for (int i = 0; i <= kTicks; ++i) {
        const double v = v_min + (v_max - v_min) * i / kTicks;
        const double y = py(v);
        svg += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + fmt("%.2f", y) + "\" x2=\"" + fmt("%.2f", kLeft + plot_w) +
               "\" y2=\"" + fmt("%.2f", y) + "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + fmt("%.2f", kLeft - 6) + "\" y=\"" + fmt("%.2f", y + 4) + "\" text-anchor=\"end\">" +
               tick_label(v, v_max - v_min) + "</text>\n";
        const double t = static_cast<double>(t_min) + static_cast<double>(t_max - t_min) * i / kTicks;
        svg += "<text x=\"" + fmt("%.2f", px(t)) + "\" y=\"" + fmt("%.2f", kTop + plot_h + 18) +
               "\" text-anchor=\"middle\">" + fmt("%.0f", t) + "</text>\n";
    }
    svg += "</g>\n";
    svg += "<text x=\"" + fmt("%.1f", kLeft + plot_w / 2) + "\" y=\"" + fmt("%.1f", kHeight - 18) +
           "\" text-anchor=\"middle\">frame index t</text>\n";
    svg += "<text x=\"20\" y=\"" + fmt("%.1f", kTop + plot_h / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
           fmt("%.1f", kTop + plot_h / 2) + ")\">" + std::string(metric_name(spec.metric)) + "</text>\n";

    auto polyline = [&](const ChartSeries& s, const std::vector<double>& values) {
        std::string pts;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) pts += ' ';
            pts += fmt("%.2f", px(static_cast<double>(s.t[i]))) + ',' + fmt("%.2f", py(values[i]));
        }
        return pts;
    };
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const std::string color = kPalette[k % std::size(kPalette)];
        if (spec.smoothing_window > 1) {
            svg += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-opacity=\"0.25\" stroke-width=\"1\" points=\"" +
                   polyline(s, s.raw) + "\"/>\n";
        }
        svg += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\" data-label=\"" + escape_xml(s.label) +
               "\" points=\"" + polyline(s, s.smoothed) + "\"/>\n";
        const double ly = kTop + 10 + 20.0 * static_cast<double>(k);
        svg += "<line x1=\"" + fmt("%.1f", kLeft + plot_w + 15) + "\" y1=\"" + fmt("%.1f", ly) + "\" x2=\"" +
               fmt("%.1f", kLeft + plot_w + 40) + "\" y2=\"" + fmt("%.1f", ly) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + fmt("%.1f", kLeft + plot_w + 46) + "\" y=\"" + fmt("%.1f", ly + 4) + "\">" +
               escape_xml(s.label) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace snowforge
