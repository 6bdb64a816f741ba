#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snowforge/evaluation.hpp"

namespace snowforge {

enum class Metric { Keypoints, MatchesPrev, PsnrDb, Ssim };

/// Column name as used in metrics CSVs. parse_metric throws SchemaError.
std::string_view metric_name(Metric m) noexcept;
Metric parse_metric(std::string_view name);

/// Reads a CSV written by write_metrics_csv. Throws SchemaError on a wrong
/// header, malformed row or a file without rows.
std::vector<MetricsRow> read_metrics_csv(const fs::path& path);
std::vector<MetricsRow> parse_metrics_csv(std::string_view text, std::string_view origin = "<memory>");

struct SummaryRow {
    std::string sequence_id;
    std::string method;
    Metric metric{Metric::Keypoints};
    std::size_t count{0};
    double mean{0.0};
    double median{0.0};
    double min{0.0};
    double max{0.0};
};

/// Per (sequence, method), in first-appearance order, one row per metric.
/// Metrics with no values (matches_prev of a 1-frame sequence) are skipped.
/// Throws SchemaError on empty input.
std::vector<SummaryRow> summarize(const std::vector<MetricsRow>& rows);
std::vector<SummaryRow> summarize(const std::vector<fs::path>& csv_paths);

std::string summary_csv(const std::vector<SummaryRow>& rows);
/// Space-aligned plain-text table.
std::string summary_table(const std::vector<SummaryRow>& rows);

/// Centred moving average; windows shrink at the ends rather than padding.
/// `window` must be odd and >= 1.
std::vector<double> moving_average(const std::vector<double>& values, int window);

struct ChartSpec {
    Metric metric{Metric::Keypoints};
    int smoothing_window{15};
    std::vector<std::string> methods;  ///< empty = every method in the data
    std::optional<std::string> sequence_id;
};

/// One plotted line as it will appear in the SVG.
struct ChartSeries {
    std::string label;
    std::vector<long long> t;
    std::vector<double> raw;
    std::vector<double> smoothed;
};

/// Series selected by `spec`, smoothed. Throws SchemaError when a series has
/// fewer than two points or nothing matches.
std::vector<ChartSeries> chart_series(const ChartSpec& spec, const std::vector<MetricsRow>& rows);

/// Deterministic SVG line chart of chart_series(spec, rows).
std::string render_chart(const ChartSpec& spec, const std::vector<MetricsRow>& rows);

}  // namespace snowforge
