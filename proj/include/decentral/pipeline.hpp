#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "decentral/block_model.hpp"
#include "decentral/metrics.hpp"
#include "decentral/windowing.hpp"

namespace decentral {

enum class Metric { Gini, Entropy, Nakamoto };

std::string_view to_string(Metric m);
Metric parse_metric(std::string_view name);

inline constexpr double kDefaultZThreshold = 3.0;

struct MetricPoint {
    std::string label;
    std::uint64_t first_height = 0;
    std::uint64_t last_height = 0;
    std::size_t block_count = 0;
    std::size_t producer_count = 0;
    double gini = 0.0;
    double entropy_bits = 0.0;
    std::size_t nakamoto = 0;

    double value(Metric m) const;
};

struct AnomalyFlag {
    std::size_t window_index = 0;
    Metric metric = Metric::Gini;
    double z = 0.0;
};

struct MetricStats {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    double stddev = 0.0; // population
};

struct Summary {
    std::size_t count = 0;
    MetricStats gini;
    MetricStats entropy_bits;
    MetricStats nakamoto;

    const MetricStats& stats(Metric m) const;
};

struct MetricSeries {
    std::vector<MetricPoint> points;
    Summary summary;
    std::vector<AnomalyFlag> flags;
    std::vector<Gap> gaps;
    std::size_t remainder = 0;
};

struct RunOptions {
    AttributionPolicy policy = AttributionPolicy::Split;
    WindowSpec spec = WindowSpec::fixed(Granularity::Day);
    double threshold = kDefaultNakamotoThreshold;
    double z_threshold = kDefaultZThreshold;
    // 0 means hardware concurrency.
    unsigned jobs = 1;
};

// Throws Error{EmptySeries}.
Summary summarize(std::span<const MetricPoint> points);

// Recomputes flags from scratch: every point whose metric lies more than
// z_threshold population standard deviations from the series mean.
// Zero-variance metrics never flag. Throws Error{TooFewPoints} below 3 points.
MetricSeries flag_anomalies(MetricSeries series, double z_threshold = kDefaultZThreshold);

// Metric point for one window.
MetricPoint measure_window(const Window& window, AttributionPolicy policy, double threshold);

// Windows the stream, measures each window (in parallel when jobs != 1),
// then summarizes and flags (flags only when there are >= 3 points).
// Output is independent of the worker count. Throws Error{NoWindows}.
MetricSeries run(std::span<const BlockRecord> blocks, const RunOptions& options);

} // namespace decentral
