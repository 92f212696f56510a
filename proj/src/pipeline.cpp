#include "decentral/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "decentral/error.hpp"

namespace decentral {

namespace {

constexpr Metric kMetrics[] = {Metric::Gini, Metric::Entropy, Metric::Nakamoto};

MetricStats stats_of(std::span<const MetricPoint> points, Metric m) {
    MetricStats s;
    s.min = s.max = points.front().value(m);
    double sum = 0.0;
    for (const auto& p : points) {
        const double v = p.value(m);
        sum += v;
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    const auto n = static_cast<double>(points.size());
    s.mean = std::clamp(sum / n, s.min, s.max);
    double ss = 0.0;
    for (const auto& p : points) {
        const double d = p.value(m) - s.mean;
        ss += d * d;
    }
    s.stddev = std::sqrt(ss / n);
    return s;
}

unsigned resolve_jobs(unsigned jobs, std::size_t work) {
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    return static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(work, 1)));
}

} // namespace

std::string_view to_string(Metric m) {
    switch (m) {
    case Metric::Gini: return "gini";
    case Metric::Entropy: return "entropy_bits";
    case Metric::Nakamoto: return "nakamoto";
    }
    return "gini";
}

Metric parse_metric(std::string_view name) {
    for (auto m : kMetrics) {
        if (to_string(m) == name) return m;
    }
    throw std::invalid_argument("unknown metric: " + std::string(name));
}

double MetricPoint::value(Metric m) const {
    switch (m) {
    case Metric::Gini: return gini;
    case Metric::Entropy: return entropy_bits;
    case Metric::Nakamoto: return static_cast<double>(nakamoto);
    }
    return 0.0;
}

const MetricStats& Summary::stats(Metric m) const {
    switch (m) {
    case Metric::Gini: return gini;
    case Metric::Entropy: return entropy_bits;
    case Metric::Nakamoto: return nakamoto;
    }
    return gini;
}

Summary summarize(std::span<const MetricPoint> points) {
    if (points.empty()) throw Error(ErrorCode::EmptySeries, "cannot summarize an empty series");
    Summary s;
    s.count = points.size();
    s.gini = stats_of(points, Metric::Gini);
    s.entropy_bits = stats_of(points, Metric::Entropy);
    s.nakamoto = stats_of(points, Metric::Nakamoto);
    return s;
}

MetricSeries flag_anomalies(MetricSeries series, double z_threshold) {
    if (series.points.size() < 3) {
        throw Error(ErrorCode::TooFewPoints, "anomaly detection needs at least 3 points, got " +
                                                 std::to_string(series.points.size()));
    }
    series.summary = summarize(series.points);
    series.flags.clear();
    for (std::size_t i = 0; i < series.points.size(); ++i) {
        for (auto m : kMetrics) {
            const auto& st = series.summary.stats(m);
            if (!(st.stddev > 0.0)) continue;
            const double z = (series.points[i].value(m) - st.mean) / st.stddev;
            if (std::abs(z) > z_threshold) series.flags.push_back({i, m, z});
        }
    }
    return series;
}

MetricPoint measure_window(const Window& window, AttributionPolicy policy, double threshold) {
    const auto t = tally(window.blocks, policy);
    const auto v = compute_all(t, threshold);
    MetricPoint p;
    p.label = window.label;
    p.first_height = window.first_height;
    p.last_height = window.last_height;
    p.block_count = window.blocks.size();
    p.producer_count = v.producer_count;
    p.gini = v.gini;
    p.entropy_bits = v.entropy_bits;
    p.nakamoto = v.nakamoto;
    return p;
}

MetricSeries run(std::span<const BlockRecord> blocks, const RunOptions& options) {
    if (!(options.threshold > 0.0 && options.threshold <= 1.0)) {
        throw Error(ErrorCode::InvalidThreshold, "threshold must lie in (0, 1]");
    }
    const auto set = make_windows(blocks, options.spec);
    if (set.windows.empty()) throw Error(ErrorCode::NoWindows, "block stream yields no windows");

    const auto n = set.windows.size();
    std::vector<MetricPoint> points(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (auto i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                points[i] = measure_window(set.windows[i], options.policy, options.threshold);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const auto jobs = resolve_jobs(options.jobs, n);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(jobs);
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }
    // Lowest failing window wins, whatever the scheduling was.
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    MetricSeries series;
    series.points = std::move(points);
    series.gaps = set.gaps;
    series.remainder = set.remainder;
    series.summary = summarize(series.points);
    if (series.points.size() >= 3) series = flag_anomalies(std::move(series), options.z_threshold);
    return series;
}

} // namespace decentral
