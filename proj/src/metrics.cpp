#include "decentral/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "decentral/error.hpp"

namespace decentral {

namespace {

// Zero credits are dropped so every metric sees the same producer set.
std::vector<double> positive_credits(std::span<const double> credits) {
    if (credits.empty()) throw Error(ErrorCode::EmptyTally, "tally has no producers");
    std::vector<double> out;
    out.reserve(credits.size());
    for (double c : credits) {
        if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("credits must be finite and non-negative");
        if (c > 0.0) out.push_back(c);
    }
    if (out.empty()) throw Error(ErrorCode::ZeroTotalCredit, "tally has zero total credit");
    return out;
}

double sum(std::span<const double> values) {
    return std::accumulate(values.begin(), values.end(), 0.0);
}

} // namespace

double gini(std::span<const double> credits) {
    auto sorted = positive_credits(credits);
    const auto n = sorted.size();
    if (n == 1) return 0.0;
    const double total = sum(sorted);
    std::sort(sorted.begin(), sorted.end());

    // For ascending x, sum_{i,j} |x_i - x_j| = 2 * sum_i (2i - n - 1) x_i  (i 1-based).
    double weighted = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double coeff = 2.0 * static_cast<double>(i + 1) - static_cast<double>(n) - 1.0;
        weighted += coeff * sorted[i];
    }
    const double g = weighted / (static_cast<double>(n) * total);
    return std::clamp(g, 0.0, 1.0 - 1.0 / static_cast<double>(n));
}

double shannon_entropy(std::span<const double> credits) {
    const auto positive = positive_credits(credits);
    const double total = sum(positive);
    double h = 0.0;
    for (double c : positive) {
        const double p = c / total;
        h -= p * std::log2(p);
    }
    return std::clamp(h, 0.0, std::log2(static_cast<double>(positive.size())));
}

std::size_t nakamoto(std::span<const double> credits, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) {
        throw Error(ErrorCode::InvalidThreshold, "threshold must lie in (0, 1], got " + std::to_string(threshold));
    }
    auto sorted = positive_credits(credits);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const double total = sum(sorted);

    const double target = threshold * total * (1.0 - kShareTolerance);
    double cumulative = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        cumulative += sorted[k];
        if (cumulative >= target) return k + 1;
    }
    return sorted.size();
}

MetricValue compute_all(std::span<const double> credits, double threshold) {
    const auto positive = positive_credits(credits);
    MetricValue v;
    v.gini = gini(positive);
    v.entropy_bits = shannon_entropy(positive);
    v.nakamoto = nakamoto(positive, threshold);
    v.producer_count = positive.size();
    v.total_credit = sum(positive);
    return v;
}

double gini(const ProducerTally& tally) { return gini(tally.values()); }
double shannon_entropy(const ProducerTally& tally) { return shannon_entropy(tally.values()); }
std::size_t nakamoto(const ProducerTally& tally, double threshold) { return nakamoto(tally.values(), threshold); }
MetricValue compute_all(const ProducerTally& tally, double threshold) { return compute_all(tally.values(), threshold); }

} // namespace decentral
