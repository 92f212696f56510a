#pragma once

#include <cstddef>
#include <span>

#include "decentral/block_model.hpp"

namespace decentral {

inline constexpr double kDefaultNakamotoThreshold = 0.51;

// Relative slack used when comparing a cumulative share against the
// Nakamoto threshold, so exact ties survive floating-point rounding.
inline constexpr double kShareTolerance = 1e-12;

struct MetricValue {
    double gini = 0.0;
    double entropy_bits = 0.0;
    std::size_t nakamoto = 0;
    std::size_t producer_count = 0;
    double total_credit = 0.0;
};

// Mean absolute difference over all ordered producer pairs divided by twice
// the total credit times the producer count. Evaluated in O(n log n) from the
// sorted credits.
double gini(const ProducerTally& tally);
double gini(std::span<const double> credits);

// Base-2 Shannon entropy of the normalized credit shares.
double shannon_entropy(const ProducerTally& tally);
double shannon_entropy(std::span<const double> credits);

// Smallest number of producers whose combined share reaches `threshold`
// (largest producers first). Throws Error{InvalidThreshold} unless
// 0 < threshold <= 1.
std::size_t nakamoto(const ProducerTally& tally, double threshold = kDefaultNakamotoThreshold);
std::size_t nakamoto(std::span<const double> credits, double threshold = kDefaultNakamotoThreshold);

MetricValue compute_all(const ProducerTally& tally, double threshold = kDefaultNakamotoThreshold);
MetricValue compute_all(std::span<const double> credits, double threshold = kDefaultNakamotoThreshold);

} // namespace decentral
