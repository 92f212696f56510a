#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "decentral/block_model.hpp"
#include "decentral/metrics.hpp"

namespace decentral {

// A miner's share over an optional inclusive range of block positions.
// The same id may appear several times with disjoint ranges.
struct MinerProfile {
    std::string id;
    double share = 0.0;
    std::optional<std::size_t> start;
    std::optional<std::size_t> end;

    bool active_at(std::size_t position) const;
};

struct GenerateOptions {
    std::size_t total_blocks = 0;
    std::int64_t block_interval_seconds = 600;
    std::int64_t start_time = 1546300800; // 2019-01-01T00:00:00Z
    std::uint64_t start_height = 0;
    std::uint64_t seed = 0;
};

// Throws Error{InvalidShares} if the active shares do not sum to 1 (within
// 1e-9) at some position in [0, total_blocks), or Error{InvalidProfile} on
// malformed entries.
void validate_profiles(std::span<const MinerProfile> profiles, std::size_t total_blocks);

// i.i.d. categorical producer per block from the active shares, driven by
// mt19937_64 with a portable uniform conversion so streams are reproducible
// across platforms.
std::vector<BlockRecord> generate(std::span<const MinerProfile> profiles,
                                  const GenerateOptions& options);

// Metrics of the true share distribution. Throws Error{NonStationary} when
// any profile has an interval.
MetricValue expected_metrics(std::span<const MinerProfile> profiles,
                             double threshold = kDefaultNakamotoThreshold);

// JSON array of {"id", "share", "start"?, "end"?}.
std::vector<MinerProfile> parse_profiles(const std::string& json_text);
std::vector<MinerProfile> load_profiles(const std::string& path);

} // namespace decentral
