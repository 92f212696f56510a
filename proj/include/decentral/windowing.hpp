#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "decentral/block_model.hpp"

namespace decentral {

enum class Granularity { Day, Week, Month };
enum class WindowKind { FixedCalendar, SlidingBlocks };
enum class ChainPreset { Btc, Eth };

std::string_view to_string(Granularity g);
Granularity parse_granularity(std::string_view name);
ChainPreset parse_chain_preset(std::string_view name);

// Approximate blocks per day/week/month for a chain: btc 144/1008/4320,
// eth 6000/42000/180000.
std::size_t preset_window_size(ChainPreset chain, Granularity g);

struct WindowSpec {
    WindowKind kind = WindowKind::FixedCalendar;
    Granularity granularity = Granularity::Day;
    std::size_t size_n = 0;
    std::size_t step_m = 0;

    static WindowSpec fixed(Granularity g);
    // Throws Error{InvalidWindowSpec} unless 1 <= step <= size.
    static WindowSpec sliding(std::size_t size, std::size_t step);
    // Step defaults to half the window (at least one block).
    static WindowSpec sliding(std::size_t size);
    static WindowSpec preset(ChainPreset chain, Granularity g);

    void validate() const;
};

struct Window {
    std::size_t index = 0;
    std::uint64_t first_height = 0;
    std::uint64_t last_height = 0;
    std::string label;
    std::span<const BlockRecord> blocks;
};

// An empty calendar bucket between the first and last populated bucket.
struct Gap {
    std::string label;
    std::int64_t start_time = 0;
};

// Windows over a block stream. For fixed windows the set owns a copy of the
// blocks regrouped by bucket (timestamps may run backwards); sliding windows
// view the caller's sequence, which must outlive the set.
class WindowSet {
public:
    WindowSet() = default;
    WindowSet(const WindowSet&) = delete;
    WindowSet& operator=(const WindowSet&) = delete;
    WindowSet(WindowSet&&) noexcept = default;
    WindowSet& operator=(WindowSet&&) noexcept = default;

    std::vector<Window> windows;
    std::vector<Gap> gaps;
    // Trailing blocks not covered by any full sliding window.
    std::size_t remainder = 0;

private:
    friend WindowSet fixed_windows(std::span<const BlockRecord>, Granularity);
    std::vector<BlockRecord> storage_;
};

// Calendar bucket label for a timestamp: "2019-01-14", "2019-W03", "2019-01".
std::string calendar_label(std::int64_t timestamp, Granularity g);

WindowSet fixed_windows(std::span<const BlockRecord> blocks, Granularity g);

// floor((S - N) / M) + 1 windows; window i covers positions [i*M, i*M + N - 1].
// Throws Error{WindowLargerThanStream} when N > S.
WindowSet sliding_windows(std::span<const BlockRecord> blocks, std::size_t size_n,
                          std::size_t step_m);

std::size_t sliding_window_count(std::size_t total, std::size_t size_n, std::size_t step_m);

WindowSet make_windows(std::span<const BlockRecord> blocks, const WindowSpec& spec);

} // namespace decentral
