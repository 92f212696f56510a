#include "decentral/windowing.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "decentral/error.hpp"

namespace decentral {

namespace {

using std::chrono::days;
using std::chrono::sys_days;
using std::chrono::year_month_day;

constexpr std::int64_t kSecondsPerDay = 86400;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    const auto q = a / b;
    return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

sys_days day_of(std::int64_t timestamp) {
    return sys_days{days{floor_div(timestamp, kSecondsPerDay)}};
}

sys_days monday_of(sys_days d) {
    const auto iso = std::chrono::weekday{d}.iso_encoding(); // Mon = 1 .. Sun = 7
    return d - days{iso - 1};
}

// Ordinal key of the calendar bucket holding `d`; consecutive buckets differ by 1.
std::int64_t bucket_key(sys_days d, Granularity g) {
    switch (g) {
    case Granularity::Day: return d.time_since_epoch().count();
    case Granularity::Week: return floor_div(monday_of(d).time_since_epoch().count(), 7);
    case Granularity::Month: {
        const year_month_day ymd{d};
        return static_cast<std::int64_t>(static_cast<int>(ymd.year())) * 12 +
               static_cast<std::int64_t>(static_cast<unsigned>(ymd.month())) - 1;
    }
    }
    return 0;
}

sys_days bucket_start(std::int64_t key, Granularity g) {
    switch (g) {
    case Granularity::Day: return sys_days{days{key}};
    case Granularity::Week: return sys_days{days{key * 7 + 4}}; // day 4 = 1970-01-05, a Monday
    case Granularity::Month: {
        const auto y = std::chrono::year{static_cast<int>(floor_div(key, 12))};
        const auto m = std::chrono::month{static_cast<unsigned>(key - floor_div(key, 12) * 12 + 1)};
        return sys_days{y / m / 1};
    }
    }
    return {};
}

std::string label_of(sys_days d, Granularity g) {
    char buf[32];
    switch (g) {
    case Granularity::Day: {
        const year_month_day ymd{d};
        std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
        break;
    }
    case Granularity::Week: {
        // ISO week-year is the year of the week's Thursday.
        const auto thursday = monday_of(d) + days{3};
        const auto iso_year = year_month_day{thursday}.year();
        const sys_days jan1{iso_year / std::chrono::January / 1};
        const auto week = (thursday - jan1).count() / 7 + 1;
        std::snprintf(buf, sizeof buf, "%04d-W%02d", static_cast<int>(iso_year), static_cast<int>(week));
        break;
    }
    case Granularity::Month: {
        const year_month_day ymd{d};
        std::snprintf(buf, sizeof buf, "%04d-%02u", static_cast<int>(ymd.year()),
                      static_cast<unsigned>(ymd.month()));
        break;
    }
    }
    return buf;
}

} // namespace

std::string_view to_string(Granularity g) {
    switch (g) {
    case Granularity::Day: return "day";
    case Granularity::Week: return "week";
    case Granularity::Month: return "month";
    }
    return "day";
}

Granularity parse_granularity(std::string_view name) {
    if (name == "day") return Granularity::Day;
    if (name == "week") return Granularity::Week;
    if (name == "month") return Granularity::Month;
    throw std::invalid_argument("unknown granularity: " + std::string(name));
}

ChainPreset parse_chain_preset(std::string_view name) {
    if (name == "btc") return ChainPreset::Btc;
    if (name == "eth") return ChainPreset::Eth;
    throw std::invalid_argument("unknown chain preset: " + std::string(name));
}

std::size_t preset_window_size(ChainPreset chain, Granularity g) {
    const std::size_t per_day = chain == ChainPreset::Btc ? 144 : 6000;
    switch (g) {
    case Granularity::Day: return per_day;
    case Granularity::Week: return per_day * 7;
    case Granularity::Month: return per_day * 30;
    }
    return per_day;
}

WindowSpec WindowSpec::fixed(Granularity g) {
    WindowSpec s;
    s.kind = WindowKind::FixedCalendar;
    s.granularity = g;
    return s;
}

WindowSpec WindowSpec::sliding(std::size_t size, std::size_t step) {
    WindowSpec s;
    s.kind = WindowKind::SlidingBlocks;
    s.size_n = size;
    s.step_m = step;
    s.validate();
    return s;
}

WindowSpec WindowSpec::sliding(std::size_t size) {
    return sliding(size, std::max<std::size_t>(1, size / 2));
}

WindowSpec WindowSpec::preset(ChainPreset chain, Granularity g) {
    auto s = sliding(preset_window_size(chain, g));
    s.granularity = g;
    return s;
}

void WindowSpec::validate() const {
    if (kind != WindowKind::SlidingBlocks) return;
    if (size_n == 0) throw Error(ErrorCode::InvalidWindowSpec, "window size must be positive");
    if (step_m == 0 || step_m > size_n) {
        throw Error(ErrorCode::InvalidWindowSpec,
                    "step must satisfy 1 <= M <= N (N=" + std::to_string(size_n) +
                        ", M=" + std::to_string(step_m) + ")");
    }
}

std::string calendar_label(std::int64_t timestamp, Granularity g) {
    return label_of(day_of(timestamp), g);
}

WindowSet fixed_windows(std::span<const BlockRecord> blocks, Granularity g) {
    WindowSet set;
    if (blocks.empty()) return set;

    // Buckets keep file order within themselves.
    std::map<std::int64_t, std::vector<std::size_t>> buckets;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        buckets[bucket_key(day_of(blocks[i].timestamp), g)].push_back(i);
    }

    set.storage_.reserve(blocks.size());
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    for (const auto& [key, members] : buckets) {
        const auto begin = set.storage_.size();
        for (auto i : members) set.storage_.push_back(blocks[i]);
        ranges.emplace_back(begin, set.storage_.size());
    }

    std::optional<std::int64_t> previous;
    std::size_t r = 0;
    for (const auto& [key, members] : buckets) {
        if (previous) {
            for (auto k = *previous + 1; k < key; ++k) {
                const auto start = bucket_start(k, g);
                set.gaps.push_back({label_of(start, g), start.time_since_epoch().count() * kSecondsPerDay});
            }
        }
        previous = key;

        const auto [begin, end] = ranges[r++];
        Window w;
        w.index = set.windows.size();
        w.blocks = std::span<const BlockRecord>(set.storage_).subspan(begin, end - begin);
        const auto [lo, hi] = std::minmax_element(w.blocks.begin(), w.blocks.end(),
                                                  [](const auto& a, const auto& b) { return a.height < b.height; });
        w.first_height = lo->height;
        w.last_height = hi->height;
        w.label = label_of(bucket_start(key, g), g);
        set.windows.push_back(std::move(w));
    }
    return set;
}

std::size_t sliding_window_count(std::size_t total, std::size_t size_n, std::size_t step_m) {
    if (size_n == 0 || step_m == 0 || size_n > total) return 0;
    return (total - size_n) / step_m + 1;
}

WindowSet sliding_windows(std::span<const BlockRecord> blocks, std::size_t size_n, std::size_t step_m) {
    WindowSpec::sliding(size_n, step_m);
    if (size_n > blocks.size()) {
        throw Error(ErrorCode::WindowLargerThanStream,
                    "window of " + std::to_string(size_n) + " blocks exceeds stream of " +
                        std::to_string(blocks.size()));
    }
    WindowSet set;
    const auto count = sliding_window_count(blocks.size(), size_n, step_m);
    set.windows.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Window w;
        w.index = i;
        w.blocks = blocks.subspan(i * step_m, size_n);
        w.first_height = w.blocks.front().height;
        w.last_height = w.blocks.back().height;
        w.label = "blk:" + std::to_string(w.first_height) + "-" + std::to_string(w.last_height);
        set.windows.push_back(std::move(w));
    }
    set.remainder = blocks.size() - ((count - 1) * step_m + size_n);
    return set;
}

WindowSet make_windows(std::span<const BlockRecord> blocks, const WindowSpec& spec) {
    spec.validate();
    if (spec.kind == WindowKind::FixedCalendar) return fixed_windows(blocks, spec.granularity);
    return sliding_windows(blocks, spec.size_n, spec.step_m);
}

} // namespace decentral
