#include "decentral/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "decentral/error.hpp"

namespace decentral {

namespace {

constexpr double kShareSumTolerance = 1e-9;

// Top 53 bits of a 64-bit draw -> [0, 1). Same result on every platform,
// unlike std::uniform_real_distribution.
double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct Segment {
    std::size_t begin = 0; // inclusive
    std::size_t end = 0;   // exclusive
    std::vector<std::string> ids;
    std::vector<double> cumulative;
};

// Positions where the active set can change: profile starts and ends + 1.
std::vector<std::size_t> breakpoints(std::span<const MinerProfile> profiles, std::size_t total) {
    std::set<std::size_t> pts{0, total};
    for (const auto& p : profiles) {
        if (p.start && *p.start < total) pts.insert(*p.start);
        if (p.end && *p.end + 1 < total) pts.insert(*p.end + 1);
    }
    return {pts.begin(), pts.end()};
}

Segment build_segment(std::span<const MinerProfile> profiles, std::size_t begin, std::size_t end) {
    std::map<std::string, double> shares;
    for (const auto& p : profiles) {
        if (p.active_at(begin)) shares[p.id] += p.share;
    }
    Segment seg;
    seg.begin = begin;
    seg.end = end;
    double acc = 0.0;
    for (const auto& [id, share] : shares) {
        acc += share;
        seg.ids.push_back(id);
        seg.cumulative.push_back(acc);
    }
    if (std::abs(acc - 1.0) > kShareSumTolerance) {
        throw Error(ErrorCode::InvalidShares,
                    "active shares at block position " + std::to_string(begin) + " sum to " +
                        std::to_string(acc) + ", expected 1",
                    static_cast<std::int64_t>(begin));
    }
    return seg;
}

void check_entries(std::span<const MinerProfile> profiles) {
    if (profiles.empty()) throw Error(ErrorCode::InvalidProfile, "no miner profiles");
    for (const auto& p : profiles) {
        if (p.id.empty() || p.id.find_first_of(",;\r\n") != std::string::npos) {
            throw Error(ErrorCode::InvalidProfile, "invalid miner id '" + p.id + "'");
        }
        if (!(p.share > 0.0 && p.share <= 1.0)) {
            throw Error(ErrorCode::InvalidProfile, "share of '" + p.id + "' must lie in (0, 1]");
        }
        if (p.start && p.end && *p.start > *p.end) {
            throw Error(ErrorCode::InvalidProfile, "interval of '" + p.id + "' ends before it starts");
        }
    }
}

std::vector<Segment> segments(std::span<const MinerProfile> profiles, std::size_t total) {
    check_entries(profiles);
    const auto pts = breakpoints(profiles, total);
    std::vector<Segment> out;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) out.push_back(build_segment(profiles, pts[i], pts[i + 1]));
    return out;
}

} // namespace

bool MinerProfile::active_at(std::size_t position) const {
    return (!start || position >= *start) && (!end || position <= *end);
}

void validate_profiles(std::span<const MinerProfile> profiles, std::size_t total_blocks) {
    segments(profiles, total_blocks);
}

std::vector<BlockRecord> generate(std::span<const MinerProfile> profiles, const GenerateOptions& options) {
    if (options.total_blocks == 0) throw Error(ErrorCode::InvalidProfile, "total_blocks must be positive");
    if (options.block_interval_seconds <= 0) {
        throw Error(ErrorCode::InvalidProfile, "block interval must be positive");
    }
    const auto segs = segments(profiles, options.total_blocks);

    std::mt19937_64 rng(options.seed);
    std::vector<BlockRecord> blocks;
    blocks.reserve(options.total_blocks);
    for (const auto& seg : segs) {
        const double total = seg.cumulative.back();
        for (auto i = seg.begin; i < seg.end; ++i) {
            const double u = unit_draw(rng) * total;
            auto it = std::upper_bound(seg.cumulative.begin(), seg.cumulative.end(), u);
            if (it == seg.cumulative.end()) --it;
            const auto who = static_cast<std::size_t>(it - seg.cumulative.begin());
            blocks.push_back({options.start_height + i,
                              options.start_time + static_cast<std::int64_t>(i) * options.block_interval_seconds,
                              {seg.ids[who]}});
        }
    }
    return blocks;
}

MetricValue expected_metrics(std::span<const MinerProfile> profiles, double threshold) {
    for (const auto& p : profiles) {
        if (p.start || p.end) throw Error(ErrorCode::NonStationary, "profile '" + p.id + "' has an interval");
    }
    validate_profiles(profiles, 1);
    std::map<std::string, double> shares;
    for (const auto& p : profiles) shares[p.id] += p.share;
    std::vector<double> values;
    for (const auto& [id, s] : shares) values.push_back(s);
    return compute_all(values, threshold);
}

std::vector<MinerProfile> parse_profiles(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::InvalidProfile, std::string("profile file is not valid JSON: ") + e.what());
    }
    if (!j.is_array()) throw Error(ErrorCode::InvalidProfile, "profile file must hold a JSON array");

    std::vector<MinerProfile> out;
    for (const auto& e : j) {
        if (!e.is_object() || !e.contains("id") || !e.contains("share") || !e["id"].is_string() ||
            !e["share"].is_number()) {
            throw Error(ErrorCode::InvalidProfile, "each profile needs string 'id' and numeric 'share'");
        }
        MinerProfile p;
        p.id = e["id"].get<std::string>();
        p.share = e["share"].get<double>();
        for (auto [key, field] : {std::pair{"start", &p.start}, std::pair{"end", &p.end}}) {
            if (!e.contains(key) || e[key].is_null()) continue;
            if (!e[key].is_number_unsigned()) {
                throw Error(ErrorCode::InvalidProfile, std::string("'") + key + "' must be a non-negative integer");
            }
            *field = e[key].get<std::size_t>();
        }
        out.push_back(std::move(p));
    }
    check_entries(out);
    return out;
}

std::vector<MinerProfile> load_profiles(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_profiles(ss.str());
}

} // namespace decentral
