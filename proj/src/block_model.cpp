#include "decentral/block_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

#include "decentral/error.hpp"

namespace decentral {

namespace {

std::string_view trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
    s = trim(s);
    if (s.empty()) return false;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

[[noreturn]] void malformed(std::size_t line, const std::string& why) {
    throw Error(ErrorCode::MalformedRecord,
                "malformed record at line " + std::to_string(line) + ": " + why,
                static_cast<std::int64_t>(line));
}

BlockRecord parse_csv_line(std::string_view line, std::size_t line_no) {
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos) malformed(line_no, "expected height,timestamp,producers");

    BlockRecord rec;
    if (!parse_int(line.substr(0, c1), rec.height)) malformed(line_no, "bad height");
    if (!parse_int(line.substr(c1 + 1, c2 - c1 - 1), rec.timestamp)) malformed(line_no, "bad timestamp");

    const auto field = trim(line.substr(c2 + 1));
    if (field.find(',') != std::string_view::npos) malformed(line_no, "too many columns");
    if (field.empty()) {
        throw Error(ErrorCode::EmptyProducers,
                    "block " + std::to_string(rec.height) + " has no producers",
                    static_cast<std::int64_t>(rec.height));
    }
    std::size_t pos = 0;
    while (pos <= field.size()) {
        auto next = field.find(';', pos);
        if (next == std::string_view::npos) next = field.size();
        const auto id = trim(field.substr(pos, next - pos));
        if (id.empty()) malformed(line_no, "empty producer identity");
        rec.producers.emplace_back(id);
        pos = next + 1;
    }
    return rec;
}

BlockRecord parse_jsonl_line(std::string_view line, std::size_t line_no) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
        malformed(line_no, e.what());
    }
    if (!j.is_object()) malformed(line_no, "expected an object");
    for (const char* key : {"height", "timestamp", "producers"}) {
        if (!j.contains(key)) malformed(line_no, std::string("missing key '") + key + "'");
    }
    const auto& h = j["height"];
    const auto& t = j["timestamp"];
    const auto& p = j["producers"];
    if (!h.is_number_unsigned()) malformed(line_no, "height must be a non-negative integer");
    if (!t.is_number_integer()) malformed(line_no, "timestamp must be an integer");
    if (!p.is_array()) malformed(line_no, "producers must be an array");

    BlockRecord rec;
    rec.height = h.get<std::uint64_t>();
    rec.timestamp = t.get<std::int64_t>();
    if (p.empty()) {
        throw Error(ErrorCode::EmptyProducers,
                    "block " + std::to_string(rec.height) + " has no producers",
                    static_cast<std::int64_t>(rec.height));
    }
    for (const auto& id : p) {
        if (!id.is_string()) malformed(line_no, "producer identities must be strings");
        const auto s = id.get<std::string>();
        if (trim(s).empty()) malformed(line_no, "empty producer identity");
        rec.producers.push_back(s);
    }
    return rec;
}

} // namespace

std::string_view to_string(StreamFormat format) {
    return format == StreamFormat::Csv ? "csv" : "jsonl";
}

std::string_view to_string(AttributionPolicy policy) {
    switch (policy) {
    case AttributionPolicy::Split: return "split";
    case AttributionPolicy::Full: return "full";
    case AttributionPolicy::First: return "first";
    }
    return "split";
}

StreamFormat parse_stream_format(std::string_view name) {
    if (name == "csv") return StreamFormat::Csv;
    if (name == "jsonl") return StreamFormat::Jsonl;
    throw std::invalid_argument("unknown stream format: " + std::string(name));
}

AttributionPolicy parse_attribution_policy(std::string_view name) {
    if (name == "split") return AttributionPolicy::Split;
    if (name == "full") return AttributionPolicy::Full;
    if (name == "first") return AttributionPolicy::First;
    throw std::invalid_argument("unknown attribution policy: " + std::string(name));
}

std::vector<BlockRecord> parse_stream(std::istream& in, const ParseOptions& options) {
    std::vector<BlockRecord> out;
    std::string line;
    std::size_t line_no = 0;
    bool header_pending = options.format == StreamFormat::Csv && options.csv_header;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (header_pending) {
            header_pending = false;
            continue;
        }
        auto rec = options.format == StreamFormat::Csv ? parse_csv_line(line, line_no)
                                                       : parse_jsonl_line(line, line_no);
        if (!out.empty() && rec.height <= out.back().height) {
            throw Error(ErrorCode::NonMonotonicHeight,
                        "height " + std::to_string(rec.height) + " at line " + std::to_string(line_no) +
                            " does not exceed previous height " + std::to_string(out.back().height),
                        static_cast<std::int64_t>(rec.height));
        }
        out.push_back(std::move(rec));
    }
    if (in.bad()) throw Error(ErrorCode::Io, "read error");
    return out;
}

std::vector<BlockRecord> parse_file(const std::string& path, const ParseOptions& options) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
    return parse_stream(in, options);
}

void write_stream(std::ostream& out, std::span<const BlockRecord> blocks, const ParseOptions& options) {
    if (options.format == StreamFormat::Csv) {
        if (options.csv_header) out << "height,timestamp,producers\n";
        for (const auto& b : blocks) {
            out << b.height << ',' << b.timestamp << ',';
            for (std::size_t i = 0; i < b.producers.size(); ++i) {
                const auto& id = b.producers[i];
                if (id.find_first_of(",;\r\n") != std::string::npos) {
                    throw Error(ErrorCode::MalformedRecord,
                                "producer identity not representable in CSV: " + id,
                                static_cast<std::int64_t>(b.height));
                }
                if (i) out << ';';
                out << id;
            }
            out << '\n';
        }
    } else {
        for (const auto& b : blocks) {
            nlohmann::json j{{"height", b.height}, {"timestamp", b.timestamp}, {"producers", b.producers}};
            out << j.dump() << '\n';
        }
    }
}

ProducerTally::ProducerTally(std::map<std::string, double> credits) : credits_(std::move(credits)) {
    for (const auto& [id, credit] : credits_) {
        if (!(credit > 0.0) || !std::isfinite(credit)) {
            throw Error(ErrorCode::EmptyTally, "producer '" + id + "' has non-positive credit");
        }
        total_ += credit;
    }
}

std::vector<double> ProducerTally::values() const {
    std::vector<double> v;
    v.reserve(credits_.size());
    for (const auto& [id, credit] : credits_) v.push_back(credit);
    return v;
}

ProducerTally tally(std::span<const BlockRecord> blocks, AttributionPolicy policy) {
    if (blocks.empty()) throw Error(ErrorCode::EmptyInput, "cannot tally an empty block sequence");

    // Counts keyed by the divisor each credit was issued with; summing count/k
    // in ascending k afterwards makes the result independent of block order.
    std::map<std::string, std::map<std::size_t, std::uint64_t>> counts;
    for (const auto& b : blocks) {
        if (b.producers.empty()) {
            throw Error(ErrorCode::EmptyProducers,
                        "block " + std::to_string(b.height) + " has no producers",
                        static_cast<std::int64_t>(b.height));
        }
        switch (policy) {
        case AttributionPolicy::Split:
            for (const auto& id : b.producers) ++counts[id][b.producers.size()];
            break;
        case AttributionPolicy::Full:
            for (const auto& id : b.producers) ++counts[id][1];
            break;
        case AttributionPolicy::First:
            ++counts[b.producers.front()][1];
            break;
        }
    }

    std::map<std::string, double> credits;
    for (const auto& [id, by_divisor] : counts) {
        double credit = 0.0;
        for (const auto& [k, n] : by_divisor) credit += static_cast<double>(n) / static_cast<double>(k);
        credits.emplace(id, credit);
    }
    return ProducerTally(std::move(credits));
}

} // namespace decentral
