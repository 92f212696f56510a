#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace decentral {

// One produced block. Bitcoin blocks may list many coinbase addresses;
// Ethereum blocks carry the single miner field.
struct BlockRecord {
    std::uint64_t height = 0;
    std::int64_t timestamp = 0; // seconds since Unix epoch, UTC
    std::vector<std::string> producers;

    friend bool operator==(const BlockRecord&, const BlockRecord&) = default;
};

enum class StreamFormat { Csv, Jsonl };

// How a block with k listed producers is credited.
//   Split: 1/k to each (block credit sums to 1)
//   Full:  1 to each (block credit sums to k)
//   First: 1 to the first listed producer only
enum class AttributionPolicy { Split, Full, First };

std::string_view to_string(StreamFormat format);
std::string_view to_string(AttributionPolicy policy);
StreamFormat parse_stream_format(std::string_view name);
AttributionPolicy parse_attribution_policy(std::string_view name);

struct ParseOptions {
    StreamFormat format = StreamFormat::Csv;
    bool csv_header = false;
};

// Reads the whole stream. Heights must be strictly increasing; throws
// Error{MalformedRecord | NonMonotonicHeight | EmptyProducers}.
std::vector<BlockRecord> parse_stream(std::istream& in, const ParseOptions& options = {});
std::vector<BlockRecord> parse_file(const std::string& path, const ParseOptions& options = {});

// Inverse of parse_stream for well-formed records. CSV identities must not
// contain ',', ';' or line breaks.
void write_stream(std::ostream& out, std::span<const BlockRecord> blocks,
                  const ParseOptions& options = {});

// Producer id -> positive block credit, ordered by id.
class ProducerTally {
public:
    ProducerTally() = default;
    // Throws Error{EmptyTally} on entries with non-positive or non-finite credit.
    explicit ProducerTally(std::map<std::string, double> credits);

    const std::map<std::string, double>& credits() const noexcept { return credits_; }
    std::size_t size() const noexcept { return credits_.size(); }
    bool empty() const noexcept { return credits_.empty(); }
    double total() const noexcept { return total_; }

    // Credits in id order, handy for the metric functions.
    std::vector<double> values() const;

    friend bool operator==(const ProducerTally&, const ProducerTally&) = default;

private:
    std::map<std::string, double> credits_;
    double total_ = 0.0;
};

// Throws Error{EmptyInput} for an empty sequence.
ProducerTally tally(std::span<const BlockRecord> blocks,
                    AttributionPolicy policy = AttributionPolicy::Split);

} // namespace decentral
