#include "decentral/series_io.hpp"

#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string_view>

#include "json.hpp"

#include "decentral/error.hpp"

namespace decentral {

namespace {

using nlohmann::json;

constexpr std::string_view kCsvHeader =
    "window_label,first_height,last_height,block_count,producer_count,gini,entropy_bits,nakamoto,flags";

// Flags of each window, in window order.
std::vector<std::string> flag_columns(const MetricSeries& series) {
    std::vector<std::string> cols(series.points.size());
    for (const auto& f : series.flags) {
        auto& c = cols.at(f.window_index);
        if (!c.empty()) c += ';';
        c += std::string(to_string(f.metric)) + ":" + format_real(f.z);
    }
    return cols;
}

json stats_json(const MetricStats& s) {
    // Written as preformatted numbers so JSON and CSV agree digit for digit.
    return json{{"mean", json::parse(format_real(s.mean))},
                {"min", json::parse(format_real(s.min))},
                {"max", json::parse(format_real(s.max))},
                {"stddev", json::parse(format_real(s.stddev))}};
}

json point_json(const MetricPoint& p, const std::string& flags) {
    return json{{"window_label", p.label},
                {"first_height", p.first_height},
                {"last_height", p.last_height},
                {"block_count", p.block_count},
                {"producer_count", p.producer_count},
                {"gini", json::parse(format_real(p.gini))},
                {"entropy_bits", json::parse(format_real(p.entropy_bits))},
                {"nakamoto", p.nakamoto},
                {"flags", flags}};
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        out.emplace_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

MetricSeries read_series_json(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::MalformedRecord, std::string("series JSON: ") + e.what());
    }
    MetricSeries series;
    try {
        for (const auto& p : j.at("points")) {
            MetricPoint pt;
            pt.label = p.at("window_label").get<std::string>();
            pt.first_height = p.at("first_height").get<std::uint64_t>();
            pt.last_height = p.at("last_height").get<std::uint64_t>();
            pt.block_count = p.at("block_count").get<std::size_t>();
            pt.producer_count = p.at("producer_count").get<std::size_t>();
            pt.gini = p.at("gini").get<double>();
            pt.entropy_bits = p.at("entropy_bits").get<double>();
            pt.nakamoto = p.at("nakamoto").get<std::size_t>();
            series.points.push_back(std::move(pt));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedRecord, std::string("series JSON: ") + e.what());
    }
    return series;
}

MetricSeries read_series_csv(std::istream& in) {
    MetricSeries series;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("window_label,", 0) == 0) continue;
        const auto f = split(line, ',');
        if (f.size() != 9) {
            throw Error(ErrorCode::MalformedRecord, "series CSV line " + std::to_string(line_no) + ": expected 9 columns",
                        static_cast<std::int64_t>(line_no));
        }
        MetricPoint p;
        try {
            p.label = f[0];
            p.first_height = std::stoull(f[1]);
            p.last_height = std::stoull(f[2]);
            p.block_count = std::stoull(f[3]);
            p.producer_count = std::stoull(f[4]);
            p.gini = std::stod(f[5]);
            p.entropy_bits = std::stod(f[6]);
            p.nakamoto = std::stoull(f[7]);
        } catch (const std::exception&) {
            throw Error(ErrorCode::MalformedRecord, "series CSV line " + std::to_string(line_no) + ": bad number",
                        static_cast<std::int64_t>(line_no));
        }
        series.points.push_back(std::move(p));
    }
    return series;
}

} // namespace

std::string format_real(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

void write_series_csv(std::ostream& out, const MetricSeries& series) {
    const auto flags = flag_columns(series);
    out << kCsvHeader << '\n';
    for (std::size_t i = 0; i < series.points.size(); ++i) {
        const auto& p = series.points[i];
        out << p.label << ',' << p.first_height << ',' << p.last_height << ',' << p.block_count << ','
            << p.producer_count << ',' << format_real(p.gini) << ',' << format_real(p.entropy_bits) << ','
            << p.nakamoto << ',' << flags[i] << '\n';
    }
}

std::string summary_json(const Summary& summary, int indent) {
    json j{{"count", summary.count},
           {"gini", stats_json(summary.gini)},
           {"entropy_bits", stats_json(summary.entropy_bits)},
           {"nakamoto", stats_json(summary.nakamoto)}};
    return j.dump(indent);
}

void write_series_json(std::ostream& out, const MetricSeries& series) {
    const auto flags = flag_columns(series);
    json points = json::array();
    for (std::size_t i = 0; i < series.points.size(); ++i) points.push_back(point_json(series.points[i], flags[i]));
    json gaps = json::array();
    for (const auto& g : series.gaps) gaps.push_back(g.label);
    json j{{"points", std::move(points)},
           {"summary", json::parse(summary_json(series.summary, -1))},
           {"gaps", std::move(gaps)},
           {"remainder", series.remainder}};
    out << j.dump(2) << '\n';
}

MetricSeries read_series(std::istream& in) {
    in >> std::ws;
    if (in.peek() == '{') return read_series_json(in);
    return read_series_csv(in);
}

} // namespace decentral
