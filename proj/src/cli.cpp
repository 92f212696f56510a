#include "decentral/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "decentral/block_model.hpp"
#include "decentral/error.hpp"
#include "decentral/pipeline.hpp"
#include "decentral/series_io.hpp"
#include "decentral/synthgen.hpp"
#include "decentral/windowing.hpp"

namespace decentral::cli {

namespace {

struct StageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

[[noreturn]] void fail(std::string_view stage, const std::string& message) {
    throw StageError(std::string(stage) + ": " + message);
}

struct AnalyzeConfig {
    std::string input;
    std::string format = "csv";
    bool header = false;
    std::string preset;
    std::string fixed;
    std::string sliding;
    std::size_t window_size = 0;
    std::size_t step = 0;
    std::string attribution = "split";
    double threshold = kDefaultNakamotoThreshold;
    double z = kDefaultZThreshold;
    std::string output;
    std::string out_format;
    unsigned jobs = 0;
};

struct GenerateConfig {
    std::string profile;
    std::size_t count = 0;
    std::uint64_t seed = 0;
    std::int64_t interval = 600;
    std::int64_t start_time = 1546300800;
    std::uint64_t start_height = 0;
    std::string format = "csv";
    bool header = false;
    std::string output;
};

struct SummarizeConfig {
    std::string input;
    double z = kDefaultZThreshold;
    std::string output;
};

WindowSpec resolve_window_spec(const AnalyzeConfig& c) {
    const int modes = !c.fixed.empty() + !c.sliding.empty() + (c.window_size > 0);
    if (modes != 1) fail("config", "choose exactly one of --fixed, --sliding, --window-size");
    if (!c.preset.empty() && c.window_size > 0) fail("config", "--preset and --window-size are mutually exclusive");
    if (!c.fixed.empty()) {
        if (!c.preset.empty()) fail("config", "--preset applies to sliding windows only");
        if (c.step > 0) fail("config", "--step applies to sliding windows only");
        return WindowSpec::fixed(parse_granularity(c.fixed));
    }
    std::size_t n = c.window_size;
    if (!c.sliding.empty()) {
        if (c.preset.empty()) fail("config", "--sliding needs --preset (or use --window-size)");
        n = preset_window_size(parse_chain_preset(c.preset), parse_granularity(c.sliding));
    }
    return c.step > 0 ? WindowSpec::sliding(n, c.step) : WindowSpec::sliding(n);
}

std::string_view stage_of(ErrorCode code) {
    switch (code) {
    case ErrorCode::Io:
    case ErrorCode::MalformedRecord:
    case ErrorCode::NonMonotonicHeight:
    case ErrorCode::EmptyProducers:
        return "parse";
    case ErrorCode::InvalidWindowSpec:
    case ErrorCode::WindowLargerThanStream:
    case ErrorCode::NoWindows:
        return "window";
    default:
        return "metric";
    }
}

// Writes through `write` to `path`, or to `fallback` when path is empty.
template <typename Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& write) {
    if (path.empty()) {
        write(fallback);
        fallback.flush();
        if (!fallback) fail("output", "write to standard output failed");
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) fail("output", "cannot open " + path);
    write(f);
    f.close();
    if (!f) fail("output", "write to " + path + " failed");
}

void analyze(const AnalyzeConfig& c, std::ostream& out, std::ostream& err) {
    WindowSpec spec;
    AttributionPolicy policy;
    ParseOptions parse_opts;
    try {
        spec = resolve_window_spec(c);
        policy = parse_attribution_policy(c.attribution);
        parse_opts.format = parse_stream_format(c.format);
        parse_opts.csv_header = c.header;
    } catch (const Error& e) {
        fail("config", e.what());
    } catch (const std::invalid_argument& e) {
        fail("config", e.what());
    }

    std::vector<BlockRecord> blocks;
    try {
        blocks = parse_file(c.input, parse_opts);
    } catch (const Error& e) {
        fail("parse", e.what());
    }
    if (blocks.empty()) fail("parse", "no block records in " + c.input);

    RunOptions opts;
    opts.policy = policy;
    opts.spec = spec;
    opts.threshold = c.threshold;
    opts.z_threshold = c.z;
    opts.jobs = c.jobs;

    MetricSeries series;
    try {
        series = run(blocks, opts);
    } catch (const Error& e) {
        fail(stage_of(e.code()), e.what());
    }

    err << "read " << blocks.size() << " blocks, " << series.points.size() << " windows\n";
    for (const auto& g : series.gaps) err << "gap: " << g.label << " has no blocks\n";
    if (series.remainder > 0) err << "remainder: " << series.remainder << " trailing blocks not in a full window\n";
    for (const auto& f : series.flags) {
        err << "anomaly: window " << f.window_index << " (" << series.points[f.window_index].label << ") "
            << to_string(f.metric) << " z=" << format_real(f.z) << '\n';
    }

    std::string out_format = c.out_format;
    if (out_format.empty()) out_format = c.output.ends_with(".json") ? "json" : "csv";
    if (out_format == "json") {
        emit(c.output, out, [&](std::ostream& o) { write_series_json(o, series); });
    } else if (out_format == "csv") {
        emit(c.output, out, [&](std::ostream& o) { write_series_csv(o, series); });
        const auto summary = summary_json(series.summary) + "\n";
        if (c.output.empty()) {
            err << "summary: " << summary;
        } else {
            emit(c.output + ".summary.json", out, [&](std::ostream& o) { o << summary; });
        }
    } else {
        fail("config", "unknown output format: " + out_format);
    }
}

void generate_cmd(const GenerateConfig& c, std::ostream& out, std::ostream& err) {
    std::vector<MinerProfile> profiles;
    std::vector<BlockRecord> blocks;
    ParseOptions write_opts;
    try {
        write_opts.format = parse_stream_format(c.format);
        write_opts.csv_header = c.header;
        profiles = load_profiles(c.profile);
        GenerateOptions g;
        g.total_blocks = c.count;
        g.seed = c.seed;
        g.block_interval_seconds = c.interval;
        g.start_time = c.start_time;
        g.start_height = c.start_height;
        blocks = generate(profiles, g);
    } catch (const Error& e) {
        fail("profile", e.what());
    } catch (const std::invalid_argument& e) {
        fail("config", e.what());
    }
    emit(c.output, out, [&](std::ostream& o) { write_stream(o, blocks, write_opts); });
    err << "generated " << blocks.size() << " blocks from " << profiles.size() << " profiles\n";
}

void summarize_cmd(const SummarizeConfig& c, std::ostream& out, std::ostream&) {
    MetricSeries series;
    {
        std::ifstream in(c.input);
        if (!in) fail("parse", "cannot open " + c.input);
        try {
            series = read_series(in);
        } catch (const Error& e) {
            fail("parse", e.what());
        }
    }
    nlohmann::json flags = nlohmann::json::array();
    try {
        series.summary = summarize(series.points);
        if (series.points.size() >= 3) series = flag_anomalies(std::move(series), c.z);
    } catch (const Error& e) {
        fail("metric", e.what());
    }
    for (const auto& f : series.flags) {
        flags.push_back({{"window_index", f.window_index},
                         {"window_label", series.points[f.window_index].label},
                         {"metric", to_string(f.metric)},
                         {"z", nlohmann::json::parse(format_real(f.z))}});
    }
    nlohmann::json doc{{"summary", nlohmann::json::parse(summary_json(series.summary))}, {"flags", flags}};
    emit(c.output, out, [&](std::ostream& o) { o << doc.dump(2) << '\n'; });
}

} // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Block-production decentralization metrics (Gini, Shannon entropy, Nakamoto coefficient)"};
    app.name("decentral");
    app.require_subcommand(1);

    AnalyzeConfig ac;
    auto* analyze_cmd = app.add_subcommand("analyze", "Measure a block stream over fixed or sliding windows");
    analyze_cmd->add_option("--input", ac.input, "Block stream file")->required();
    analyze_cmd->add_option("--format", ac.format, "Input format")->check(CLI::IsMember({"csv", "jsonl"}));
    analyze_cmd->add_flag("--header", ac.header, "CSV input starts with a header line");
    analyze_cmd->add_option("--preset", ac.preset, "Chain preset for --sliding")->check(CLI::IsMember({"btc", "eth"}));
    analyze_cmd->add_option("--fixed", ac.fixed, "Fixed calendar windows")->check(CLI::IsMember({"day", "week", "month"}));
    analyze_cmd->add_option("--sliding", ac.sliding, "Sliding windows sized by preset")
        ->check(CLI::IsMember({"day", "week", "month"}));
    analyze_cmd->add_option("--window-size", ac.window_size, "Sliding window size N in blocks")->check(CLI::PositiveNumber);
    analyze_cmd->add_option("--step", ac.step, "Sliding step M in blocks (default N/2)")->check(CLI::PositiveNumber);
    analyze_cmd->add_option("--attribution", ac.attribution, "Multi-producer credit rule")
        ->check(CLI::IsMember({"split", "full", "first"}));
    analyze_cmd->add_option("--threshold", ac.threshold, "Nakamoto threshold");
    analyze_cmd->add_option("--z", ac.z, "Anomaly z-score threshold");
    analyze_cmd->add_option("--output", ac.output, "Output file (default: stdout)");
    analyze_cmd->add_option("--out-format", ac.out_format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    analyze_cmd->add_option("--jobs", ac.jobs, "Worker threads (0: all cores)");

    GenerateConfig gc;
    auto* generate_sub = app.add_subcommand("generate", "Generate a synthetic block stream from miner profiles");
    generate_sub->add_option("--profile", gc.profile, "Profile JSON file")->required();
    generate_sub->add_option("--count", gc.count, "Number of blocks")->required()->check(CLI::PositiveNumber);
    generate_sub->add_option("--seed", gc.seed, "RNG seed");
    generate_sub->add_option("--interval", gc.interval, "Seconds between blocks")->check(CLI::PositiveNumber);
    generate_sub->add_option("--start-time", gc.start_time, "Timestamp of the first block");
    generate_sub->add_option("--start-height", gc.start_height, "Height of the first block");
    generate_sub->add_option("--format", gc.format, "Output format")->check(CLI::IsMember({"csv", "jsonl"}));
    generate_sub->add_flag("--header", gc.header, "Write a CSV header line");
    generate_sub->add_option("--output", gc.output, "Output file (default: stdout)");

    SummarizeConfig sc;
    auto* summarize_sub = app.add_subcommand("summarize", "Summary statistics and anomaly flags of a metric series");
    summarize_sub->add_option("--input", sc.input, "Series file written by analyze (CSV or JSON)")->required();
    summarize_sub->add_option("--z", sc.z, "Anomaly z-score threshold");
    summarize_sub->add_option("--output", sc.output, "Output file (default: stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "config: " << e.what() << '\n';
        return 1;
    }

    try {
        if (analyze_cmd->parsed()) analyze(ac, out, err);
        else if (generate_sub->parsed()) generate_cmd(gc, out, err);
        else if (summarize_sub->parsed()) summarize_cmd(sc, out, err);
    } catch (const StageError& e) {
        err << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace decentral::cli
