#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "decentral/block_model.hpp"
#include "decentral/cli.hpp"
#include "decentral/series_io.hpp"

namespace fs = std::filesystem;
using namespace decentral;

namespace {

struct Result {
    int status;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int status = cli::main(args, out, err);
    return {status, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("decentral-cli-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) +
                                            "-" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream(path) << text;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t lines(const std::string& s) {
    return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("missing input names the parse stage") {
    const auto r = invoke({"analyze", "--input", "/nonexistent/blocks.csv", "--fixed", "day"});
    CHECK(r.status == 1);
    CHECK(r.err.find("parse: cannot open") != std::string::npos);
    CHECK(r.out.empty());
}

TEST_CASE("window mode flags are mutually exclusive") {
    TempDir dir;
    write_file(dir.file("b.csv"), "1,1546300800,a\n");
    const auto in = dir.file("b.csv");
    CHECK(invoke({"analyze", "--input", in}).status == 1);
    CHECK(invoke({"analyze", "--input", in, "--fixed", "day", "--sliding", "day", "--preset", "btc"}).status == 1);
    CHECK(invoke({"analyze", "--input", in, "--preset", "btc", "--window-size", "10"}).status == 1);
    CHECK(invoke({"analyze", "--input", in, "--sliding", "day"}).status == 1);
    CHECK(invoke({"analyze", "--input", in, "--fixed", "day", "--preset", "btc"}).status == 1);
    CHECK(invoke({"analyze", "--input", in, "--window-size", "4", "--step", "5"}).status == 1);
    CHECK(invoke({"analyze", "--input", in, "--fixed", "fortnight"}).status == 1);
    CHECK(invoke({"analyze", "--input", in, "--fixed", "day"}).status == 0);
}

TEST_CASE("stage names on window and parse failures") {
    TempDir dir;
    write_file(dir.file("b.csv"), "1,1546300800,a\n2,1546300900,b\n");
    auto r = invoke({"analyze", "--input", dir.file("b.csv"), "--window-size", "5"});
    CHECK(r.status == 1);
    CHECK(r.err.rfind("window: ", 0) == 0);

    write_file(dir.file("bad.csv"), "2,1546300800,a\n1,1546300900,b\n");
    r = invoke({"analyze", "--input", dir.file("bad.csv"), "--fixed", "day"});
    CHECK(r.status == 1);
    CHECK(r.err.rfind("parse: ", 0) == 0);

    r = invoke({"analyze", "--input", dir.file("b.csv"), "--fixed", "day", "--threshold", "2"});
    CHECK(r.status == 1);
    CHECK(r.err.rfind("metric: ", 0) == 0);
}

TEST_CASE("generate then analyze with the btc day preset") {
    TempDir dir;
    write_file(dir.file("p.json"), R"([{"id":"a","share":0.5},{"id":"b","share":0.3},{"id":"c","share":0.2}])");
    auto r = invoke({"generate", "--profile", dir.file("p.json"), "--count", "1440", "--seed", "9", "--output",
                     dir.file("blocks.csv")});
    REQUIRE(r.status == 0);
    CHECK(lines(read_file(dir.file("blocks.csv"))) == 1440);

    r = invoke({"analyze", "--input", dir.file("blocks.csv"), "--preset", "btc", "--sliding", "day"});
    REQUIRE(r.status == 0);
    // header + L points, L = (1440 - 144) / 72 + 1 = 2 * 1440 / 144 - 1
    CHECK(lines(r.out) == 1 + 19);
    CHECK(r.out.rfind("window_label,first_height,last_height,block_count,producer_count,gini,entropy_bits,nakamoto,flags\n", 0) == 0);
    CHECK(r.err.find("summary:") != std::string::npos);
    CHECK(r.out.find("summary") == std::string::npos);
}

TEST_CASE("a year of blocks gives twelve monthly points") {
    TempDir dir;
    write_file(dir.file("p.json"), R"([{"id":"a","share":0.6},{"id":"b","share":0.4}])");
    REQUIRE(invoke({"generate", "--profile", dir.file("p.json"), "--count", "6570", "--interval", "4800", "--format",
                    "jsonl", "--output", dir.file("eth.jsonl")})
                .status == 0);
    const auto r = invoke({"analyze", "--input", dir.file("eth.jsonl"), "--format", "jsonl", "--fixed", "month",
                           "--output", dir.file("series.json")});
    REQUIRE(r.status == 0);
    const auto doc = nlohmann::json::parse(read_file(dir.file("series.json")));
    CHECK(doc["points"].size() == 12);
    CHECK(doc["summary"]["count"] == 12);
    CHECK(doc["points"][0]["window_label"] == "2019-01");
}

TEST_CASE("csv output with summary file, then summarize") {
    TempDir dir;
    write_file(dir.file("p.json"), R"([{"id":"a","share":0.25},{"id":"b","share":0.25},{"id":"c","share":0.5}])");
    REQUIRE(invoke({"generate", "--profile", dir.file("p.json"), "--count", "3000", "--header", "--output",
                    dir.file("b.csv")})
                .status == 0);
    auto r = invoke({"analyze", "--input", dir.file("b.csv"), "--header", "--window-size", "300", "--output",
                     dir.file("s.csv")});
    REQUIRE(r.status == 0);
    CHECK(r.out.empty());
    const auto summary = nlohmann::json::parse(read_file(dir.file("s.csv.summary.json")));
    CHECK(summary["count"] == 19);

    r = invoke({"summarize", "--input", dir.file("s.csv")});
    REQUIRE(r.status == 0);
    const auto doc = nlohmann::json::parse(r.out);
    // The series file holds 9 significant digits, so recomputed stats agree to about that.
    CHECK(doc["summary"]["count"] == summary["count"]);
    for (const char* metric : {"gini", "entropy_bits", "nakamoto"}) {
        for (const char* stat : {"mean", "min", "max", "stddev"}) {
            CHECK(doc["summary"][metric][stat].get<double>() ==
                  doctest::Approx(summary[metric][stat].get<double>()).epsilon(1e-7));
        }
    }
    CHECK(doc["flags"].is_array());

    std::ifstream series_in(dir.file("s.csv"));
    CHECK(read_series(series_in).points.size() == 19);
}

TEST_CASE("generate is repeatable and validates profiles") {
    TempDir dir;
    write_file(dir.file("p.json"), R"([{"id":"a","share":0.5},{"id":"b","share":0.5}])");
    const auto a = invoke({"generate", "--profile", dir.file("p.json"), "--count", "500", "--seed", "4"});
    const auto b = invoke({"generate", "--profile", dir.file("p.json"), "--count", "500", "--seed", "4"});
    REQUIRE(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(lines(a.out) == 500);

    write_file(dir.file("one.json"), R"([{"id":"solo","share":1.0}])");
    const auto one = invoke({"generate", "--profile", dir.file("one.json"), "--count", "100"});
    REQUIRE(one.status == 0);
    std::istringstream in(one.out);
    const auto blocks = parse_stream(in);
    CHECK(blocks.size() == 100);
    for (const auto& blk : blocks) CHECK(blk.producers == std::vector<std::string>{"solo"});

    write_file(dir.file("bad.json"), R"([{"id":"a","share":0.5}])");
    const auto bad = invoke({"generate", "--profile", dir.file("bad.json"), "--count", "10"});
    CHECK(bad.status == 1);
    CHECK(bad.err.rfind("profile: ", 0) == 0);
}

TEST_CASE("unwritable output fails") {
    TempDir dir;
    write_file(dir.file("b.csv"), "1,1546300800,a\n");
    const auto r = invoke({"analyze", "--input", dir.file("b.csv"), "--fixed", "day", "--output",
                           "/nonexistent-dir/out.csv"});
    CHECK(r.status == 1);
    CHECK(r.err.find("output: cannot open") != std::string::npos);
}

}
