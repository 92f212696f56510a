#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "decentral/block_model.hpp"
#include "decentral/error.hpp"
#include "decentral/metrics.hpp"
#include "decentral/pipeline.hpp"
#include "decentral/series_io.hpp"
#include "decentral/synthgen.hpp"
#include "decentral/windowing.hpp"

namespace py = pybind11;
using namespace decentral;

namespace {

std::vector<double> tally_values(const std::map<std::string, double>& credits) {
    std::vector<double> v;
    for (const auto& [id, c] : credits) v.push_back(c);
    return v;
}

WindowSpec make_spec(const std::string& kind, const std::string& granularity, std::size_t size,
                     std::size_t step, const std::string& preset) {
    if (kind == "fixed") return WindowSpec::fixed(parse_granularity(granularity));
    if (!preset.empty()) {
        auto s = WindowSpec::preset(parse_chain_preset(preset), parse_granularity(granularity));
        return step ? WindowSpec::sliding(s.size_n, step) : s;
    }
    return step ? WindowSpec::sliding(size, step) : WindowSpec::sliding(size);
}

} // namespace

PYBIND11_MODULE(_decentral, m) {
    m.doc() = "Decentralization metrics for block production: Gini, Shannon entropy, Nakamoto coefficient.";

    static py::exception<Error> exc(m, "DecentralError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(exc, (std::string(to_string(e.code())) + ": " + e.what()).c_str());
        }
    });

    py::class_<BlockRecord>(m, "BlockRecord")
        .def(py::init<>())
        .def(py::init([](std::uint64_t h, std::int64_t t, std::vector<std::string> p) {
                 return BlockRecord{h, t, std::move(p)};
             }),
             py::arg("height"), py::arg("timestamp"), py::arg("producers"))
        .def_readwrite("height", &BlockRecord::height)
        .def_readwrite("timestamp", &BlockRecord::timestamp)
        .def_readwrite("producers", &BlockRecord::producers)
        .def("__eq__", [](const BlockRecord& a, const BlockRecord& b) { return a == b; })
        .def("__repr__", [](const BlockRecord& b) {
            return "BlockRecord(height=" + std::to_string(b.height) + ", timestamp=" + std::to_string(b.timestamp) +
                   ", producers=" + std::to_string(b.producers.size()) + ")";
        });

    py::class_<MetricValue>(m, "MetricValue")
        .def_readonly("gini", &MetricValue::gini)
        .def_readonly("entropy_bits", &MetricValue::entropy_bits)
        .def_readonly("nakamoto", &MetricValue::nakamoto)
        .def_readonly("producer_count", &MetricValue::producer_count)
        .def_readonly("total_credit", &MetricValue::total_credit);

    py::class_<MetricPoint>(m, "MetricPoint")
        .def_readonly("label", &MetricPoint::label)
        .def_readonly("first_height", &MetricPoint::first_height)
        .def_readonly("last_height", &MetricPoint::last_height)
        .def_readonly("block_count", &MetricPoint::block_count)
        .def_readonly("producer_count", &MetricPoint::producer_count)
        .def_readonly("gini", &MetricPoint::gini)
        .def_readonly("entropy_bits", &MetricPoint::entropy_bits)
        .def_readonly("nakamoto", &MetricPoint::nakamoto);

    py::class_<MetricStats>(m, "MetricStats")
        .def_readonly("mean", &MetricStats::mean)
        .def_readonly("min", &MetricStats::min)
        .def_readonly("max", &MetricStats::max)
        .def_readonly("stddev", &MetricStats::stddev);

    py::class_<Summary>(m, "Summary")
        .def_readonly("count", &Summary::count)
        .def_readonly("gini", &Summary::gini)
        .def_readonly("entropy_bits", &Summary::entropy_bits)
        .def_readonly("nakamoto", &Summary::nakamoto)
        .def("to_json", [](const Summary& s) { return summary_json(s); });

    py::class_<AnomalyFlag>(m, "AnomalyFlag")
        .def_readonly("window_index", &AnomalyFlag::window_index)
        .def_property_readonly("metric", [](const AnomalyFlag& f) { return std::string(to_string(f.metric)); })
        .def_readonly("z", &AnomalyFlag::z);

    py::class_<MetricSeries>(m, "MetricSeries")
        .def_readonly("points", &MetricSeries::points)
        .def_readonly("summary", &MetricSeries::summary)
        .def_readonly("flags", &MetricSeries::flags)
        .def_property_readonly("gaps",
                               [](const MetricSeries& s) {
                                   std::vector<std::string> labels;
                                   for (const auto& g : s.gaps) labels.push_back(g.label);
                                   return labels;
                               })
        .def_readonly("remainder", &MetricSeries::remainder)
        .def("to_csv", [](const MetricSeries& s) {
            std::ostringstream o;
            write_series_csv(o, s);
            return o.str();
        });

    py::class_<MinerProfile>(m, "MinerProfile")
        .def(py::init([](std::string id, double share, std::optional<std::size_t> start,
                         std::optional<std::size_t> end) { return MinerProfile{std::move(id), share, start, end}; }),
             py::arg("id"), py::arg("share"), py::arg("start") = py::none(), py::arg("end") = py::none())
        .def_readwrite("id", &MinerProfile::id)
        .def_readwrite("share", &MinerProfile::share)
        .def_readwrite("start", &MinerProfile::start)
        .def_readwrite("end", &MinerProfile::end);

    m.def("parse_stream",
          [](const std::string& text, const std::string& format, bool header) {
              std::istringstream in(text);
              return parse_stream(in, {parse_stream_format(format), header});
          },
          py::arg("text"), py::arg("format") = "csv", py::arg("header") = false);

    m.def("serialize",
          [](const std::vector<BlockRecord>& blocks, const std::string& format, bool header) {
              std::ostringstream out;
              write_stream(out, blocks, {parse_stream_format(format), header});
              return out.str();
          },
          py::arg("blocks"), py::arg("format") = "csv", py::arg("header") = false);

    m.def("tally",
          [](const std::vector<BlockRecord>& blocks, const std::string& policy) {
              return tally(blocks, parse_attribution_policy(policy)).credits();
          },
          py::arg("blocks"), py::arg("policy") = "split");

    m.def("gini", [](const std::map<std::string, double>& t) { return gini(tally_values(t)); }, py::arg("tally"));
    m.def("shannon_entropy", [](const std::map<std::string, double>& t) { return shannon_entropy(tally_values(t)); },
          py::arg("tally"));
    m.def("nakamoto",
          [](const std::map<std::string, double>& t, double threshold) { return nakamoto(tally_values(t), threshold); },
          py::arg("tally"), py::arg("threshold") = kDefaultNakamotoThreshold);
    m.def("compute_all",
          [](const std::map<std::string, double>& t, double threshold) {
              return compute_all(tally_values(t), threshold);
          },
          py::arg("tally"), py::arg("threshold") = kDefaultNakamotoThreshold);

    m.def("sliding_window_count", &sliding_window_count, py::arg("total"), py::arg("size"), py::arg("step"));

    m.def("window_labels",
          [](const std::vector<BlockRecord>& blocks, const std::string& kind, const std::string& granularity,
             std::size_t size, std::size_t step, const std::string& preset) {
              const auto set = make_windows(blocks, make_spec(kind, granularity, size, step, preset));
              std::vector<std::string> labels;
              for (const auto& w : set.windows) labels.push_back(w.label);
              return labels;
          },
          py::arg("blocks"), py::arg("kind") = "fixed", py::arg("granularity") = "day", py::arg("size") = 0,
          py::arg("step") = 0, py::arg("preset") = "");

    m.def("run",
          [](const std::vector<BlockRecord>& blocks, const std::string& kind, const std::string& granularity,
             std::size_t size, std::size_t step, const std::string& preset, const std::string& policy,
             double threshold, double z, unsigned jobs) {
              RunOptions o;
              o.spec = make_spec(kind, granularity, size, step, preset);
              o.policy = parse_attribution_policy(policy);
              o.threshold = threshold;
              o.z_threshold = z;
              o.jobs = jobs;
              py::gil_scoped_release release;
              return run(blocks, o);
          },
          py::arg("blocks"), py::arg("kind") = "fixed", py::arg("granularity") = "day", py::arg("size") = 0,
          py::arg("step") = 0, py::arg("preset") = "", py::arg("policy") = "split",
          py::arg("threshold") = kDefaultNakamotoThreshold, py::arg("z") = kDefaultZThreshold, py::arg("jobs") = 1);

    m.def("flag_anomalies", &flag_anomalies, py::arg("series"), py::arg("z") = kDefaultZThreshold);

    m.def("generate",
          [](const std::vector<MinerProfile>& profiles, std::size_t total_blocks, std::int64_t interval,
             std::uint64_t seed, std::int64_t start_time) {
              GenerateOptions g;
              g.total_blocks = total_blocks;
              g.block_interval_seconds = interval;
              g.seed = seed;
              g.start_time = start_time;
              return generate(profiles, g);
          },
          py::arg("profiles"), py::arg("total_blocks"), py::arg("interval") = 600, py::arg("seed") = 0,
          py::arg("start_time") = 1546300800);

    m.def("expected_metrics",
          [](const std::vector<MinerProfile>& profiles, double threshold) { return expected_metrics(profiles, threshold); },
          py::arg("profiles"),
          py::arg("threshold") = kDefaultNakamotoThreshold);
}
