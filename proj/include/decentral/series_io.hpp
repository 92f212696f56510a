#pragma once

#include <iosfwd>
#include <string>

#include "decentral/pipeline.hpp"

namespace decentral {

// Nine significant digits, no trailing noise; used for every real column.
std::string format_real(double value);

// window_label,first_height,last_height,block_count,producer_count,gini,
// entropy_bits,nakamoto,flags  (flags: "metric:z" entries joined by ';')
void write_series_csv(std::ostream& out, const MetricSeries& series);
std::string summary_json(const Summary& summary, int indent = 2);
// {"points": [...], "summary": {...}, "gaps": [...], "remainder": n}
void write_series_json(std::ostream& out, const MetricSeries& series);

// Reads either format back into points; summary and flags are not restored.
MetricSeries read_series(std::istream& in);

} // namespace decentral
