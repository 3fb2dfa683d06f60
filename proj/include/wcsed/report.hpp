#pragma once

#include <string>

#include "wcsed/detector.hpp"
#include "wcsed/eval.hpp"

namespace wcsed {

// Endpoint record for one input file as stable, sorted-key JSON. Identical
// inputs and configuration produce byte-identical text.
std::string endpoints_to_json(const std::string& file_name,
                              int sample_rate,
                              const EndpointResult& endpoints,
                              const DetectionTrace& trace,
                              const DetectorConfig& config);

// Per-frame ce_h / ce_l trace with the active-span flag, as CSV.
std::string trace_to_csv(const EndpointResult& endpoints,
                         const DetectionTrace& trace);

// Deviation report as sorted-key JSON (per item, per group, overall).
std::string report_to_json(const DeviationReport& report);

// Fixed-width console table of the same report.
std::string report_to_table(const DeviationReport& report);

} // namespace wcsed
