#include "wcsed/report.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace wcsed {

namespace {

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

std::string endpoints_to_json(const std::string& file_name,
                              int sample_rate,
                              const EndpointResult& endpoints,
                              const DetectionTrace& trace,
                              const DetectorConfig& config) {
    nlohmann::json j;
    j["file"] = file_name;
    j["sample_rate"] = sample_rate;
    j["frames"] = {{"start", endpoints.start_frame},
                   {"end", endpoints.end_frame}};
    j["samples"] = {{"start", endpoints.start_sample},
                    {"end", endpoints.end_sample}};
    j["core_run"] = {{"start", trace.core_run.first},
                     {"end", trace.core_run.second}};
    j["loudness"] = trace.loudness;
    j["thresholds"] = {{"hf_core", trace.thresholds_h.core},
                       {"hf_edge", trace.thresholds_h.edge},
                       {"lf_core", trace.thresholds_l.core},
                       {"lf_edge", trace.thresholds_l.edge}};
    j["config"] = {{"frame_ms", config.frame_ms},
                   {"shift_ms", config.shift_ms},
                   {"bins", config.bins},
                   {"otsu_bins", config.otsu_bins},
                   {"gamma", config.gamma},
                   {"gap_frames", config.gap_frames},
                   {"merge_ms", config.merge_ms},
                   {"loudness_threshold", config.loudness_threshold},
                   {"coef_gate", config.coef_gate},
                   {"cascade_levels", config.cascade_levels},
                   {"single_entropy_vector", config.single_entropy_vector},
                   {"hf_scales", trace.bank.hf_scales},
                   {"lf_scales", trace.bank.lf_scales}};
    return j.dump(2) + "\n";
}

std::string trace_to_csv(const EndpointResult& endpoints,
                         const DetectionTrace& trace) {
    std::ostringstream out;
    out << "frame,ce_l,ce_h,active\n";
    const std::size_t n =
        std::min(trace.ce_l.size(), trace.ce_h.size());
    for (std::size_t i = 0; i < n; ++i) {
        const bool active = i >= endpoints.start_frame &&
                            i <= endpoints.end_frame;
        out << i << "," << format_value(trace.ce_l.values[i]) << ","
            << format_value(trace.ce_h.values[i]) << ","
            << (active ? 1 : 0) << "\n";
    }
    return out.str();
}

std::string report_to_json(const DeviationReport& report) {
    nlohmann::json j;
    j["items"] = nlohmann::json::array();
    for (const auto& item : report.items) {
        nlohmann::json ji;
        ji["path"] = item.path;
        ji["group"] = item.group;
        ji["truth"] = {{"start", item.truth_start},
                       {"end", item.truth_end}};
        ji["detected"] = {{"start", item.detected_start},
                          {"end", item.detected_end}};
        ji["start_deviation_pct"] = item.start_pct;
        ji["end_deviation_pct"] = item.end_pct;
        j["items"].push_back(std::move(ji));
    }
    j["groups"] = nlohmann::json::object();
    for (const auto& [name, g] : report.groups)
        j["groups"][name] = {{"items", g.count},
                             {"start_deviation_pct", g.start_pct},
                             {"end_deviation_pct", g.end_pct}};
    j["overall"] = {{"items", report.items.size()},
                    {"start_deviation_pct", report.overall_start_pct},
                    {"end_deviation_pct", report.overall_end_pct}};
    return j.dump(2) + "\n";
}

std::string report_to_table(const DeviationReport& report) {
    std::ostringstream out;
    char line[128];
    std::snprintf(line, sizeof line, "%-12s %6s %12s %12s\n", "group",
                  "items", "start dev %", "end dev %");
    out << line;
    for (const auto& [name, g] : report.groups) {
        std::snprintf(line, sizeof line, "%-12s %6zu %12.3f %12.3f\n",
                      name.c_str(), g.count, g.start_pct, g.end_pct);
        out << line;
    }
    std::snprintf(line, sizeof line, "%-12s %6zu %12.3f %12.3f\n", "overall",
                  report.items.size(), report.overall_start_pct,
                  report.overall_end_pct);
    out << line;
    return out.str();
}

} // namespace wcsed
