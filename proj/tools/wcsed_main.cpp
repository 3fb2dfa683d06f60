#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wcsed/detector.hpp"
#include "wcsed/eval.hpp"
#include "wcsed/report.hpp"
#include "wcsed/wav_io.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string mode = "detect";
    std::vector<std::string> inputs;
    std::string out_dir = ".";
    std::string labels_path;
    std::string corpus_spec_path;
    bool trace = false;
    bool serial = false;
    int synth_count = 50;
    std::uint64_t synth_seed = 1;
    int synth_rate = 48000;
    std::vector<double> hf_band;
    std::vector<double> lf_band;
    wcsed::DetectorConfig detector;
};

// Frequency bounds translate to scales only once the file's sample rate
// is known.
wcsed::DetectorConfig detector_for(const Options& opt, int sample_rate) {
    wcsed::DetectorConfig config = opt.detector;
    auto band_to_scales = [&](const std::vector<double>& band, int count) {
        const double hi = std::max(band[0], band[1]);
        const double lo = std::min(band[0], band[1]);
        std::vector<double> scales;
        for (int i = 0; i < count; ++i) {
            const double f = hi * std::pow(lo / hi,
                                           static_cast<double>(i) /
                                               (count - 1));
            scales.push_back(wcsed::frequency_to_scale(
                f, sample_rate, config.cascade_levels));
        }
        std::sort(scales.begin(), scales.end());
        return scales;
    };
    if (!opt.hf_band.empty())
        config.hf_scales = band_to_scales(opt.hf_band, 12);
    if (!opt.lf_band.empty())
        config.lf_scales = band_to_scales(opt.lf_band, 6);
    return config;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw wcsed::Error("cannot open file for writing: " +
                           path.string());
    out << text;
    if (!out)
        throw wcsed::Error("write failed: " + path.string());
}

std::vector<fs::path> collect_wav_inputs(
    const std::vector<std::string>& inputs) {
    std::vector<fs::path> files;
    for (const auto& input : inputs) {
        const fs::path p(input);
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::directory_iterator(p))
                if (entry.is_regular_file() &&
                    entry.path().extension() == ".wav")
                    found.push_back(entry.path());
            std::sort(found.begin(), found.end());
            files.insert(files.end(), found.begin(), found.end());
        } else if (fs::exists(p)) {
            files.push_back(p);
        } else {
            throw wcsed::Error("input path does not exist: " + input);
        }
    }
    if (files.empty())
        throw wcsed::Error("no input files found");
    return files;
}

struct FileOutcome {
    fs::path path;
    bool ok = false;
    std::string message;
};

int run_detect(const Options& opt) {
    const auto files = collect_wav_inputs(opt.inputs);
    fs::create_directories(opt.out_dir);

    std::vector<FileOutcome> outcomes(files.size());

    // Bounded worker pool over independent files; results are reported
    // in input order once the pool drains.
    #pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(files.size()); ++i) {
        const fs::path& file = files[static_cast<std::size_t>(i)];
        FileOutcome& outcome = outcomes[static_cast<std::size_t>(i)];
        outcome.path = file;
        try {
            const wcsed::SignalBuffer signal =
                wcsed::load_wav(file.string());
            const wcsed::DetectorConfig config =
                detector_for(opt, signal.sample_rate);
            wcsed::DetectionTrace trace;
            const wcsed::EndpointResult result =
                wcsed::detect_endpoints(signal, config, &trace);
            const wcsed::SignalBuffer segment =
                wcsed::extract_segment(signal, result);

            const std::string stem = file.stem().string();
            const fs::path base = fs::path(opt.out_dir) / stem;
            wcsed::save_wav(base.string() + ".extracted.wav", segment);
            write_text_file(base.string() + ".endpoints.json",
                            wcsed::endpoints_to_json(
                                file.filename().string(),
                                signal.sample_rate, result, trace,
                                config));
            if (opt.trace)
                write_text_file(base.string() + ".trace.csv",
                                wcsed::trace_to_csv(result, trace));

            char msg[160];
            std::snprintf(msg, sizeof msg,
                          "frames [%zu, %zu], samples [%zu, %zu]",
                          result.start_frame, result.end_frame,
                          result.start_sample, result.end_sample);
            outcome.ok = true;
            outcome.message = msg;
        } catch (const std::exception& e) {
            outcome.ok = false;
            outcome.message = e.what();
        }
    }

    int failures = 0;
    for (const auto& outcome : outcomes) {
        if (outcome.ok) {
            std::cout << outcome.path.string() << ": " << outcome.message
                      << "\n";
        } else {
            std::cerr << "error: " << outcome.path.string() << ": "
                      << outcome.message << "\n";
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}

int run_eval(const Options& opt) {
    if (opt.labels_path.empty())
        throw wcsed::Error("eval mode requires --labels");
    const auto rows = wcsed::read_labels_csv(opt.labels_path);
    const fs::path label_dir = fs::path(opt.labels_path).parent_path();
    fs::create_directories(opt.out_dir);

    std::vector<wcsed::DeviationReport::Item> items(rows.size());
    std::vector<std::string> errors(rows.size());

    #pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(rows.size()); ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        auto& item = items[static_cast<std::size_t>(i)];
        try {
            fs::path audio(row.path);
            if (audio.is_relative())
                audio = label_dir / audio;
            const wcsed::SignalBuffer signal =
                wcsed::load_wav(audio.string());
            const wcsed::EndpointResult result = wcsed::detect_endpoints(
                signal, detector_for(opt, signal.sample_rate));
            const auto [start_pct, end_pct] =
                wcsed::frame_deviation(row.label, result);
            item.path = row.path;
            item.group = row.label.group;
            item.truth_start = row.label.start_frame;
            item.truth_end = row.label.end_frame;
            item.detected_start = result.start_frame;
            item.detected_end = result.end_frame;
            item.start_pct = start_pct;
            item.end_pct = end_pct;
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(i)] = e.what();
        }
    }

    for (std::size_t i = 0; i < rows.size(); ++i)
        if (!errors[i].empty())
            throw wcsed::Error("label row for '" + rows[i].path +
                               "' failed: " + errors[i]);

    const wcsed::DeviationReport report =
        wcsed::aggregate_report(std::move(items));
    write_text_file(fs::path(opt.out_dir) / "report.json",
                    wcsed::report_to_json(report));
    std::cout << wcsed::report_to_table(report);
    return 0;
}

int run_synth(const Options& opt) {
    fs::create_directories(opt.out_dir);

    std::vector<wcsed::CorpusItemSpec> items;
    if (!opt.corpus_spec_path.empty()) {
        std::ifstream in(opt.corpus_spec_path);
        if (!in)
            throw wcsed::Error("cannot open corpus spec: " +
                               opt.corpus_spec_path);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        items = wcsed::corpus_from_json(text);
    } else {
        items = wcsed::make_random_corpus(opt.synth_count, opt.synth_seed,
                                          opt.synth_rate);
    }

    std::vector<wcsed::LabelRow> labels(items.size());

    #pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(items.size()); ++i) {
        const auto& item = items[static_cast<std::size_t>(i)];
        auto [signal, label] = wcsed::synthesize_test_signal(item);
        const std::string file_name = item.name + ".wav";
        wcsed::save_wav((fs::path(opt.out_dir) / file_name).string(),
                        signal);
        labels[static_cast<std::size_t>(i)] = {file_name, label};
    }

    write_labels_csv((fs::path(opt.out_dir) / "labels.csv").string(),
                     labels);
    write_text_file(fs::path(opt.out_dir) / "corpus.json",
                    wcsed::corpus_to_json(items));
    std::cout << "wrote " << items.size() << " items to " << opt.out_dir
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"WCSED: wavelet convolution speech endpoint detection"};

    app.set_config("--config")
        ->envname("WCSED_CONFIG")
        ->description("flat key=value config file; flags override it");

    app.add_option("--mode", opt.mode, "detect | eval | synth")
        ->check(CLI::IsMember({"detect", "eval", "synth"}))
        ->capture_default_str();
    app.add_option("--input", opt.inputs,
                   "input WAV files or directories (detect mode)");
    app.add_option("--out-dir", opt.out_dir, "output directory")
        ->capture_default_str();
    app.add_option("--labels", opt.labels_path,
                   "label CSV (eval mode): path,start_frame,end_frame,group");
    app.add_flag("--trace", opt.trace,
                 "also write per-frame entropy traces (detect mode)");

    auto& d = opt.detector;
    app.add_option("--frame-ms", d.frame_ms, "frame length, ms")
        ->capture_default_str();
    app.add_option("--shift-ms", d.shift_ms, "frame shift, ms")
        ->capture_default_str();
    app.add_option("--bins", d.bins, "entropy histogram bins")
        ->capture_default_str();
    app.add_option("--otsu-bins", d.otsu_bins, "threshold histogram bins")
        ->capture_default_str();
    app.add_option("--gamma", d.gamma, "edge threshold factor")
        ->capture_default_str();
    app.add_option("--gap-frames", d.gap_frames,
                   "tolerated dip while stretching edges, frames")
        ->capture_default_str();
    app.add_option("--merge-ms", d.merge_ms,
                   "active-run merge window, ms")
        ->capture_default_str();
    app.add_option("--loudness-th", d.loudness_threshold,
                   "RMS pivot between mean and sum combination")
        ->capture_default_str();
    app.add_option("--coef-gate", d.coef_gate,
                   "relative floor below which combined coefficients are "
                   "zeroed")
        ->capture_default_str();
    app.add_option("--levels", d.cascade_levels, "wavelet cascade depth")
        ->capture_default_str();
    app.add_option("--scales-hf", d.hf_scales,
                   "explicit HF scale list (comma separated)")
        ->delimiter(',');
    app.add_option("--scales-lf", d.lf_scales,
                   "explicit LF scale list (comma separated)")
        ->delimiter(',');
    app.add_option("--hf-band", opt.hf_band,
                   "HF pseudo-frequency bounds hi,lo (Hz); generates 12 "
                   "log-spaced scales")
        ->delimiter(',')
        ->expected(2);
    app.add_option("--lf-band", opt.lf_band,
                   "LF pseudo-frequency bounds hi,lo (Hz); generates 6 "
                   "log-spaced scales")
        ->delimiter(',')
        ->expected(2);
    app.add_flag("--single-ce", d.single_entropy_vector,
                 "fuse both banks into one entropy vector for core and "
                 "edge passes");
    app.add_flag("--serial", opt.serial,
                 "run the serial reference path instead of OpenMP");
    app.add_option("--fft-threshold", d.fft_threshold_ops,
                   "multiply-add count above which convolution uses FFT")
        ->capture_default_str();

    app.add_option("--count", opt.synth_count,
                   "number of items (synth mode)")
        ->capture_default_str();
    app.add_option("--seed", opt.synth_seed, "master seed (synth mode)")
        ->capture_default_str();
    app.add_option("--sample-rate", opt.synth_rate,
                   "sample rate (synth mode)")
        ->capture_default_str();
    app.add_option("--corpus-spec", opt.corpus_spec_path,
                   "render an existing corpus spec JSON (synth mode)");

    CLI11_PARSE(app, argc, argv);

    try {
        opt.detector.execution = opt.serial ? wcsed::Execution::serial
                                            : wcsed::Execution::parallel;
        if (opt.mode == "detect")
            return run_detect(opt);
        if (opt.mode == "eval")
            return run_eval(opt);
        return run_synth(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
