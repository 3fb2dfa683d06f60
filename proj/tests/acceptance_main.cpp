// Acceptance suite: one line of output per criterion, nonzero exit when
// any criterion fails. Kept free of the unit test framework so the pass
// conditions and tolerances are visible in one place.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <exception>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "wcsed/convolution.hpp"
#include "wcsed/detector.hpp"
#include "wcsed/eval.hpp"
#include "wcsed/framing.hpp"
#include "wcsed/report.hpp"
#include "wcsed/wavelet.hpp"

using namespace wcsed;

namespace {

int failures = 0;

void verdict(int criterion, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL",
                criterion, detail.c_str());
    std::fflush(stdout);
    if (!pass)
        ++failures;
}

void abort_criterion(int criterion, const std::exception& e) {
    verdict(criterion, false, std::string("exception: ") + e.what());
}

std::string format(const char* fmt, ...) {
    char buf[256];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, args);
    va_end(args);
    return buf;
}

// One evaluated corpus item, shared by criteria 2, 3, 4 and 8.
struct CorpusRun {
    CorpusItemSpec spec;
    SignalBuffer signal;
    GroundTruthLabel truth;
    EndpointResult result;
    DetectionTrace trace;
};

std::vector<CorpusRun> evaluate_corpus(int n, std::uint64_t seed) {
    std::vector<CorpusRun> runs;
    for (const CorpusItemSpec& spec : make_random_corpus(n, seed)) {
        CorpusRun run;
        run.spec = spec;
        auto rendered = synthesize_test_signal(spec);
        run.signal = std::move(rendered.first);
        run.truth = rendered.second;
        run.result = detect_endpoints(run.signal, {}, &run.trace);
        runs.push_back(std::move(run));
    }
    return runs;
}

// NSA burst span in frame indices, optionally widened by a margin.
std::pair<long long, long long> burst_frames(const BurstSpec& burst,
                                             long long margin = 0) {
    const auto lo =
        static_cast<long long>(std::floor(burst.start_s * 100.0));
    const auto hi = static_cast<long long>(
        std::ceil((burst.start_s + burst.dur_s) * 100.0));
    return {lo - margin, hi + margin};
}

void criterion_1_scale_map() {
    const std::pair<double, double> anchors[] = {
        {10.0, 3200.0}, {23.0, 1391.0}, {50.0, 640.0}, {100.0, 320.0}};
    double worst = 0.0;
    for (const auto& [scale, hz] : anchors) {
        const double f = scale_to_frequency(scale, 48000);
        worst = std::max(worst, std::abs(f - hz) / hz);
    }
    verdict(1, worst <= 0.05,
            format("scale map anchors 10/23/50/100 at 48 kHz within 5%% "
                   "(worst %.3f%%)",
                   worst * 100.0));
}

void criterion_2_corpus_deviation(const std::vector<CorpusRun>& runs) {
    std::vector<DeviationReport::Item> items;
    std::size_t within3 = 0;
    for (const CorpusRun& run : runs) {
        const auto [start_pct, end_pct] =
            frame_deviation(run.truth, run.result);
        DeviationReport::Item item;
        item.path = run.spec.name;
        item.group = run.truth.group;
        item.start_pct = start_pct;
        item.end_pct = end_pct;
        items.push_back(item);

        const auto gap = [](std::size_t a, std::size_t b) {
            return a > b ? a - b : b - a;
        };
        if (gap(run.result.start_frame, run.truth.start_frame) <= 3 &&
            gap(run.result.end_frame, run.truth.end_frame) <= 3)
            ++within3;
    }
    const DeviationReport report = aggregate_report(std::move(items));
    const double need =
        std::ceil(0.95 * static_cast<double>(runs.size()));
    const bool pass =
        report.overall_start_pct <= 3.0 && report.overall_end_pct <= 5.0 &&
        static_cast<double>(within3) >= need;
    verdict(2, pass,
            format("%zu-item corpus: start %.3f%% (<=3%%), end %.3f%% "
                   "(<=5%%), %zu/%zu within +/-3 frames (need %.0f)",
                   runs.size(), report.overall_start_pct,
                   report.overall_end_pct, within3, runs.size(), need));
}

void criterion_3_entropy_contrast(const std::vector<CorpusRun>& runs) {
    double worst_ratio = std::numeric_limits<double>::infinity();
    std::size_t violations = 0;
    for (const CorpusRun& run : runs) {
        const std::vector<double>& ce = run.trace.ce_l.values;
        const auto frames = static_cast<long long>(ce.size());
        const auto speech_lo = static_cast<long long>(run.truth.start_frame);
        const auto speech_hi = static_cast<long long>(run.truth.end_frame);

        double speech_sum = 0.0, silence_sum = 0.0;
        std::size_t speech_n = 0, silence_n = 0;
        for (long long f = 0; f < frames; ++f) {
            if (f >= speech_lo && f <= speech_hi) {
                speech_sum += ce[static_cast<std::size_t>(f)];
                ++speech_n;
                continue;
            }
            // Silence means clear of the utterance boundary and of every
            // NSA burst by at least two frames.
            if (f >= speech_lo - 2 && f <= speech_hi + 2)
                continue;
            bool near_burst = false;
            for (const BurstSpec& burst : run.spec.bursts) {
                const auto [lo, hi] = burst_frames(burst, 2);
                if (f >= lo && f <= hi) {
                    near_burst = true;
                    break;
                }
            }
            if (near_burst)
                continue;
            silence_sum += ce[static_cast<std::size_t>(f)];
            ++silence_n;
        }
        const double speech_mean =
            speech_sum / static_cast<double>(speech_n);
        const double silence_mean =
            silence_n ? silence_sum / static_cast<double>(silence_n) : 0.0;
        if (silence_mean == 0.0) {
            if (speech_mean <= 0.0)
                ++violations;
            continue;
        }
        const double ratio = speech_mean / silence_mean;
        worst_ratio = std::min(worst_ratio, ratio);
        if (ratio < 2.0)
            ++violations;
    }
    std::string note = std::isinf(worst_ratio)
                           ? std::string("all silence means exactly zero")
                           : format("worst ratio %.2fx", worst_ratio);
    verdict(3, violations == 0,
            format("low-band entropy speech/silence contrast >= 2x on "
                   "every item (%s, %zu violations)",
                   note.c_str(), violations));
}

void criterion_4_nsa_rejection(const std::vector<CorpusRun>& runs) {
    std::size_t violations = 0;
    std::size_t bursts = 0;
    for (const CorpusRun& run : runs) {
        for (const BurstSpec& burst : run.spec.bursts) {
            ++bursts;
            const auto [lo, hi] = burst_frames(burst);
            const auto start = static_cast<long long>(run.result.start_frame);
            const auto end = static_cast<long long>(run.result.end_frame);
            if ((start >= lo && start <= hi) || (end >= lo && end <= hi))
                ++violations;
        }
    }
    verdict(4, violations == 0,
            format("no endpoint inside any of %zu NSA burst spans "
                   "(%zu violations)",
                   bursts, violations));
}

void criterion_5_convolution_equivalence() {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<std::size_t> len(16, 4096);
    std::uniform_real_distribution<double> value(-1.0, 1.0);

    double worst = 0.0;
    for (int pair = 0; pair < 1000; ++pair) {
        const std::size_t n = len(rng);
        const std::size_t m =
            std::uniform_int_distribution<std::size_t>(1, n)(rng);
        std::vector<double> signal(n), kernel(m);
        for (double& v : signal)
            v = value(rng);
        for (double& v : kernel)
            v = value(rng);

        const std::vector<double> direct = convolve_direct(signal, kernel);
        const std::vector<double> fft = convolve_fft(signal, kernel);
        double diff = 0.0, ref = 0.0;
        for (std::size_t i = 0; i < direct.size(); ++i) {
            diff = std::max(diff, std::abs(direct[i] - fft[i]));
            ref = std::max(ref, std::abs(direct[i]));
        }
        worst = std::max(worst, diff / std::max(ref, 1e-300));
    }
    verdict(5, worst <= 1e-9,
            format("direct vs FFT route on 1000 random pairs (<= 4096 "
                   "samples): worst relative error %.2e",
                   worst));
}

void criterion_6_kernel_admissibility() {
    const MotherWavelet mother = sample_mother_wavelet();
    const ScaleBank bank = default_scale_bank(48000);
    std::vector<double> scales = bank.hf_scales;
    scales.insert(scales.end(), bank.lf_scales.begin(),
                  bank.lf_scales.end());

    double worst_mean = 0.0, worst_norm = 0.0;
    for (double scale : scales) {
        const WaveletKernel kernel = kernel_at_scale(mother, scale, 48000);
        double sum = 0.0, energy = 0.0, peak = 0.0;
        for (double tap : kernel.taps) {
            sum += tap;
            energy += tap * tap;
            peak = std::max(peak, std::abs(tap));
        }
        worst_mean = std::max(worst_mean, std::abs(sum) / peak);
        worst_norm =
            std::max(worst_norm, std::abs(std::sqrt(energy) - 1.0));
    }
    verdict(6, worst_mean <= 1e-6 && worst_norm <= 1e-9,
            format("all %zu bank kernels: |mean|/max|tap| <= 1e-6 "
                   "(worst %.2e), |L2-1| <= 1e-9 (worst %.2e)",
                   scales.size(), worst_mean, worst_norm));
}

void criterion_7_entropy_properties() {
    const int bins = 100;
    const double cap = std::log10(static_cast<double>(bins));
    std::mt19937_64 rng(777);
    auto unit = [&] {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };

    bool bounds_ok = true;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> frame(256);
        for (double& v : frame)
            v = 2.0 * unit() - 1.0;
        const double e = frame_entropy(frame, bins);
        bounds_ok = bounds_ok && e >= 0.0 && e <= cap + 1e-12;
    }

    // Shift by an integer and scale by a power of two: both leave the
    // min-max binning bit-identical. The shifted frames are quantized so
    // the addition itself stays exact.
    bool invariance_ok = true;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> frame(192);
        for (double& v : frame)
            v = std::round(unit() * 0x1.0p40) * 0x1.0p-40;
        const double e = frame_entropy(frame, bins);
        std::vector<double> shifted = frame, scaled = frame;
        for (double& v : shifted)
            v += 16.0;
        for (double& v : scaled)
            v *= 0x1.0p-6;
        invariance_ok = invariance_ok &&
                        frame_entropy(shifted, bins) == e &&
                        frame_entropy(scaled, bins) == e;
    }

    const bool constant_ok =
        frame_entropy(std::vector<double>(128, 0.7), bins) == 0.0;

    std::vector<double> spread(static_cast<std::size_t>(bins));
    for (int i = 0; i < bins; ++i)
        spread[static_cast<std::size_t>(i)] = i + 0.5;
    const bool equi_ok =
        std::abs(frame_entropy(spread, bins) - cap) <= 1e-9;

    verdict(7, bounds_ok && invariance_ok && constant_ok && equi_ok,
            format("entropy bounds [0, log10 %d], exact shift/scale "
                   "invariance, constant->0, equiprobable->log10 %d "
                   "(bounds %s, invariance %s, constant %s, equi %s)",
                   bins, bins, bounds_ok ? "ok" : "BAD",
                   invariance_ok ? "ok" : "BAD",
                   constant_ok ? "ok" : "BAD", equi_ok ? "ok" : "BAD"));
}

void criterion_8_determinism(const std::vector<CorpusRun>& runs) {
    const std::size_t items = std::min<std::size_t>(5, runs.size());
    bool identical = true;
    std::size_t renders = 0;
    for (std::size_t i = 0; i < items; ++i) {
        std::string reference;
        for (int repeat = 0; repeat < 10; ++repeat) {
            DetectionTrace trace;
            const EndpointResult result =
                detect_endpoints(runs[i].signal, {}, &trace);
            const std::string artifact = endpoints_to_json(
                runs[i].spec.name + ".wav", runs[i].signal.sample_rate,
                result, trace, {});
            ++renders;
            if (repeat == 0)
                reference = artifact;
            else
                identical = identical && artifact == reference;
        }
    }
    verdict(8, identical,
            format("%zu endpoint JSON renders over 10 repeated runs of "
                   "%zu items byte-identical",
                   renders, items));
}

void criterion_9_linear_scaling() {
    CorpusItemSpec base;
    base.name = "scaling";
    base.seed = 5;
    base.speech_start_s = 0.8;
    base.speech_dur_s = 1.5;

    auto render = [&](double total_s) {
        CorpusItemSpec spec = base;
        spec.total_s = total_s;
        return synthesize_test_signal(spec).first;
    };
    const SignalBuffer latency_signal = render(3.0);
    const SignalBuffer short_signal = render(6.0);
    const SignalBuffer long_signal = render(12.0);

    auto time_detect = [](const SignalBuffer& signal) {
        const auto t0 = std::chrono::steady_clock::now();
        detect_endpoints(signal);
        const auto t1 = std::chrono::steady_clock::now();
        return std::chrono::duration<double>(t1 - t0).count();
    };

    // Warm the transform plan cache, then interleave the trials so load
    // drift spreads evenly over both durations.
    time_detect(latency_signal);
    time_detect(short_signal);
    time_detect(long_signal);

    double latency_mean = 0.0, short_mean = 0.0, long_mean = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        latency_mean += time_detect(latency_signal);
        short_mean += time_detect(short_signal);
        long_mean += time_detect(long_signal);
    }
    latency_mean /= 5.0;
    short_mean /= 5.0;
    long_mean /= 5.0;
    const double ratio = long_mean / short_mean;

    verdict(9, ratio >= 1.6 && ratio <= 2.6 && latency_mean < 2.0,
            format("doubling 6 s -> 12 s scales wall time by %.2fx "
                   "(need 1.6-2.6); 3 s detect mean %.3f s (< 2 s)",
                   ratio, latency_mean));
}

} // namespace

int main() {
    try {
        criterion_1_scale_map();
    } catch (const std::exception& e) {
        abort_criterion(1, e);
    }

    std::vector<CorpusRun> runs;
    try {
        runs = evaluate_corpus(50, 1);
    } catch (const std::exception& e) {
        abort_criterion(2, e);
        abort_criterion(3, e);
        abort_criterion(4, e);
    }
    if (!runs.empty()) {
        try {
            criterion_2_corpus_deviation(runs);
        } catch (const std::exception& e) {
            abort_criterion(2, e);
        }
        try {
            criterion_3_entropy_contrast(runs);
        } catch (const std::exception& e) {
            abort_criterion(3, e);
        }
        try {
            criterion_4_nsa_rejection(runs);
        } catch (const std::exception& e) {
            abort_criterion(4, e);
        }
    }

    try {
        criterion_5_convolution_equivalence();
    } catch (const std::exception& e) {
        abort_criterion(5, e);
    }
    try {
        criterion_6_kernel_admissibility();
    } catch (const std::exception& e) {
        abort_criterion(6, e);
    }
    try {
        criterion_7_entropy_properties();
    } catch (const std::exception& e) {
        abort_criterion(7, e);
    }
    try {
        if (!runs.empty())
            criterion_8_determinism(runs);
        else
            verdict(8, false, "corpus unavailable");
    } catch (const std::exception& e) {
        abort_criterion(8, e);
    }
    try {
        criterion_9_linear_scaling();
    } catch (const std::exception& e) {
        abort_criterion(9, e);
    }

    std::printf("%d of 9 criteria passed\n", 9 - failures);
    return failures == 0 ? 0 : 1;
}
