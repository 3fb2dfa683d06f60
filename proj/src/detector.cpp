#include "wcsed/detector.hpp"

#include <algorithm>
#include <cmath>

namespace wcsed {

FrameSpec DetectorConfig::frame_spec(int sample_rate) const {
    FrameSpec spec;
    spec.frame_ms = frame_ms;
    spec.shift_ms = shift_ms;
    spec.sample_rate = sample_rate;
    return spec;
}

namespace {

void validate_config(const DetectorConfig& config) {
    if (config.bins < 2)
        throw Error("entropy histogram needs at least 2 bins");
    if (config.otsu_bins < 2)
        throw Error("threshold histogram needs at least 2 bins");
    if (!(config.gamma > 0.0) || config.gamma > 1.0)
        throw Error("gamma must lie in (0, 1]");
    if (config.gap_frames < 0)
        throw Error("gap frames must be non-negative");
    if (config.merge_ms < 0.0)
        throw Error("merge window must be non-negative");
    if (config.loudness_threshold < 0.0)
        throw Error("loudness threshold must be non-negative");
    if (config.coef_gate < 0.0 || config.coef_gate >= 1.0)
        throw Error("coefficient gate must lie in [0, 1)");
    if (config.fft_threshold_ops < 1)
        throw Error("FFT threshold must be positive");
}

} // namespace

CoefficientMatrix wave_conv(const SignalBuffer& signal,
                            std::span<const double> scales,
                            const MotherWavelet& base, Execution exec,
                            std::size_t fft_threshold_ops) {
    if (scales.empty())
        throw Error("wave_conv requires at least one scale");
    if (signal.size() < 2)
        throw Error("wave_conv requires at least 2 samples");
    for (std::size_t i = 1; i < scales.size(); ++i)
        if (scales[i] <= scales[i - 1])
            throw Error("scales must be strictly ascending");

    CoefficientMatrix matrix;
    matrix.scales.assign(scales.begin(), scales.end());
    matrix.rows.resize(scales.size());

    auto compute_row = [&](std::size_t i) {
        const WaveletKernel kernel =
            kernel_at_scale(base, scales[i], signal.sample_rate);
        const std::vector<double> conv =
            convolve_same(signal.samples, kernel.taps, fft_threshold_ops);
        matrix.rows[i] = first_difference(conv);
    };

    if (exec == Execution::parallel) {
        #pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(scales.size()); ++i)
            compute_row(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < scales.size(); ++i)
            compute_row(i);
    }
    return matrix;
}

std::vector<double> combine_coefficients(const CoefficientMatrix& matrix,
                                         double loudness,
                                         double loudness_threshold) {
    if (matrix.rows.empty())
        throw Error("combine_coefficients on an empty matrix");
    const std::size_t n = matrix.rows.front().size();
    for (const auto& row : matrix.rows)
        if (row.size() != n)
            throw Error("coefficient matrix rows differ in length");

    std::vector<double> out(n, 0.0);
    for (const auto& row : matrix.rows)
        for (std::size_t c = 0; c < n; ++c)
            out[c] += std::abs(row[c]);
    if (loudness > loudness_threshold) { // tie keeps the sum branch
        const double inv = 1.0 / static_cast<double>(matrix.rows.size());
        for (double& v : out)
            v *= inv;
    }
    return out;
}

void gate_coefficients(std::vector<double>& combined,
                       double relative_floor) {
    if (relative_floor < 0.0 || relative_floor >= 1.0)
        throw Error("coefficient gate must lie in [0, 1)");
    if (relative_floor == 0.0 || combined.empty())
        return;
    double peak = 0.0;
    for (double v : combined)
        peak = std::max(peak, v);
    const double floor_value = relative_floor * peak;
    for (double& v : combined)
        if (v < floor_value)
            v = 0.0;
}

double otsu_threshold(std::span<const double> values, int otsu_bins) {
    if (values.size() < 2)
        throw Error("threshold needs at least 2 entropy values");
    if (otsu_bins < 2)
        throw Error("threshold histogram needs at least 2 bins");

    double lo = values[0], hi = values[0];
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi == lo)
        throw Error("constant entropy vector: no speech/silence contrast");

    const auto bins = static_cast<std::size_t>(otsu_bins);
    std::vector<double> hist(bins, 0.0);
    const double scale = static_cast<double>(bins) / (hi - lo);
    const double weight = 1.0 / static_cast<double>(values.size());
    for (double v : values) {
        auto idx = static_cast<std::size_t>((v - lo) * scale);
        if (idx >= bins)
            idx = bins - 1;
        hist[idx] += weight;
    }

    double mean_total = 0.0;
    for (std::size_t i = 0; i < bins; ++i)
        mean_total += static_cast<double>(i) * hist[i];

    // Split after bin t; keep the first maximizer of the between-class
    // variance so the result is deterministic under ties.
    double best_sigma = -1.0;
    std::size_t best_t = 0;
    double w0 = 0.0, mean0 = 0.0;
    for (std::size_t t = 0; t + 1 < bins; ++t) {
        w0 += hist[t];
        mean0 += static_cast<double>(t) * hist[t];
        const double w1 = 1.0 - w0;
        if (w0 <= 0.0 || w1 <= 0.0)
            continue;
        const double mu0 = mean0 / w0;
        const double mu1 = (mean_total - mean0) / w1;
        const double sigma = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (sigma > best_sigma) {
            best_sigma = sigma;
            best_t = t;
        }
    }
    const double bin_width = (hi - lo) / static_cast<double>(bins);
    return lo + static_cast<double>(best_t + 1) * bin_width;
}

ThresholdPair compute_thresholds(const EntropyVector& entropy, double gamma,
                                 int otsu_bins) {
    if (!(gamma > 0.0) || gamma > 1.0)
        throw Error("gamma must lie in (0, 1]");
    ThresholdPair pair;
    pair.core = otsu_threshold(entropy.values, otsu_bins);
    pair.edge = gamma * pair.core;
    return pair;
}

std::pair<std::size_t, std::size_t>
detect_core_region(const EntropyVector& entropy, double core_threshold,
                   double merge_ms) {
    const std::vector<double>& v = entropy.values;

    std::vector<std::pair<std::size_t, std::size_t>> runs;
    std::size_t i = 0;
    while (i < v.size()) {
        if (v[i] >= core_threshold) {
            std::size_t j = i;
            while (j + 1 < v.size() && v[j + 1] >= core_threshold)
                ++j;
            runs.emplace_back(i, j);
            i = j + 1;
        } else {
            ++i;
        }
    }
    if (runs.empty())
        throw NoSpeechError("no speech detected: no frame reaches the "
                            "core threshold");

    // Gaps shorter than the merge window are intra-speech pauses.
    std::vector<std::pair<std::size_t, std::size_t>> merged{runs.front()};
    for (std::size_t r = 1; r < runs.size(); ++r) {
        const double gap_ms =
            static_cast<double>(runs[r].first - merged.back().second - 1) *
            entropy.spec.shift_ms;
        if (gap_ms < merge_ms)
            merged.back().second = runs[r].second;
        else
            merged.push_back(runs[r]);
    }

    std::size_t best = 0;
    for (std::size_t r = 1; r < merged.size(); ++r)
        if (merged[r].second - merged[r].first >
            merged[best].second - merged[best].first)
            best = r;
    return merged[best];
}

std::size_t include_edges(const EntropyVector& entropy, std::size_t anchor,
                          WalkDirection direction, double edge_threshold,
                          int gap_frames) {
    const std::vector<double>& v = entropy.values;
    if (anchor >= v.size())
        throw Error("edge walk anchor out of range");
    if (gap_frames < 0)
        throw Error("gap frames must be non-negative");

    const long long step = direction == WalkDirection::backward ? -1 : 1;
    const auto n = static_cast<long long>(v.size());
    long long pos = static_cast<long long>(anchor);
    long long result = pos;
    int dip = 0;
    while (true) {
        const long long next = pos + step;
        if (next < 0 || next >= n)
            break;
        if (v[next] >= edge_threshold) {
            result = next;
            dip = 0;
        } else if (++dip >= gap_frames) {
            break;
        }
        pos = next;
    }
    return static_cast<std::size_t>(result);
}

EndpointResult detect_endpoints(const SignalBuffer& signal,
                                const DetectorConfig& config,
                                DetectionTrace* trace) {
    validate_config(config);
    const FrameSpec spec = config.frame_spec(signal.sample_rate);
    spec.validate();
    if (signal.size() < spec.frame_length() + spec.frame_shift())
        throw Error("signal shorter than two analysis frames");

    ScaleBank bank;
    if (config.hf_scales.empty() && config.lf_scales.empty()) {
        bank = default_scale_bank(signal.sample_rate, config.cascade_levels);
    } else {
        bank.hf_scales = config.hf_scales;
        bank.lf_scales = config.lf_scales;
    }
    validate_scale_bank(bank, signal.sample_rate, config.cascade_levels);

    const MotherWavelet mother =
        sample_mother_wavelet(config.cascade_levels);
    const double loudness = rms_loudness(signal);

    auto bank_entropy = [&](std::span<const double> scales) {
        const CoefficientMatrix matrix =
            wave_conv(signal, scales, mother, config.execution,
                      config.fft_threshold_ops);
        std::vector<double> combined = combine_coefficients(
            matrix, loudness, config.loudness_threshold);
        gate_coefficients(combined, config.coef_gate);
        return entropy_vector(combined, spec, config.bins,
                              config.execution);
    };

    EntropyVector ce_h, ce_l;
    ThresholdPair th_h, th_l;
    std::pair<std::size_t, std::size_t> core;
    std::size_t start_frame, end_frame;

    if (config.single_entropy_vector) {
        // Fused variant: one entropy vector over the union bank; the
        // relaxed threshold stretches the start edge, the core threshold
        // the end edge.
        std::vector<double> scales = bank.hf_scales;
        scales.insert(scales.end(), bank.lf_scales.begin(),
                      bank.lf_scales.end());
        std::sort(scales.begin(), scales.end());
        const EntropyVector ce = bank_entropy(scales);
        const ThresholdPair th =
            compute_thresholds(ce, config.gamma, config.otsu_bins);
        core = detect_core_region(ce, th.core, config.merge_ms);
        start_frame = include_edges(ce, core.first, WalkDirection::backward,
                                    th.edge, config.gap_frames);
        end_frame = include_edges(ce, core.second, WalkDirection::forward,
                                  th.core, config.gap_frames);
        ce_h = ce;
        ce_l = ce;
        th_h = th;
        th_l = th;
    } else {
        // Split variant: LF entropy locates the voiced core, HF entropy
        // stretches both edges over fricatives and plosives.
        ce_h = bank_entropy(bank.hf_scales);
        ce_l = bank_entropy(bank.lf_scales);
        th_h = compute_thresholds(ce_h, config.gamma, config.otsu_bins);
        th_l = compute_thresholds(ce_l, config.gamma, config.otsu_bins);
        core = detect_core_region(ce_l, th_l.core, config.merge_ms);
        start_frame = include_edges(ce_h, core.first,
                                    WalkDirection::backward, th_h.edge,
                                    config.gap_frames);
        end_frame = include_edges(ce_h, core.second,
                                  WalkDirection::forward, th_h.edge,
                                  config.gap_frames);
    }

    EndpointResult result;
    result.start_frame = start_frame;
    result.end_frame = end_frame;
    result.spec = spec;
    result.start_sample = start_frame * spec.frame_shift();
    result.end_sample =
        std::min(end_frame * spec.frame_shift() + spec.frame_length() - 1,
                 signal.size() - 1);

    if (trace) {
        trace->ce_h = std::move(ce_h);
        trace->ce_l = std::move(ce_l);
        trace->thresholds_h = th_h;
        trace->thresholds_l = th_l;
        trace->core_run = core;
        trace->bank = std::move(bank);
        trace->loudness = loudness;
    }
    return result;
}

SignalBuffer extract_segment(const SignalBuffer& signal,
                             const EndpointResult& endpoints) {
    if (endpoints.start_sample > endpoints.end_sample ||
        endpoints.end_sample >= signal.size())
        throw Error("endpoint result out of range for this signal");
    std::vector<double> slice(
        signal.samples.begin() +
            static_cast<std::ptrdiff_t>(endpoints.start_sample),
        signal.samples.begin() +
            static_cast<std::ptrdiff_t>(endpoints.end_sample) + 1);
    return SignalBuffer(std::move(slice), signal.sample_rate);
}

} // namespace wcsed
