#include "wcsed/framing.hpp"

#include <algorithm>
#include <cmath>

namespace wcsed {

std::size_t FrameSpec::frame_length() const {
    return static_cast<std::size_t>(
        std::lround(frame_ms * sample_rate / 1000.0));
}

std::size_t FrameSpec::frame_shift() const {
    return static_cast<std::size_t>(
        std::lround(shift_ms * sample_rate / 1000.0));
}

void FrameSpec::validate() const {
    if (sample_rate <= 0)
        throw Error("frame spec requires a positive sample rate");
    if (!(shift_ms > 0.0) || shift_ms > frame_ms)
        throw Error("frame shift must satisfy 0 < shift <= frame length");
    if (frame_length() < 2)
        throw Error("frame length must round to at least 2 samples");
    if (frame_shift() < 1)
        throw Error("frame shift must round to at least 1 sample");
}

std::vector<std::pair<std::size_t, std::size_t>>
frame_indices(std::size_t n, const FrameSpec& spec) {
    spec.validate();
    const std::size_t fl = spec.frame_length();
    const std::size_t fsh = spec.frame_shift();
    if (n < fl)
        throw Error("sequence shorter than one frame (" +
                    std::to_string(n) + " < " + std::to_string(fl) +
                    " samples)");
    // Trailing partial frame dropped: last start satisfies
    // start + fl - 1 <= n - 1.
    const std::size_t count = (n - fl) / fsh + 1;
    std::vector<std::pair<std::size_t, std::size_t>> frames;
    frames.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        frames.emplace_back(i * fsh, i * fsh + fl - 1);
    return frames;
}

std::vector<double> histogram_probabilities(std::span<const double> frame,
                                            int bins) {
    if (frame.empty())
        throw Error("histogram of an empty frame");
    if (bins < 1)
        throw Error("histogram needs at least one bin");

    double lo = frame[0], hi = frame[0];
    for (double v : frame) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi == lo)
        return {1.0};

    std::vector<double> prob(static_cast<std::size_t>(bins), 0.0);
    const double scale = static_cast<double>(bins) / (hi - lo);
    const double weight = 1.0 / static_cast<double>(frame.size());
    for (double v : frame) {
        auto idx = static_cast<std::size_t>((v - lo) * scale);
        if (idx >= prob.size()) // the maximum maps into the last bin
            idx = prob.size() - 1;
        prob[idx] += weight;
    }
    return prob;
}

double frame_entropy(std::span<const double> frame, int bins) {
    const std::vector<double> prob = histogram_probabilities(frame, bins);
    double e = 0.0;
    for (double p : prob)
        if (p > 0.0)
            e -= p * std::log10(p);
    return e;
}

EntropyVector entropy_vector(std::span<const double> sequence,
                             const FrameSpec& spec, int bins,
                             Execution exec) {
    const auto frames = frame_indices(sequence.size(), spec);
    EntropyVector out;
    out.spec = spec;
    out.values.resize(frames.size());

    auto compute = [&](std::size_t i) {
        const auto& [start, end] = frames[i];
        out.values[i] =
            frame_entropy(sequence.subspan(start, end - start + 1), bins);
    };

    if (exec == Execution::parallel) {
        #pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(frames.size()); ++i)
            compute(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < frames.size(); ++i)
            compute(i);
    }
    return out;
}

} // namespace wcsed
