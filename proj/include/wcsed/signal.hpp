#pragma once

#include <cstddef>
#include <vector>

#include "wcsed/errors.hpp"

namespace wcsed {

// A mono discrete-time signal with amplitudes normalized to [-1, 1].
struct SignalBuffer {
    std::vector<double> samples;
    int sample_rate = 0;

    SignalBuffer() = default;

    // Validates the invariants: at least one sample, positive rate,
    // every amplitude inside [-1, 1]. Throws Error otherwise.
    SignalBuffer(std::vector<double> s, int rate);

    std::size_t size() const { return samples.size(); }
    double duration_s() const {
        return static_cast<double>(samples.size()) / sample_rate;
    }
};

// Averages interleaved-free channel buffers sample by sample into one
// mono signal. All channels must share the same length.
SignalBuffer to_mono(const std::vector<std::vector<double>>& channels,
                     int sample_rate);

// Root-mean-square amplitude of the whole buffer.
double rms_loudness(const SignalBuffer& signal);

} // namespace wcsed
