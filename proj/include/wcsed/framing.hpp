#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "wcsed/convolution.hpp"
#include "wcsed/errors.hpp"

namespace wcsed {

// Sliding analysis window: 20 ms frames advanced by 10 ms unless
// overridden. Frame length and shift are rounded to whole samples.
struct FrameSpec {
    double frame_ms = 20.0;
    double shift_ms = 10.0;
    int sample_rate = 0;

    std::size_t frame_length() const; // samples, >= 2
    std::size_t frame_shift() const;  // samples, >= 1

    // Throws Error unless 0 < shift_ms <= frame_ms and the rounded
    // sample counts satisfy the bounds above.
    void validate() const;
};

// Inclusive (start, end) sample index pairs of every complete frame.
// count = floor((n - frame_length) / frame_shift) + 1; throws Error when
// the sequence is shorter than one frame.
std::vector<std::pair<std::size_t, std::size_t>>
frame_indices(std::size_t n, const FrameSpec& spec);

// Occupancy probabilities of a uniform histogram over the frame's own
// [min, max] range. A constant frame collapses to the single bin {1.0};
// otherwise exactly `bins` entries summing to 1, the top value mapped to
// the last bin.
std::vector<double> histogram_probabilities(std::span<const double> frame,
                                            int bins);

// Shannon entropy (base-10 logarithm) of that histogram. Constant frames
// give 0; the value never exceeds log10(bins).
double frame_entropy(std::span<const double> frame, int bins);

// Per-frame entropy of a coefficient sequence.
struct EntropyVector {
    std::vector<double> values;
    FrameSpec spec;

    std::size_t size() const { return values.size(); }
};

EntropyVector entropy_vector(std::span<const double> sequence,
                             const FrameSpec& spec, int bins,
                             Execution exec = Execution::parallel);

} // namespace wcsed
