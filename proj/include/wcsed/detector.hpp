#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "wcsed/convolution.hpp"
#include "wcsed/framing.hpp"
#include "wcsed/signal.hpp"
#include "wcsed/wavelet.hpp"

namespace wcsed {

// Every tunable of the endpoint detector, preloaded with the values the
// pipeline was calibrated at.
struct DetectorConfig {
    double frame_ms = 20.0;
    double shift_ms = 10.0;
    int bins = 100;               // histogram bins per frame
    int otsu_bins = 256;          // histogram bins for threshold search
    double gamma = 0.8;           // edge threshold = gamma * core threshold
    int gap_frames = 3;           // tolerated below-threshold dip while walking
    double merge_ms = 300.0;      // active runs closer than this fuse
    double loudness_threshold = 0.1;  // RMS pivot between mean and sum combine
    double coef_gate = 0.08;      // combined values under gate*max are zeroed
    int cascade_levels = kDefaultCascadeLevels;
    std::vector<double> hf_scales;    // empty -> default bank
    std::vector<double> lf_scales;    // empty -> default bank
    bool single_entropy_vector = false; // fuse both banks into one vector
    Execution execution = Execution::parallel;
    std::size_t fft_threshold_ops = kDefaultFftThresholdOps;

    FrameSpec frame_spec(int sample_rate) const;
};

// Core (Otsu) threshold and the relaxed edge threshold derived from it.
struct ThresholdPair {
    double core = 0.0;
    double edge = 0.0;
};

// Detected utterance span in frame indices and in sample indices. The
// sample span covers the first sample of the start frame through the last
// sample of the end frame, clipped to the signal length.
struct EndpointResult {
    std::size_t start_frame = 0;
    std::size_t end_frame = 0;
    std::size_t start_sample = 0;
    std::size_t end_sample = 0;
    FrameSpec spec;
};

// Intermediate products of one detection, for tracing and reports.
struct DetectionTrace {
    EntropyVector ce_h;
    EntropyVector ce_l;
    ThresholdPair thresholds_h;
    ThresholdPair thresholds_l;
    std::pair<std::size_t, std::size_t> core_run{0, 0};
    ScaleBank bank;
    double loudness = 0.0;
};

// Convolves the signal with one kernel per scale and stores the first
// difference of each response, one row per scale.
CoefficientMatrix wave_conv(const SignalBuffer& signal,
                            std::span<const double> scales,
                            const MotherWavelet& base,
                            Execution exec = Execution::parallel,
                            std::size_t fft_threshold_ops =
                                kDefaultFftThresholdOps);

// Collapses the matrix across scales into one magnitude sequence: the
// columnwise mean of absolute values for loud recordings, the sum for
// quiet ones (ties fall to the sum branch).
std::vector<double> combine_coefficients(const CoefficientMatrix& matrix,
                                         double loudness,
                                         double loudness_threshold = 0.1);

// Zeroes every entry below `relative_floor` times the sequence maximum.
// Keeps frame entropy from amplifying residue far under the analysis
// band's working level.
void gate_coefficients(std::vector<double>& combined, double relative_floor);

// Maximizes between-class variance over a uniform histogram of the
// entropy values. Throws Error when the vector is constant.
double otsu_threshold(std::span<const double> values, int otsu_bins = 256);

ThresholdPair compute_thresholds(const EntropyVector& entropy, double gamma,
                                 int otsu_bins = 256);

// Longest run of frames at or above the core threshold, after fusing
// runs separated by less than merge_ms. Throws NoSpeechError when no
// frame qualifies.
std::pair<std::size_t, std::size_t>
detect_core_region(const EntropyVector& entropy, double core_threshold,
                   double merge_ms);

enum class WalkDirection { backward, forward };

// Walks outward from the anchor frame while the entropy stays at or above
// the edge threshold, tolerating up to gap_frames consecutive dips.
// Returns the last qualifying frame (the anchor itself if the first step
// already fails).
std::size_t include_edges(const EntropyVector& entropy, std::size_t anchor,
                          WalkDirection direction, double edge_threshold,
                          int gap_frames);

// Full pipeline: scale bank, wavelet convolution per bank, coefficient
// combination, entropy, thresholds, core region on the low band, edge
// walks on the high band, frame-to-sample mapping.
EndpointResult detect_endpoints(const SignalBuffer& signal,
                                const DetectorConfig& config = {},
                                DetectionTrace* trace = nullptr);

// Copies the detected sample span into a fresh buffer.
SignalBuffer extract_segment(const SignalBuffer& signal,
                             const EndpointResult& endpoints);

} // namespace wcsed
