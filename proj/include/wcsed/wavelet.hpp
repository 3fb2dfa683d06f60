#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "wcsed/errors.hpp"

namespace wcsed {

inline constexpr int kDefaultCascadeLevels = 10;

// Orthonormal Daubechies scaling filter with 8 vanishing moments
// (16 taps, sum = sqrt(2)).
const std::array<double, 16>& db8_scaling_filter();

// The mother wavelet sampled on a dyadic grid of step 2^-levels over its
// compact support [0, 15], unit L2 norm on that grid.
struct MotherWavelet {
    std::vector<double> taps;
    int levels = 0;

    double grid_step() const;            // 2^-levels
    double support() const;              // (taps.size() - 1) * grid_step()
};

// Runs the cascade (inverse transform iteration) on the db8 filter pair.
// levels must be >= 1; each level doubles the grid resolution.
MotherWavelet sample_mother_wavelet(int levels = kDefaultCascadeLevels);

// Dominant normalized frequency of the sampled mother wavelet, taken from
// the peak magnitude bin of its discrete Fourier transform. Cached per
// cascade depth; thread safe.
double wavelet_center_frequency(int levels = kDefaultCascadeLevels);

// One scaled convolution kernel: the mother wavelet stretched by `scale`,
// resampled on the signal grid, forced to exact zero mean and unit L2 norm.
struct WaveletKernel {
    double scale = 0.0;
    double pseudo_frequency_hz = 0.0;
    std::vector<double> taps;
};

WaveletKernel kernel_at_scale(const MotherWavelet& base, double scale,
                              int sample_rate);

// Pseudo-frequency (Hz) analyzed by a kernel at the given scale, and the
// inverse mapping.
double scale_to_frequency(double scale, int sample_rate,
                          int levels = kDefaultCascadeLevels);
double frequency_to_scale(double frequency_hz, int sample_rate,
                          int levels = kDefaultCascadeLevels);

// Two ascending scale lists covering the speech band: a dense high
// frequency bank for endpoint edges and a sparse low frequency bank for
// the voiced core.
struct ScaleBank {
    std::vector<double> hf_scales;
    std::vector<double> lf_scales;
};

// Log-spaced default bank: 12 HF scales spanning roughly 3.2 kHz down to
// 1 kHz and 6 LF scales from roughly 300 Hz up to 820 Hz. Requires
// sample_rate >= 8000 so the top of the band stays below Nyquist.
ScaleBank default_scale_bank(int sample_rate,
                             int levels = kDefaultCascadeLevels);

// Enforces the bank invariants: both lists ascending and positive, more
// HF scales than LF scales, every HF scale below every LF scale, and all
// implied pseudo-frequencies inside the speech analysis band (300 Hz up
// to the 3.2 kHz ceiling the scale-frequency map is anchored at).
void validate_scale_bank(const ScaleBank& bank, int sample_rate,
                         int levels = kDefaultCascadeLevels);

} // namespace wcsed
