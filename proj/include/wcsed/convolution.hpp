#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wcsed/errors.hpp"

namespace wcsed {

// Whether data-parallel stages run their OpenMP path or the plain serial
// loop kept as a reference. Both produce bit-identical output.
enum class Execution { serial, parallel };

// Full linear convolution, length n + m - 1. Direct O(n*m) evaluation;
// serves as the oracle for the transform-based route.
std::vector<double> convolve_direct(std::span<const double> signal,
                                    std::span<const double> kernel);

// Same contract as convolve_direct, computed via real FFTs. Small
// products use one zero-padded transform of a fast composite size; long
// signals against short kernels stream through fixed-size overlap-add
// blocks so cost stays linear in signal length.
std::vector<double> convolve_fft(std::span<const double> signal,
                                 std::span<const double> kernel);

// Central `signal.size()` samples of the full convolution, i.e. output k
// is full[k + (m - 1) / 2]. Dispatches to the direct route for small
// products and the FFT route above `fft_threshold_ops` multiply-adds.
inline constexpr std::size_t kDefaultFftThresholdOps = 1u << 18;

std::vector<double> convolve_same(std::span<const double> signal,
                                  std::span<const double> kernel,
                                  std::size_t fft_threshold_ops =
                                      kDefaultFftThresholdOps);

// y[i] = x[i + 1] - x[i], length n - 1. Requires n >= 2.
std::vector<double> first_difference(std::span<const double> x);

// Per-scale rows of the first difference of the same-size convolution,
// all rows equal in length (signal length minus one).
struct CoefficientMatrix {
    std::vector<double> scales;            // row labels, ascending
    std::vector<std::vector<double>> rows; // one row per scale
};

} // namespace wcsed
