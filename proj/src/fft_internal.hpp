#pragma once

#include <span>
#include <vector>

namespace wcsed::detail {

// Zero-padded real linear convolution, length a.size() + b.size() - 1.
std::vector<double> fft_convolve(std::span<const double> a,
                                 std::span<const double> b);

// Magnitude of the natural-length real-to-complex transform,
// bins 0 .. n/2.
std::vector<double> spectrum_magnitude(std::span<const double> x);

} // namespace wcsed::detail
