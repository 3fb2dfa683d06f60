#include "wcsed/convolution.hpp"

#include <algorithm>
#include <complex>
#include <map>
#include <mutex>

#include <fftw3.h>

#include "fft_internal.hpp"

namespace wcsed {

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan inv = nullptr;
};

// FFTW planning is not thread safe, so plans are built once per transform
// size under a lock. Execution goes through the new-array interface, which
// is reentrant. Plans are kept for the process lifetime.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    PlanPair get(std::size_t n) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = plans_.find(n);
        if (it != plans_.end())
            return it->second;
        std::vector<double> re(n, 0.0);
        std::vector<std::complex<double>> cx(n / 2 + 1);
        PlanPair p;
        p.fwd = fftw_plan_dft_r2c_1d(
            static_cast<int>(n), re.data(),
            reinterpret_cast<fftw_complex*>(cx.data()),
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        p.inv = fftw_plan_dft_c2r_1d(
            static_cast<int>(n),
            reinterpret_cast<fftw_complex*>(cx.data()), re.data(),
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!p.fwd || !p.inv)
            throw Error("FFT plan creation failed for size " +
                        std::to_string(n));
        plans_.emplace(n, p);
        return p;
    }

private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<std::size_t, PlanPair> plans_;
};

// Smallest 5-smooth size >= n; FFTW handles these without the slow
// generic-prime fallback.
std::size_t next_fast_size(std::size_t n) {
    auto smooth = [](std::size_t v) {
        for (std::size_t p : {2u, 3u, 5u})
            while (v % p == 0)
                v /= p;
        return v == 1;
    };
    while (!smooth(n))
        ++n;
    return n;
}

// Above this product the single padded transform outgrows the cache and
// per-doubling cost turns superlinear; long signals stream through
// fixed-size blocks instead (overlap-add), which also keeps one plan hot.
constexpr std::size_t kSingleShotLimit = std::size_t{1} << 18;
constexpr std::size_t kBlockFftSize = std::size_t{1} << 17;

std::vector<double> fft_convolve_once(std::span<const double> a,
                                      std::span<const double> b,
                                      std::size_t need) {
    const std::size_t n = next_fast_size(need);
    const PlanPair plans = PlanCache::instance().get(n);

    std::vector<double> ta(n, 0.0), tb(n, 0.0);
    std::copy(a.begin(), a.end(), ta.begin());
    std::copy(b.begin(), b.end(), tb.begin());

    std::vector<std::complex<double>> fa(n / 2 + 1), fb(n / 2 + 1);
    fftw_execute_dft_r2c(plans.fwd, ta.data(),
                         reinterpret_cast<fftw_complex*>(fa.data()));
    fftw_execute_dft_r2c(plans.fwd, tb.data(),
                         reinterpret_cast<fftw_complex*>(fb.data()));
    for (std::size_t i = 0; i < fa.size(); ++i)
        fa[i] *= fb[i];
    fftw_execute_dft_c2r(plans.inv,
                         reinterpret_cast<fftw_complex*>(fa.data()),
                         ta.data());

    ta.resize(need);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (double& v : ta)
        v *= inv_n;
    return ta;
}

// Overlap-add: the filter spectrum is fixed once and the signal streams
// through cache-resident blocks, so cost stays linear in signal length.
std::vector<double> fft_convolve_blocks(std::span<const double> x,
                                        std::span<const double> h,
                                        std::size_t need) {
    const std::size_t fft_n = kBlockFftSize;
    const std::size_t payload = fft_n - h.size() + 1;
    const PlanPair plans = PlanCache::instance().get(fft_n);

    std::vector<double> block(fft_n, 0.0);
    std::vector<std::complex<double>> spec_h(fft_n / 2 + 1),
        spec_x(fft_n / 2 + 1);
    std::copy(h.begin(), h.end(), block.begin());
    fftw_execute_dft_r2c(plans.fwd, block.data(),
                         reinterpret_cast<fftw_complex*>(spec_h.data()));

    std::vector<double> out(need, 0.0);
    const double inv_n = 1.0 / static_cast<double>(fft_n);
    for (std::size_t off = 0; off < x.size(); off += payload) {
        const std::size_t len = std::min(payload, x.size() - off);
        std::copy(x.begin() + static_cast<std::ptrdiff_t>(off),
                  x.begin() + static_cast<std::ptrdiff_t>(off + len),
                  block.begin());
        std::fill(block.begin() + static_cast<std::ptrdiff_t>(len),
                  block.end(), 0.0);
        fftw_execute_dft_r2c(plans.fwd, block.data(),
                             reinterpret_cast<fftw_complex*>(spec_x.data()));
        for (std::size_t i = 0; i < spec_x.size(); ++i)
            spec_x[i] *= spec_h[i];
        fftw_execute_dft_c2r(plans.inv,
                             reinterpret_cast<fftw_complex*>(spec_x.data()),
                             block.data());
        const std::size_t valid = len + h.size() - 1;
        for (std::size_t i = 0; i < valid; ++i)
            out[off + i] += block[i] * inv_n;
    }
    return out;
}

} // namespace

namespace detail {

std::vector<double> fft_convolve(std::span<const double> a,
                                 std::span<const double> b) {
    const std::size_t need = a.size() + b.size() - 1;
    const std::span<const double> x = a.size() >= b.size() ? a : b;
    const std::span<const double> h = a.size() >= b.size() ? b : a;
    if (need <= kSingleShotLimit || h.size() > kBlockFftSize / 4)
        return fft_convolve_once(a, b, need);
    return fft_convolve_blocks(x, h, need);
}

std::vector<double> spectrum_magnitude(std::span<const double> x) {
    const std::size_t n = x.size();
    const PlanPair plans = PlanCache::instance().get(n);
    std::vector<double> t(x.begin(), x.end());
    std::vector<std::complex<double>> f(n / 2 + 1);
    fftw_execute_dft_r2c(plans.fwd, t.data(),
                         reinterpret_cast<fftw_complex*>(f.data()));
    std::vector<double> mag(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        mag[i] = std::abs(f[i]);
    return mag;
}

} // namespace detail

std::vector<double> convolve_direct(std::span<const double> signal,
                                    std::span<const double> kernel) {
    if (signal.empty() || kernel.empty())
        throw Error("convolution operands must be non-empty");
    std::vector<double> out(signal.size() + kernel.size() - 1, 0.0);
    for (std::size_t i = 0; i < signal.size(); ++i) {
        const double x = signal[i];
        if (x == 0.0)
            continue;
        for (std::size_t j = 0; j < kernel.size(); ++j)
            out[i + j] += x * kernel[j];
    }
    return out;
}

std::vector<double> convolve_fft(std::span<const double> signal,
                                 std::span<const double> kernel) {
    if (signal.empty() || kernel.empty())
        throw Error("convolution operands must be non-empty");
    return detail::fft_convolve(signal, kernel);
}

std::vector<double> convolve_same(std::span<const double> signal,
                                  std::span<const double> kernel,
                                  std::size_t fft_threshold_ops) {
    if (signal.empty() || kernel.empty())
        throw Error("convolution operands must be non-empty");
    if (kernel.size() > signal.size())
        throw Error("kernel longer than signal (" +
                    std::to_string(kernel.size()) + " > " +
                    std::to_string(signal.size()) + " samples)");
    const std::size_t ops = signal.size() * kernel.size();
    std::vector<double> full = ops > fft_threshold_ops
                                   ? convolve_fft(signal, kernel)
                                   : convolve_direct(signal, kernel);
    const std::size_t offset = (kernel.size() - 1) / 2;
    return std::vector<double>(full.begin() + offset,
                               full.begin() + offset + signal.size());
}

std::vector<double> first_difference(std::span<const double> x) {
    if (x.size() < 2)
        throw Error("first difference needs at least 2 samples");
    std::vector<double> out(x.size() - 1);
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        out[i] = x[i + 1] - x[i];
    return out;
}

} // namespace wcsed
