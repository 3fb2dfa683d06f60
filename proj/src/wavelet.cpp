#include "wcsed/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "fft_internal.hpp"

namespace wcsed {

namespace {

// Daubechies scaling filter, 8 vanishing moments. Obtained by spectral
// factorization of the degree-15 half-band product filter, minimum-phase
// root selection, normalized so the taps sum to sqrt(2).
constexpr std::array<double, 16> kDb8ScalingFilter = {
    5.4415842243103946e-02,  3.1287159091429961e-01,
    6.7563073629728909e-01,  5.8535468365420651e-01,
    -1.5829105256348515e-02, -2.8401554296154635e-01,
    4.7248457391308010e-04,  1.2874742662047872e-01,
    -1.7369301001807849e-02, -4.4088253930794581e-02,
    1.3981027917398262e-02,  8.7460940474057489e-03,
    -4.8703529934515611e-03, -3.9174037337694732e-04,
    6.7544940645056846e-04,  -1.1747678412476935e-04,
};

constexpr double kBandLoHz = 300.0;
constexpr double kBandHiHz = 3200.0;

} // namespace

const std::array<double, 16>& db8_scaling_filter() {
    return kDb8ScalingFilter;
}

double MotherWavelet::grid_step() const {
    return std::ldexp(1.0, -levels);
}

double MotherWavelet::support() const {
    return static_cast<double>(taps.size() - 1) * grid_step();
}

MotherWavelet sample_mother_wavelet(int levels) {
    if (levels < 4)
        throw Error("cascade levels must be at least 4 to resolve the "
                    "16-tap filter");
    if (levels > 16)
        throw Error("cascade levels above 16 are not supported");

    const auto& h = db8_scaling_filter();
    const int filter_len = static_cast<int>(h.size());

    // Quadrature mirror start: one unit detail coefficient seen through
    // the highpass filter, then levels-1 synthesis refinements through
    // the lowpass, each halving the grid step.
    std::vector<double> psi(filter_len);
    for (int k = 0; k < filter_len; ++k)
        psi[k] = ((k & 1) ? -1.0 : 1.0) * h[filter_len - 1 - k];

    const double sqrt2 = std::sqrt(2.0);
    for (int level = 1; level < levels; ++level) {
        std::vector<double> up(2 * psi.size() - 1, 0.0);
        for (std::size_t i = 0; i < psi.size(); ++i)
            up[2 * i] = psi[i];
        std::vector<double> next(up.size() + filter_len - 1, 0.0);
        for (std::size_t i = 0; i < up.size(); i += 2) {
            const double v = up[i];
            for (int j = 0; j < filter_len; ++j)
                next[i + j] += v * h[j];
        }
        for (double& v : next)
            v *= sqrt2;
        psi = std::move(next);
    }

    double norm = 0.0;
    for (double v : psi)
        norm += v * v;
    norm = std::sqrt(norm);
    for (double& v : psi)
        v /= norm;

    MotherWavelet mother;
    mother.taps = std::move(psi);
    mother.levels = levels;
    return mother;
}

double wavelet_center_frequency(int levels) {
    static std::map<int, double> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(levels);
    if (it != cache.end())
        return it->second;

    const MotherWavelet mother = sample_mother_wavelet(levels);
    const std::vector<double> mag = detail::spectrum_magnitude(mother.taps);
    std::size_t peak = 1; // zero-mean wavelet: DC bin carries no energy
    for (std::size_t k = 1; k < mag.size(); ++k)
        if (mag[k] > mag[peak])
            peak = k;
    const double fc = static_cast<double>(peak) /
                      (static_cast<double>(mother.taps.size()) *
                       mother.grid_step());
    cache.emplace(levels, fc);
    return fc;
}

WaveletKernel kernel_at_scale(const MotherWavelet& base, double scale,
                              int sample_rate) {
    if (!(scale > 0.0))
        throw Error("scale must be positive");
    if (sample_rate <= 0)
        throw Error("sample rate must be positive");
    if (base.taps.size() < 2)
        throw Error("mother wavelet has too few taps");

    const std::size_t len =
        static_cast<std::size_t>(std::floor(base.support() * scale)) + 1;
    if (len < 2)
        throw Error("scale " + std::to_string(scale) +
                    " yields a kernel shorter than 2 taps");

    // Linear interpolation of the dense cascade grid at signal-sample
    // positions j/scale.
    const double step = 1.0 / (scale * base.grid_step());
    const std::size_t last = base.taps.size() - 1;
    std::vector<double> taps(len);
    for (std::size_t j = 0; j < len; ++j) {
        const double pos = static_cast<double>(j) * step;
        const std::size_t i0 =
            std::min(static_cast<std::size_t>(pos), last);
        const std::size_t i1 = std::min(i0 + 1, last);
        const double frac = pos - static_cast<double>(i0);
        taps[j] = base.taps[i0] * (1.0 - frac) + base.taps[i1] * frac;
    }

    // Interpolation drifts the mean slightly off zero; restore the
    // zero-average condition exactly, apply the 1/sqrt(s) dilation
    // normalization, then pin the L2 norm.
    double mean = 0.0;
    for (double v : taps)
        mean += v;
    mean /= static_cast<double>(len);
    const double amp = 1.0 / std::sqrt(scale);
    double norm = 0.0;
    for (double& v : taps) {
        v = (v - mean) * amp;
        norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0)
        throw Error("degenerate kernel at scale " + std::to_string(scale));
    for (double& v : taps)
        v /= norm;

    WaveletKernel kernel;
    kernel.scale = scale;
    kernel.pseudo_frequency_hz =
        scale_to_frequency(scale, sample_rate, base.levels);
    kernel.taps = std::move(taps);
    return kernel;
}

double scale_to_frequency(double scale, int sample_rate, int levels) {
    if (!(scale > 0.0))
        throw Error("scale must be positive");
    if (sample_rate <= 0)
        throw Error("sample rate must be positive");
    return wavelet_center_frequency(levels) * sample_rate / scale;
}

double frequency_to_scale(double frequency_hz, int sample_rate, int levels) {
    if (!(frequency_hz > 0.0))
        throw Error("frequency must be positive");
    if (sample_rate <= 0)
        throw Error("sample rate must be positive");
    return wavelet_center_frequency(levels) * sample_rate / frequency_hz;
}

ScaleBank default_scale_bank(int sample_rate, int levels) {
    if (sample_rate < 8000)
        throw Error("sample rate " + std::to_string(sample_rate) +
                    " Hz cannot represent the 3 kHz analysis band");

    ScaleBank bank;
    // 12 pseudo-frequencies log-spaced over [1000, 3200] Hz, endpoints
    // included; 6 over [300, 1000) Hz. Low scale = high frequency, so the
    // scale lists come out ascending after inversion.
    for (int i = 0; i < 12; ++i) {
        const double f = kBandHiHz * std::pow(1000.0 / kBandHiHz,
                                              static_cast<double>(i) / 11.0);
        bank.hf_scales.push_back(frequency_to_scale(f, sample_rate, levels));
    }
    for (int j = 0; j < 6; ++j) {
        const double f = kBandLoHz * std::pow(1000.0 / kBandLoHz,
                                              static_cast<double>(j) / 6.0);
        bank.lf_scales.push_back(frequency_to_scale(f, sample_rate, levels));
    }
    std::sort(bank.hf_scales.begin(), bank.hf_scales.end());
    std::sort(bank.lf_scales.begin(), bank.lf_scales.end());
    return bank;
}

void validate_scale_bank(const ScaleBank& bank, int sample_rate,
                         int levels) {
    if (bank.hf_scales.empty() || bank.lf_scales.empty())
        throw Error("scale bank must contain HF and LF scales");
    if (bank.hf_scales.size() <= bank.lf_scales.size())
        throw Error("scale bank needs more HF scales than LF scales");
    for (const auto* list : {&bank.hf_scales, &bank.lf_scales}) {
        for (std::size_t i = 0; i < list->size(); ++i) {
            if (!((*list)[i] > 0.0))
                throw Error("scale bank entries must be positive");
            if (i > 0 && (*list)[i] <= (*list)[i - 1])
                throw Error("scale bank entries must be strictly ascending");
        }
    }
    if (bank.hf_scales.back() >= bank.lf_scales.front())
        throw Error("every HF scale must be below every LF scale");

    // Small slack absorbs the round trip through the frequency map.
    const double tol = 1e-3;
    const double f_hi = scale_to_frequency(bank.hf_scales.front(),
                                           sample_rate, levels);
    const double f_lo = scale_to_frequency(bank.lf_scales.back(),
                                           sample_rate, levels);
    if (f_hi > kBandHiHz * (1.0 + tol) || f_lo < kBandLoHz * (1.0 - tol))
        throw Error("scale bank pseudo-frequencies fall outside the "
                    "300-3200 Hz analysis band");
}

} // namespace wcsed
