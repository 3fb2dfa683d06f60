#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "wcsed/wavelet.hpp"

using namespace wcsed;

TEST_CASE("db8 scaling filter satisfies the filter identities") {
    const auto& h = db8_scaling_filter();
    REQUIRE(h.size() == 16);

    const double sum = std::accumulate(h.begin(), h.end(), 0.0);
    CHECK(sum == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));

    // Orthonormality of even shifts: sum h[k] h[k+2m] = delta(m).
    for (int m = 0; m < 8; ++m) {
        double acc = 0.0;
        for (int k = 0; k + 2 * m < 16; ++k)
            acc += h[k] * h[k + 2 * m];
        CHECK(acc == doctest::Approx(m == 0 ? 1.0 : 0.0).epsilon(1e-12));
    }
}

TEST_CASE("cascade sampling spans the 15-unit support") {
    const MotherWavelet m = sample_mother_wavelet(10);
    CHECK(m.levels == 10);
    CHECK(m.grid_step() == doctest::Approx(1.0 / 1024.0));
    CHECK(m.support() == doctest::Approx(15.0).epsilon(2e-3));

    double l2 = 0.0, mean = 0.0, peak = 0.0;
    for (double v : m.taps) {
        l2 += v * v;
        mean += v;
        peak = std::max(peak, std::abs(v));
    }
    CHECK(std::sqrt(l2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(mean / static_cast<double>(m.taps.size())) <=
          1e-6 * peak);

    CHECK_THROWS_AS(sample_mother_wavelet(3), Error);
}

TEST_CASE("center frequency reproduces the reference scale-frequency map") {
    const double fc = wavelet_center_frequency();
    CHECK(fc == doctest::Approx(2.0 / 3.0).epsilon(0.01));

    const struct {
        double scale;
        double hz;
    } reference[] = {{10, 3200}, {23, 1391}, {50, 640}, {100, 320}};
    for (const auto& [scale, hz] : reference)
        CHECK(scale_to_frequency(scale, 48000) ==
              doctest::Approx(hz).epsilon(0.05));
}

TEST_CASE("scale_to_frequency is decreasing in scale, linear in rate") {
    double prev = scale_to_frequency(5.0, 48000);
    for (double s : {10.0, 20.0, 40.0, 80.0}) {
        const double f = scale_to_frequency(s, 48000);
        CHECK(f < prev);
        prev = f;
    }
    CHECK(scale_to_frequency(25.0, 96000) ==
          doctest::Approx(2.0 * scale_to_frequency(25.0, 48000)));
    CHECK(frequency_to_scale(scale_to_frequency(17.0, 48000), 48000) ==
          doctest::Approx(17.0).epsilon(1e-12));
    CHECK_THROWS_AS(scale_to_frequency(0.0, 48000), Error);
}

TEST_CASE("kernel_at_scale enforces admissibility and normalization") {
    const MotherWavelet mother = sample_mother_wavelet();

    for (double scale : {2.0, 10.0, 31.9, 107.0}) {
        const WaveletKernel k = kernel_at_scale(mother, scale, 48000);
        CHECK(k.scale == scale);
        double mean = 0.0, l2 = 0.0, peak = 0.0;
        for (double v : k.taps) {
            mean += v;
            l2 += v * v;
            peak = std::max(peak, std::abs(v));
        }
        CHECK(std::abs(mean / static_cast<double>(k.taps.size())) <=
              1e-6 * peak);
        CHECK(std::sqrt(l2) == doctest::Approx(1.0).epsilon(1e-9));
    }

    const std::size_t at_20 = kernel_at_scale(mother, 20, 48000).taps.size();
    const std::size_t at_40 = kernel_at_scale(mother, 40, 48000).taps.size();
    CHECK(std::llabs(static_cast<long long>(at_40) -
                     2LL * static_cast<long long>(at_20)) <= 1);

    CHECK_THROWS_AS(kernel_at_scale(mother, 0.05, 48000), Error);
    CHECK_THROWS_AS(kernel_at_scale(mother, -1.0, 48000), Error);
}

TEST_CASE("kernel at scale 100 concentrates energy near 320 Hz") {
    const MotherWavelet mother = sample_mother_wavelet();
    const WaveletKernel k = kernel_at_scale(mother, 100, 48000);
    CHECK(k.pseudo_frequency_hz == doctest::Approx(320.0).epsilon(0.05));

    // Dominant frequency measured directly on the resampled taps by
    // correlation against complex exponentials, 1 Hz steps.
    auto spectral_peak = [](const std::vector<double>& taps, double lo_hz,
                            double hi_hz) {
        double best_f = lo_hz, best_mag = -1.0;
        for (double f = lo_hz; f <= hi_hz; f += 1.0) {
            const double w = 2.0 * std::numbers::pi * f / 48000.0;
            double re = 0.0, im = 0.0;
            for (std::size_t n = 0; n < taps.size(); ++n) {
                re += taps[n] * std::cos(w * static_cast<double>(n));
                im -= taps[n] * std::sin(w * static_cast<double>(n));
            }
            const double mag = re * re + im * im;
            if (mag > best_mag) {
                best_mag = mag;
                best_f = f;
            }
        }
        return best_f;
    };

    const double peak_100 = spectral_peak(k.taps, 100.0, 700.0);
    CHECK(peak_100 == doctest::Approx(320.0).epsilon(0.10));

    // Halving the scale doubles the dominant frequency.
    const WaveletKernel half = kernel_at_scale(mother, 50, 48000);
    CHECK(spectral_peak(half.taps, 200.0, 1400.0) ==
          doctest::Approx(2.0 * peak_100).epsilon(0.03));
}

TEST_CASE("default bank has 12 HF below 6 LF scales in range") {
    const ScaleBank bank = default_scale_bank(48000);
    REQUIRE(bank.hf_scales.size() == 12);
    REQUIRE(bank.lf_scales.size() == 6);

    CHECK(bank.hf_scales.front() >= 10.0 * 0.99);
    CHECK(bank.hf_scales.back() <= 32.0 * 1.01);
    CHECK(bank.lf_scales.front() >= 32.0 * 0.99);
    CHECK(bank.lf_scales.back() <= 107.0 * 1.01);

    CHECK(std::is_sorted(bank.hf_scales.begin(), bank.hf_scales.end()));
    CHECK(std::is_sorted(bank.lf_scales.begin(), bank.lf_scales.end()));
    CHECK(bank.hf_scales.back() < bank.lf_scales.front());

    // Pseudo-frequency coverage: [1000, 3200] and [300, 1000).
    CHECK(scale_to_frequency(bank.hf_scales.front(), 48000) ==
          doctest::Approx(3200.0).epsilon(1e-6));
    CHECK(scale_to_frequency(bank.hf_scales.back(), 48000) ==
          doctest::Approx(1000.0).epsilon(1e-6));
    CHECK(scale_to_frequency(bank.lf_scales.back(), 48000) ==
          doctest::Approx(300.0).epsilon(1e-6));
    CHECK(scale_to_frequency(bank.lf_scales.front(), 48000) < 1000.0);

    CHECK_THROWS_AS(default_scale_bank(6000), Error);
    CHECK_NOTHROW(validate_scale_bank(bank, 48000));
}

TEST_CASE("default bank counts hold across sample rates") {
    for (int rate : {8000, 16000, 44100, 96000}) {
        const ScaleBank bank = default_scale_bank(rate);
        CHECK(bank.hf_scales.size() == 12);
        CHECK(bank.lf_scales.size() == 6);
        CHECK(bank.hf_scales.size() > bank.lf_scales.size());
        CHECK_NOTHROW(validate_scale_bank(bank, rate));
    }
}

TEST_CASE("validate_scale_bank rejects malformed banks") {
    ScaleBank ok = default_scale_bank(48000);

    ScaleBank swapped = ok;
    std::swap(swapped.hf_scales, swapped.lf_scales);
    CHECK_THROWS_AS(validate_scale_bank(swapped, 48000), Error);

    ScaleBank unsorted = ok;
    std::swap(unsorted.hf_scales[0], unsorted.hf_scales[1]);
    CHECK_THROWS_AS(validate_scale_bank(unsorted, 48000), Error);

    ScaleBank out_of_band = ok;
    out_of_band.lf_scales.back() *= 4.0; // below 300 Hz
    CHECK_THROWS_AS(validate_scale_bank(out_of_band, 48000), Error);

    ScaleBank too_few = ok;
    too_few.hf_scales.resize(6);
    CHECK_THROWS_AS(validate_scale_bank(too_few, 48000), Error);
}
