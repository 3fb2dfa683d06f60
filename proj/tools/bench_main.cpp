#include <chrono>
#include <cstdio>
#include <vector>

#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "wcsed/detector.hpp"
#include "wcsed/eval.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double time_best_of(int reps, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        fn();
        const auto t1 = Clock::now();
        best = std::min(best,
                        std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

wcsed::SignalBuffer make_signal(double seconds, int rate) {
    wcsed::CorpusItemSpec spec;
    spec.name = "bench";
    spec.seed = 7;
    spec.sample_rate = rate;
    spec.total_s = seconds;
    spec.speech_start_s = 0.25 * seconds;
    spec.speech_dur_s = 0.5 * seconds;
    spec.speech_amp = 0.5;
    spec.f0_hz = 180.0;
    spec.harmonics = 6;
    return wcsed::synthesize_test_signal(spec).first;
}

} // namespace

int main(int argc, char** argv) {
    double seconds = 3.0;
    int rate = 48000;
    int reps = 5;

    CLI::App app{"WCSED micro-benchmarks: serial vs OpenMP, direct vs FFT"};
    app.add_option("--seconds", seconds, "test signal duration")
        ->capture_default_str();
    app.add_option("--sample-rate", rate, "sample rate")
        ->capture_default_str();
    app.add_option("--reps", reps, "repetitions per measurement (best-of)")
        ->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    const wcsed::SignalBuffer signal = make_signal(seconds, rate);
    const wcsed::MotherWavelet mother = wcsed::sample_mother_wavelet();
    const wcsed::ScaleBank bank = wcsed::default_scale_bank(rate);

#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (OpenMP disabled)\n");
#endif
    std::printf("signal: %.1f s at %d Hz (%zu samples)\n\n", seconds, rate,
                signal.size());

    std::vector<double> all_scales = bank.hf_scales;
    all_scales.insert(all_scales.end(), bank.lf_scales.begin(),
                      bank.lf_scales.end());

    const double conv_serial = time_best_of(reps, [&] {
        wcsed::wave_conv(signal, all_scales, mother,
                         wcsed::Execution::serial);
    });
    const double conv_parallel = time_best_of(reps, [&] {
        wcsed::wave_conv(signal, all_scales, mother,
                         wcsed::Execution::parallel);
    });
    std::printf("wave_conv (18 scales)    serial %8.3f ms   parallel "
                "%8.3f ms   speedup %.2fx\n",
                conv_serial * 1e3, conv_parallel * 1e3,
                conv_serial / conv_parallel);

    const wcsed::CoefficientMatrix matrix = wcsed::wave_conv(
        signal, bank.lf_scales, mother, wcsed::Execution::parallel);
    const std::vector<double> combined =
        wcsed::combine_coefficients(matrix, wcsed::rms_loudness(signal));
    wcsed::FrameSpec spec;
    spec.sample_rate = rate;

    const double ent_serial = time_best_of(reps, [&] {
        wcsed::entropy_vector(combined, spec, 100,
                              wcsed::Execution::serial);
    });
    const double ent_parallel = time_best_of(reps, [&] {
        wcsed::entropy_vector(combined, spec, 100,
                              wcsed::Execution::parallel);
    });
    std::printf("entropy_vector           serial %8.3f ms   parallel "
                "%8.3f ms   speedup %.2fx\n",
                ent_serial * 1e3, ent_parallel * 1e3,
                ent_serial / ent_parallel);

    // The largest default kernel against the whole signal, both routes.
    const wcsed::WaveletKernel kernel =
        wcsed::kernel_at_scale(mother, bank.lf_scales.back(), rate);
    const double direct = time_best_of(reps, [&] {
        wcsed::convolve_direct(signal.samples, kernel.taps);
    });
    const double fft = time_best_of(reps, [&] {
        wcsed::convolve_fft(signal.samples, kernel.taps);
    });
    std::printf("convolve (m=%zu)       direct %8.3f ms   fft      "
                "%8.3f ms   speedup %.2fx\n",
                kernel.taps.size(), direct * 1e3, fft * 1e3, direct / fft);

    wcsed::DetectorConfig config;
    const double detect_serial = time_best_of(reps, [&] {
        wcsed::DetectorConfig c = config;
        c.execution = wcsed::Execution::serial;
        wcsed::detect_endpoints(signal, c);
    });
    const double detect_parallel = time_best_of(reps, [&] {
        wcsed::detect_endpoints(signal, config);
    });
    std::printf("detect_endpoints         serial %8.3f ms   parallel "
                "%8.3f ms   speedup %.2fx\n",
                detect_serial * 1e3, detect_parallel * 1e3,
                detect_serial / detect_parallel);
    return 0;
}
