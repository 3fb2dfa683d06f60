#include "wcsed/signal.hpp"

#include <cmath>
#include <utility>

namespace wcsed {

SignalBuffer::SignalBuffer(std::vector<double> s, int rate)
    : samples(std::move(s)), sample_rate(rate) {
    if (samples.empty())
        throw Error("signal must contain at least one sample");
    if (sample_rate <= 0)
        throw Error("sample rate must be positive");
    for (double a : samples)
        if (!(a >= -1.0 && a <= 1.0))
            throw Error("sample amplitude outside [-1, 1]");
}

SignalBuffer to_mono(const std::vector<std::vector<double>>& channels,
                     int sample_rate) {
    if (channels.empty())
        throw Error("to_mono requires at least one channel");
    const std::size_t n = channels.front().size();
    for (const auto& ch : channels)
        if (ch.size() != n)
            throw Error("to_mono requires equal-length channels");

    std::vector<double> mono(n, 0.0);
    for (const auto& ch : channels)
        for (std::size_t i = 0; i < n; ++i)
            mono[i] += ch[i];
    const double inv = 1.0 / static_cast<double>(channels.size());
    for (double& v : mono)
        v *= inv;
    return SignalBuffer(std::move(mono), sample_rate);
}

double rms_loudness(const SignalBuffer& signal) {
    double acc = 0.0;
    for (double a : signal.samples)
        acc += a * a;
    return std::sqrt(acc / static_cast<double>(signal.samples.size()));
}

} // namespace wcsed
