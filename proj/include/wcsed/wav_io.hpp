#pragma once

#include <string>

#include "wcsed/signal.hpp"

namespace wcsed {

// Reads a RIFF/WAVE file. Supported encodings: 16-bit integer PCM and
// 32-bit IEEE float, any channel count (channels are averaged to mono).
// Throws Error with a distinct message for a missing file, a malformed
// header or data chunk, and an unsupported codec.
SignalBuffer load_wav(const std::string& path);

// Writes a mono 16-bit PCM WAVE file. Amplitudes are clamped to [-1, 1]
// and rounded to the nearest quantization step.
void save_wav(const std::string& path, const SignalBuffer& signal);

} // namespace wcsed
