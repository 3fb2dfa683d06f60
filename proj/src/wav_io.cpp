#include "wcsed/wav_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace wcsed {

namespace {

constexpr std::uint16_t kFormatPcm = 0x0001;
constexpr std::uint16_t kFormatIeeeFloat = 0x0003;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t read_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) |
           (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_u16(std::ostream& out, std::uint16_t v) {
    const unsigned char b[2] = {static_cast<unsigned char>(v & 0xFF),
                                static_cast<unsigned char>(v >> 8)};
    out.write(reinterpret_cast<const char*>(b), 2);
}

void write_u32(std::ostream& out, std::uint32_t v) {
    const unsigned char b[4] = {static_cast<unsigned char>(v & 0xFF),
                                static_cast<unsigned char>((v >> 8) & 0xFF),
                                static_cast<unsigned char>((v >> 16) & 0xFF),
                                static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

} // namespace

SignalBuffer load_wav(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open file: " + path);

    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw Error("malformed RIFF header: " + path);

    bool have_fmt = false;
    std::uint16_t format = 0, channels = 0, bits = 0;
    std::uint32_t rate = 0;
    std::size_t data_off = 0, data_len = 0;
    bool have_data = false;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const char* id = reinterpret_cast<const char*>(bytes.data() + pos);
        const std::uint32_t size = read_u32(bytes.data() + pos + 4);
        pos += 8;
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (size < 16 || pos + 16 > bytes.size())
                throw Error("malformed fmt chunk: " + path);
            format = read_u16(bytes.data() + pos);
            channels = read_u16(bytes.data() + pos + 2);
            rate = read_u32(bytes.data() + pos + 4);
            bits = read_u16(bytes.data() + pos + 14);
            if (format == kFormatExtensible && size >= 40 &&
                pos + 26 <= bytes.size())
                format = read_u16(bytes.data() + pos + 24);
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            if (size == 0 || pos + size > bytes.size())
                throw Error("malformed data chunk: " + path);
            data_off = pos;
            data_len = size;
            have_data = true;
        }
        pos += size + (size & 1);
    }

    if (!have_fmt)
        throw Error("malformed RIFF header: missing fmt chunk: " + path);
    if (!have_data)
        throw Error("malformed data chunk: missing or empty: " + path);
    if (channels == 0 || rate == 0)
        throw Error("malformed fmt chunk: " + path);

    const bool pcm16 = format == kFormatPcm && bits == 16;
    const bool float32 = format == kFormatIeeeFloat && bits == 32;
    if (!pcm16 && !float32)
        throw Error("unsupported codec (format " + std::to_string(format) +
                    ", " + std::to_string(bits) + " bit): " + path);

    const std::size_t bytes_per_sample = bits / 8;
    const std::size_t frame_size = bytes_per_sample * channels;
    const std::size_t frames = data_len / frame_size;
    if (frames == 0)
        throw Error("malformed data chunk: no complete frames: " + path);

    std::vector<std::vector<double>> chans(
        channels, std::vector<double>(frames, 0.0));
    const unsigned char* d = bytes.data() + data_off;
    for (std::size_t f = 0; f < frames; ++f) {
        for (std::uint16_t c = 0; c < channels; ++c) {
            const unsigned char* s = d + f * frame_size + c * bytes_per_sample;
            double v;
            if (pcm16) {
                const auto raw = static_cast<std::int16_t>(read_u16(s));
                v = raw / 32768.0;
            } else {
                float fv;
                std::uint32_t u = read_u32(s);
                std::memcpy(&fv, &u, 4);
                v = std::clamp(static_cast<double>(fv), -1.0, 1.0);
            }
            chans[c][f] = v;
        }
    }
    return to_mono(chans, static_cast<int>(rate));
}

void save_wav(const std::string& path, const SignalBuffer& signal) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open file for writing: " + path);

    const std::uint32_t n = static_cast<std::uint32_t>(signal.size());
    const std::uint32_t data_size = n * 2;
    const std::uint32_t rate = static_cast<std::uint32_t>(signal.sample_rate);

    out.write("RIFF", 4);
    write_u32(out, 36 + data_size);
    out.write("WAVE", 4);
    out.write("fmt ", 4);
    write_u32(out, 16);
    write_u16(out, kFormatPcm);
    write_u16(out, 1);
    write_u32(out, rate);
    write_u32(out, rate * 2);
    write_u16(out, 2);
    write_u16(out, 16);
    out.write("data", 4);
    write_u32(out, data_size);
    for (double a : signal.samples) {
        const long q = std::lround(std::clamp(a, -1.0, 1.0) * 32768.0);
        const auto s = static_cast<std::int16_t>(
            std::clamp<long>(q, -32768, 32767));
        write_u16(out, static_cast<std::uint16_t>(s));
    }
    if (!out)
        throw Error("write failed: " + path);
}

} // namespace wcsed
