#include "wcsed/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "rng.hpp"

namespace wcsed {

namespace {

constexpr const char* kLabelHeader = "path,start_frame,end_frame,group";

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ','))
        fields.push_back(field);
    return fields;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r')
        s.pop_back();
    return s;
}

// Unit-peak band-limited noise: a sum of sinusoids at random frequencies
// inside [lo, hi] with random phases.
std::vector<double> band_noise(detail::Rng& rng, std::size_t n,
                               double lo_hz, double hi_hz, int partials,
                               int sample_rate) {
    std::vector<double> freqs(partials), phases(partials);
    for (int k = 0; k < partials; ++k) {
        freqs[k] = rng.uniform(lo_hz, hi_hz);
        phases[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    std::vector<double> out(n, 0.0);
    for (int k = 0; k < partials; ++k) {
        const double w = 2.0 * std::numbers::pi * freqs[k] / sample_rate;
        for (std::size_t i = 0; i < n; ++i)
            out[i] += std::sin(w * static_cast<double>(i) + phases[k]);
    }
    double peak = 0.0;
    for (double v : out)
        peak = std::max(peak, std::abs(v));
    if (peak > 0.0)
        for (double& v : out)
            v /= peak;
    return out;
}

std::vector<double> raised_cosine_envelope(std::size_t n,
                                           std::size_t edge) {
    std::vector<double> env(n, 1.0);
    const std::size_t e = std::min(edge, n / 2);
    for (std::size_t i = 0; i < e; ++i) {
        const double r =
            0.5 - 0.5 * std::cos(std::numbers::pi * static_cast<double>(i) /
                                 static_cast<double>(e));
        env[i] = r;
        env[n - 1 - i] = r;
    }
    return env;
}

std::size_t to_samples(double seconds, int rate) {
    return static_cast<std::size_t>(std::llround(seconds * rate));
}

} // namespace

std::vector<LabelRow> read_labels_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open label file: " + path);
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != kLabelHeader)
        throw Error("label CSV header mismatch in " + path +
                    " (expected '" + kLabelHeader + "')");
    std::vector<LabelRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty())
            continue;
        const auto fields = split_csv_row(line);
        if (fields.size() != 4)
            throw Error("label CSV row " + std::to_string(line_no) +
                        " malformed in " + path);
        LabelRow row;
        row.path = fields[0];
        try {
            row.label.start_frame = std::stoull(fields[1]);
            row.label.end_frame = std::stoull(fields[2]);
        } catch (const std::exception&) {
            throw Error("label CSV row " + std::to_string(line_no) +
                        " has non-numeric frames in " + path);
        }
        row.label.group = fields[3];
        if (row.label.start_frame > row.label.end_frame)
            throw Error("label CSV row " + std::to_string(line_no) +
                        " has start after end in " + path);
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw Error("label CSV contains no rows: " + path);
    return rows;
}

void write_labels_csv(const std::string& path,
                      const std::vector<LabelRow>& rows) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot open label file for writing: " + path);
    out << kLabelHeader << "\n";
    for (const auto& row : rows)
        out << row.path << "," << row.label.start_frame << ","
            << row.label.end_frame << "," << row.label.group << "\n";
    if (!out)
        throw Error("write failed: " + path);
}

std::pair<double, double> frame_deviation(const GroundTruthLabel& truth,
                                          const EndpointResult& detected) {
    if (truth.start_frame > truth.end_frame)
        throw Error("ground truth start after end");
    const double length =
        static_cast<double>(truth.end_frame - truth.start_frame + 1);
    const auto diff = [](std::size_t a, std::size_t b) {
        return static_cast<double>(a > b ? a - b : b - a);
    };
    return {100.0 * diff(detected.start_frame, truth.start_frame) / length,
            100.0 * diff(detected.end_frame, truth.end_frame) / length};
}

DeviationReport aggregate_report(std::vector<DeviationReport::Item> items) {
    if (items.empty())
        throw Error("cannot aggregate an empty evaluation set");
    DeviationReport report;
    report.items = std::move(items);
    double start_sum = 0.0, end_sum = 0.0;
    for (const auto& item : report.items) {
        start_sum += item.start_pct;
        end_sum += item.end_pct;
        auto& g = report.groups[item.group];
        g.start_pct += item.start_pct;
        g.end_pct += item.end_pct;
        g.count += 1;
    }
    for (auto& [name, g] : report.groups) {
        g.start_pct /= static_cast<double>(g.count);
        g.end_pct /= static_cast<double>(g.count);
    }
    const auto n = static_cast<double>(report.items.size());
    report.overall_start_pct = start_sum / n;
    report.overall_end_pct = end_sum / n;
    return report;
}

std::pair<SignalBuffer, GroundTruthLabel>
synthesize_test_signal(const CorpusItemSpec& spec) {
    if (spec.sample_rate <= 0)
        throw Error("corpus item needs a positive sample rate");
    if (!(spec.total_s > 0.0))
        throw Error("corpus item needs a positive duration");
    if (spec.speech_start_s < 0.0 || !(spec.speech_dur_s > 0.0) ||
        spec.speech_start_s + spec.speech_dur_s > spec.total_s)
        throw Error("speech span outside the recording: " + spec.name);
    if (!(spec.speech_amp > 0.0) || spec.speech_amp > 1.0)
        throw Error("speech amplitude must lie in (0, 1]: " + spec.name);
    if (!(spec.f0_hz > 0.0) || spec.harmonics < 1)
        throw Error("invalid harmonic stack: " + spec.name);
    if (spec.f0_hz * spec.harmonics >= spec.sample_rate / 2.0)
        throw Error("harmonic stack reaches Nyquist: " + spec.name);

    const double speech_end_s = spec.speech_start_s + spec.speech_dur_s;
    for (const auto& b : spec.bursts) {
        if (!(b.dur_s > 0.0) || b.start_s < 0.0 ||
            b.start_s + b.dur_s > spec.total_s)
            throw Error("burst outside the recording: " + spec.name);
        if (b.start_s < speech_end_s &&
            b.start_s + b.dur_s > spec.speech_start_s)
            throw Error("burst overlaps the speech span: " + spec.name);
        if (b.band_hi_hz <= b.band_lo_hz || b.band_lo_hz <= 0.0)
            throw Error("invalid burst band: " + spec.name);
        if (b.band_hi_hz >= spec.sample_rate / 2.0)
            throw Error("burst band reaches Nyquist: " + spec.name);
        if (!(b.amplitude > 0.0) || b.amplitude > 1.0)
            throw Error("burst amplitude must lie in (0, 1]: " + spec.name);
        if (b.partials < 1)
            throw Error("burst needs at least one partial: " + spec.name);
    }

    const int rate = spec.sample_rate;
    const std::size_t n = to_samples(spec.total_s, rate);
    const std::size_t s0 = to_samples(spec.speech_start_s, rate);
    const std::size_t ns = to_samples(spec.speech_dur_s, rate);
    if (s0 + ns > n)
        throw Error("speech span outside the recording: " + spec.name);

    detail::Rng rng(spec.seed);
    std::vector<double> x(n, 0.0);

    // Harmonic stack with 1/h rolloff, unit peak.
    std::vector<double> speech(ns, 0.0);
    for (int h = 1; h <= spec.harmonics; ++h) {
        const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double w = 2.0 * std::numbers::pi * spec.f0_hz * h / rate;
        const double gain = 1.0 / h;
        for (std::size_t i = 0; i < ns; ++i)
            speech[i] += gain * std::sin(w * static_cast<double>(i) + phase);
    }
    double peak = 0.0;
    for (double v : speech)
        peak = std::max(peak, std::abs(v));
    for (double& v : speech)
        v /= peak;

    // Fricative-like unvoiced tail over the last stretch of the span.
    const std::size_t tail =
        to_samples(std::min(0.15, spec.speech_dur_s * 0.2), rate);
    if (tail >= 2) {
        const std::vector<double> fric =
            band_noise(rng, tail, 2000.0, 4000.0, 100, rate);
        const std::vector<double> env =
            raised_cosine_envelope(tail, to_samples(0.01, rate));
        for (std::size_t i = 0; i < tail; ++i)
            speech[ns - tail + i] += 0.35 * fric[i] * env[i];
    }

    const std::vector<double> speech_env =
        raised_cosine_envelope(ns, to_samples(0.04, rate));
    for (std::size_t i = 0; i < ns; ++i)
        x[s0 + i] = spec.speech_amp * speech[i] * speech_env[i];

    for (const auto& b : spec.bursts) {
        const std::size_t b0 = to_samples(b.start_s, rate);
        const std::size_t bn = to_samples(b.dur_s, rate);
        if (bn < 2 || b0 + bn > n)
            throw Error("burst outside the recording: " + spec.name);
        const std::vector<double> noise =
            band_noise(rng, bn, b.band_lo_hz, b.band_hi_hz, b.partials,
                       rate);
        const std::vector<double> env = raised_cosine_envelope(
            bn, std::max<std::size_t>(8, bn / 10));
        for (std::size_t i = 0; i < bn; ++i)
            x[b0 + i] += b.amplitude * noise[i] * env[i];
    }

    // Land on the 16-bit grid the corpus ships on, then clamp.
    for (double& v : x)
        v = std::clamp(std::round(v * 32768.0) / 32768.0, -1.0, 1.0);

    // Labels follow the default 10 ms shift convention.
    GroundTruthLabel label;
    label.start_frame =
        static_cast<std::size_t>(std::llround(spec.speech_start_s * 100.0));
    const auto end_excl =
        static_cast<std::size_t>(std::llround(speech_end_s * 100.0));
    if (end_excl <= label.start_frame)
        throw Error("speech span too short to label: " + spec.name);
    label.end_frame = end_excl - 1;
    label.group = spec.bursts.empty() ? "no_nsa" : "nsa";
    return {SignalBuffer(std::move(x), rate), label};
}

std::vector<CorpusItemSpec> make_random_corpus(int n,
                                               std::uint64_t master_seed,
                                               int sample_rate) {
    if (n < 1)
        throw Error("corpus needs at least one item");
    std::vector<CorpusItemSpec> items;
    items.reserve(static_cast<std::size_t>(n));
    detail::Rng master(master_seed);

    for (int idx = 0; idx < n; ++idx) {
        CorpusItemSpec spec;
        char name[32];
        std::snprintf(name, sizeof name, "item_%03d", idx);
        spec.name = name;
        spec.seed = master.raw();
        spec.sample_rate = sample_rate;

        detail::Rng rng(spec.seed);
        spec.speech_start_s = rng.uniform(0.3, 2.5);
        spec.speech_dur_s = rng.uniform(0.5, 2.0);
        const double tail_s = rng.uniform(0.4, 0.9);
        spec.total_s = spec.speech_start_s + spec.speech_dur_s + tail_s;
        spec.f0_hz = rng.uniform(120.0, 300.0);
        spec.harmonics = rng.uniform_int(4, 8);
        spec.speech_amp = rng.uniform(0.3, 0.8);

        const double speech_end_s = spec.speech_start_s + spec.speech_dur_s;
        const int burst_count = rng.uniform_int(1, 4);
        for (int b = 0; b < burst_count; ++b) {
            const bool breath = rng.unit() < 0.5;
            BurstSpec burst;
            burst.dur_s =
                breath ? rng.uniform(0.1, 0.4) : rng.uniform(0.005, 0.03);
            burst.band_lo_hz = breath ? 1000.0 : 2000.0;
            burst.band_hi_hz = breath ? 4000.0 : 6000.0;
            burst.amplitude =
                breath ? rng.uniform(0.03, 0.09) : rng.uniform(0.15, 0.40);
            burst.partials = breath ? 100 : 30;

            // Rejection placement: clear of speech by 120 ms and of other
            // bursts by 80 ms; unplaceable bursts are dropped.
            for (int attempt = 0; attempt < 20; ++attempt) {
                double pos;
                if (rng.unit() < 0.5) {
                    const double hi = spec.speech_start_s - 0.12 -
                                      burst.dur_s;
                    if (hi <= 0.02)
                        continue;
                    pos = rng.uniform(0.02, hi);
                } else {
                    const double lo = speech_end_s + 0.12;
                    if (lo + burst.dur_s >= spec.total_s - 0.02)
                        continue;
                    pos = rng.uniform(lo, spec.total_s - 0.02 - burst.dur_s);
                }
                bool clear = true;
                for (const auto& other : spec.bursts)
                    if (!(pos + burst.dur_s + 0.08 < other.start_s ||
                          pos > other.start_s + other.dur_s + 0.08)) {
                        clear = false;
                        break;
                    }
                if (clear) {
                    burst.start_s = pos;
                    spec.bursts.push_back(burst);
                    break;
                }
            }
        }

        // The tail always has room for a click; keep every item at >= 1
        // burst even when rejection sampling exhausted its attempts.
        if (spec.bursts.empty()) {
            BurstSpec burst;
            burst.dur_s = 0.02;
            burst.band_lo_hz = 2000.0;
            burst.band_hi_hz = 6000.0;
            burst.amplitude = rng.uniform(0.15, 0.40);
            burst.partials = 30;
            burst.start_s = rng.uniform(
                speech_end_s + 0.12,
                spec.total_s - 0.02 - burst.dur_s);
            spec.bursts.push_back(burst);
        }
        items.push_back(std::move(spec));
    }
    return items;
}

std::string corpus_to_json(const std::vector<CorpusItemSpec>& items) {
    nlohmann::json root;
    root["items"] = nlohmann::json::array();
    for (const auto& item : items) {
        nlohmann::json j;
        j["name"] = item.name;
        j["seed"] = item.seed;
        j["sample_rate"] = item.sample_rate;
        j["total_s"] = item.total_s;
        j["speech_start_s"] = item.speech_start_s;
        j["speech_dur_s"] = item.speech_dur_s;
        j["speech_amp"] = item.speech_amp;
        j["f0_hz"] = item.f0_hz;
        j["harmonics"] = item.harmonics;
        j["bursts"] = nlohmann::json::array();
        for (const auto& b : item.bursts) {
            nlohmann::json jb;
            jb["start_s"] = b.start_s;
            jb["dur_s"] = b.dur_s;
            jb["band_lo_hz"] = b.band_lo_hz;
            jb["band_hi_hz"] = b.band_hi_hz;
            jb["amplitude"] = b.amplitude;
            jb["partials"] = b.partials;
            j["bursts"].push_back(std::move(jb));
        }
        root["items"].push_back(std::move(j));
    }
    return root.dump(2) + "\n";
}

std::vector<CorpusItemSpec> corpus_from_json(const std::string& text) {
    nlohmann::json root;
    try {
        root = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("corpus spec is not valid JSON: ") +
                    e.what());
    }
    if (!root.contains("items") || !root["items"].is_array())
        throw Error("corpus spec must contain an 'items' array");
    std::vector<CorpusItemSpec> items;
    try {
        for (const auto& j : root["items"]) {
            CorpusItemSpec item;
            item.name = j.at("name").get<std::string>();
            item.seed = j.at("seed").get<std::uint64_t>();
            item.sample_rate = j.at("sample_rate").get<int>();
            item.total_s = j.at("total_s").get<double>();
            item.speech_start_s = j.at("speech_start_s").get<double>();
            item.speech_dur_s = j.at("speech_dur_s").get<double>();
            item.speech_amp = j.at("speech_amp").get<double>();
            item.f0_hz = j.at("f0_hz").get<double>();
            item.harmonics = j.at("harmonics").get<int>();
            if (j.contains("bursts"))
                for (const auto& jb : j["bursts"]) {
                    BurstSpec b;
                    b.start_s = jb.at("start_s").get<double>();
                    b.dur_s = jb.at("dur_s").get<double>();
                    b.band_lo_hz = jb.at("band_lo_hz").get<double>();
                    b.band_hi_hz = jb.at("band_hi_hz").get<double>();
                    b.amplitude = jb.at("amplitude").get<double>();
                    b.partials = jb.value("partials", 100);
                    item.bursts.push_back(b);
                }
            items.push_back(std::move(item));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("corpus spec item malformed: ") + e.what());
    }
    return items;
}

} // namespace wcsed
