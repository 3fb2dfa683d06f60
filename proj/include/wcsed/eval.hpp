#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "wcsed/detector.hpp"
#include "wcsed/signal.hpp"

namespace wcsed {

// Hand-checked utterance span in frame indices, with the speaker group
// the recording belongs to.
struct GroundTruthLabel {
    std::size_t start_frame = 0;
    std::size_t end_frame = 0;
    std::string group;
};

// One labels.csv row: path,start_frame,end_frame,group (header included).
struct LabelRow {
    std::string path;
    GroundTruthLabel label;
};

std::vector<LabelRow> read_labels_csv(const std::string& path);
void write_labels_csv(const std::string& path,
                      const std::vector<LabelRow>& rows);

// Absolute frame deviation of each endpoint as a percentage of the true
// utterance length (end - start + 1 frames); {start_pct, end_pct}.
std::pair<double, double> frame_deviation(const GroundTruthLabel& truth,
                                          const EndpointResult& detected);

struct DeviationReport {
    struct Item {
        std::string path;
        std::string group;
        std::size_t truth_start = 0, truth_end = 0;
        std::size_t detected_start = 0, detected_end = 0;
        double start_pct = 0.0, end_pct = 0.0;
    };
    struct GroupStats {
        double start_pct = 0.0, end_pct = 0.0;
        std::size_t count = 0;
    };

    std::vector<Item> items;
    std::map<std::string, GroupStats> groups;
    double overall_start_pct = 0.0; // mean over every item, not over groups
    double overall_end_pct = 0.0;
};

DeviationReport aggregate_report(std::vector<DeviationReport::Item> items);

// One NSA burst in a synthetic recording: band-limited noise with a short
// raised-cosine envelope, placed clear of the speech span.
struct BurstSpec {
    double start_s = 0.0;
    double dur_s = 0.0;
    double band_lo_hz = 0.0;
    double band_hi_hz = 0.0;
    double amplitude = 0.0;
    int partials = 100; // sinusoids summed to fill the band
};

// Declarative recipe for one synthetic test recording: silence, one
// harmonic speech span with a fricative tail, and zero or more bursts.
struct CorpusItemSpec {
    std::string name;
    std::uint64_t seed = 0;
    int sample_rate = 48000;
    double total_s = 0.0;
    double speech_start_s = 0.0;
    double speech_dur_s = 0.0;
    double speech_amp = 0.5;
    double f0_hz = 180.0;
    int harmonics = 6;
    std::vector<BurstSpec> bursts;
};

// Renders the recipe into a quantized 16-bit-grid signal and the ground
// truth span in frame indices (10 ms shift convention). Throws Error on
// bursts overlapping speech or bands reaching Nyquist.
std::pair<SignalBuffer, GroundTruthLabel>
synthesize_test_signal(const CorpusItemSpec& spec);

// Draws n item recipes with speech and burst parameters inside the
// calibrated ranges. Deterministic in the master seed.
std::vector<CorpusItemSpec> make_random_corpus(int n,
                                               std::uint64_t master_seed,
                                               int sample_rate = 48000);

// Corpus recipes round-trip through JSON for reproducible evaluation.
std::string corpus_to_json(const std::vector<CorpusItemSpec>& items);
std::vector<CorpusItemSpec> corpus_from_json(const std::string& text);

} // namespace wcsed
