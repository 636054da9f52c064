#ifndef WORDREC_RECOGNIZER_HPP
#define WORDREC_RECOGNIZER_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wordrec/audio.hpp"
#include "wordrec/dsp.hpp"
#include "wordrec/hmm.hpp"
#include "wordrec/vq.hpp"

namespace wordrec {

struct Vocabulary {
    std::vector<std::string> words;  // unique lowercase labels, order is the tie-break order

    static Vocabulary default_vocabulary();  // zero..nine, plus, minus
};

struct CorpusSample {
    AudioClip clip;
    int speaker = 0;
    int attempt = 0;
    std::string source;  // file path or synthetic tag, used in diagnostics
};

struct TrainingCorpus {
    std::map<std::string, std::vector<CorpusSample>> entries;  // word -> samples
};

struct HmmConfig {
    int num_states = 5;
    int max_iters = 40;
    double tol = 1e-4;
    double floor_b = 1e-6;
    double floor_a = 1e-8;
};

struct VqConfig {
    int codebook_size = 64;
    int max_iters = 50;
    double tol = 1e-6;
};

// Trained isolated-word recognizer: one HMM per word over a shared codebook.
struct Recognizer {
    FrontendConfig frontend;
    Codebook codebook;
    std::vector<std::string> vocabulary;     // scoring / tie-break order
    std::map<std::string, Hmm> word_models;  // keyed by vocabulary label
};

struct RecognitionResult {
    std::vector<std::pair<std::string, double>> ranking;  // (word, log-likelihood), best first
    bool all_impossible = false;  // every model scored -infinity

    const std::string& best_word() const { return ranking.front().first; }
};

struct EvalReport {
    int total = 0;
    int correct = 0;
    double accuracy = 0.0;
    std::vector<std::string> labels;            // confusion matrix axes, vocabulary order
    std::vector<std::vector<int>> confusion;    // [true][predicted]
    std::map<std::string, double> per_word_accuracy;  // words present in the test set
};

struct MissingWordSamples : std::runtime_error {
    std::string word;
    explicit MissingWordSamples(const std::string& w)
        : std::runtime_error("MissingWordSamples: no samples for word \"" + w + "\""), word(w) {}
};

struct UnknownWord : std::runtime_error {
    std::string word;
    explicit UnknownWord(const std::string& w)
        : std::runtime_error("UnknownWord: \"" + w + "\" is not in the vocabulary"), word(w) {}
};

struct MalformedModelFile : std::runtime_error {
    explicit MalformedModelFile(const std::string& msg)
        : std::runtime_error("MalformedModelFile: " + msg) {}
};

struct UnsupportedVersion : std::runtime_error {
    explicit UnsupportedVersion(const std::string& msg)
        : std::runtime_error("UnsupportedVersion: " + msg) {}
};

// Wraps a front-end failure with the sample it came from.
struct CorpusSampleError : std::runtime_error {
    std::string source;
    CorpusSampleError(const std::string& src, const std::string& msg)
        : std::runtime_error(src + ": " + msg), source(src) {}
};

// Full training pass: endpoint and featurize every sample, train one shared
// codebook on the pooled vectors, quantize, then Baum-Welch one left-to-right
// model per word. Deterministic for a fixed seed.
Recognizer train_recognizer(const TrainingCorpus& corpus, const Vocabulary& vocab,
                            const FrontendConfig& fe_cfg = {}, const HmmConfig& hmm_cfg = {},
                            const VqConfig& vq_cfg = {}, std::uint64_t seed = 0);

// Score the clip against every word model; ranking is sorted by descending
// log-likelihood with ties broken by vocabulary order.
RecognitionResult recognize(const Recognizer& r, const AudioClip& clip);

// Top-1 evaluation over a labeled corpus, optionally with additive noise at
// noise_snr_db applied to each sample first (per-sample seeds derived from
// seed).
EvalReport evaluate(const Recognizer& r, const TrainingCorpus& test,
                    std::optional<double> noise_snr_db = std::nullopt, std::uint64_t seed = 0);

// Model persistence: versioned UTF-8 JSON with exact double round-trip.
// save_model(load_model(bytes)) reproduces bytes.
std::string save_model(const Recognizer& r);
Recognizer load_model(const std::string& bytes);

// Feature dumps share the same versioned-JSON conventions.
std::string save_features(const FeatureSequence& fs);
FeatureSequence load_features(const std::string& bytes);

}  // namespace wordrec

#endif
