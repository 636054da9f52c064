#include "wordrec/recognizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <nlohmann/json.hpp>

#include "wordrec/seed.hpp"

namespace wordrec {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kModelFormatVersion = 1;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void validate_vocabulary(const Vocabulary& vocab) {
    if (vocab.words.empty()) throw std::invalid_argument("vocabulary is empty");
    std::set<std::string> seen;
    for (const auto& w : vocab.words) {
        if (w.empty()) throw std::invalid_argument("vocabulary label is empty");
        for (char c : w)
            if (std::isupper(static_cast<unsigned char>(c)))
                throw std::invalid_argument("vocabulary label \"" + w + "\" must be lowercase");
        if (!seen.insert(w).second)
            throw std::invalid_argument("duplicate vocabulary label \"" + w + "\"");
    }
}

std::vector<int> featurize_and_quantize(const Recognizer& r, const AudioClip& clip) {
    const AudioClip trimmed = detect_endpoints(clip);
    const FeatureSequence features = extract_features(trimmed, r.frontend);
    return quantize_sequence(r.codebook, features);
}

ordered_json frontend_to_json(const FrontendConfig& cfg) {
    ordered_json j;
    j["preemphasis_alpha"] = cfg.preemphasis_alpha;
    j["frame_len_ms"] = cfg.frame_len_ms;
    j["shift_ms"] = cfg.shift_ms;
    j["lpc_order"] = cfg.lpc_order;
    j["cepstrum_order"] = cfg.cepstrum_order;
    return j;
}

FrontendConfig frontend_from_json(const ordered_json& j) {
    FrontendConfig cfg;
    cfg.preemphasis_alpha = j.at("preemphasis_alpha").get<double>();
    cfg.frame_len_ms = j.at("frame_len_ms").get<double>();
    cfg.shift_ms = j.at("shift_ms").get<double>();
    cfg.lpc_order = j.at("lpc_order").get<int>();
    cfg.cepstrum_order = j.at("cepstrum_order").get<int>();
    return cfg;
}

int read_format_version(const ordered_json& j, const char* what) {
    if (!j.is_object() || !j.contains("format_version"))
        throw MalformedModelFile(std::string(what) + " lacks format_version");
    const auto& v = j.at("format_version");
    if (!v.is_number_integer()) throw MalformedModelFile("format_version must be an integer");
    const int version = v.get<int>();
    if (version != kModelFormatVersion)
        throw UnsupportedVersion("format_version " + std::to_string(version) +
                                 " (supported: " + std::to_string(kModelFormatVersion) + ")");
    return version;
}

std::vector<double> row_from_json(const ordered_json& j, std::size_t len, const char* what) {
    if (!j.is_array() || j.size() != len)
        throw MalformedModelFile(std::string(what) + " has wrong shape");
    std::vector<double> row;
    row.reserve(len);
    for (const auto& v : j) {
        if (!v.is_number()) throw MalformedModelFile(std::string(what) + " holds a non-number");
        row.push_back(v.get<double>());
    }
    return row;
}

}  // namespace

Vocabulary Vocabulary::default_vocabulary() {
    return Vocabulary{{"zero", "one", "two", "three", "four", "five", "six", "seven", "eight",
                       "nine", "plus", "minus"}};
}

Recognizer train_recognizer(const TrainingCorpus& corpus, const Vocabulary& vocab,
                            const FrontendConfig& fe_cfg, const HmmConfig& hmm_cfg,
                            const VqConfig& vq_cfg, std::uint64_t seed) {
    validate_vocabulary(vocab);
    for (const auto& word : vocab.words) {
        const auto it = corpus.entries.find(word);
        if (it == corpus.entries.end() || it->second.empty()) throw MissingWordSamples(word);
    }

    // front end over every sample, pooling vectors for the shared codebook
    std::map<std::string, std::vector<FeatureSequence>> features_by_word;
    std::vector<std::vector<double>> pooled;
    for (const auto& word : vocab.words) {
        auto& list = features_by_word[word];
        for (const auto& sample : corpus.entries.at(word)) {
            try {
                const AudioClip trimmed = detect_endpoints(sample.clip);
                list.push_back(extract_features(trimmed, fe_cfg));
            } catch (const std::exception& e) {
                throw CorpusSampleError(sample.source.empty() ? word : sample.source, e.what());
            }
            for (const auto& v : list.back().vectors) pooled.push_back(v);
        }
    }

    Recognizer r;
    r.frontend = fe_cfg;
    r.vocabulary = vocab.words;
    r.codebook = train_codebook(pooled, vq_cfg.codebook_size, combine_seed(seed, 1),
                                vq_cfg.max_iters, vq_cfg.tol);

    for (std::size_t w = 0; w < vocab.words.size(); ++w) {
        const auto& word = vocab.words[w];
        std::vector<ObservationSequence> sequences;
        for (const auto& fs : features_by_word.at(word))
            sequences.push_back(quantize_sequence(r.codebook, fs));

        const Hmm init =
            init_left_right(hmm_cfg.num_states, r.codebook.size(), combine_seed(seed, 2 + w));
        BaumWelchResult trained = baum_welch(init, sequences, hmm_cfg.max_iters, hmm_cfg.tol,
                                             hmm_cfg.floor_b, hmm_cfg.floor_a);
        r.word_models.emplace(word, std::move(trained.model));
    }
    return r;
}

RecognitionResult recognize(const Recognizer& r, const AudioClip& clip) {
    const std::vector<int> symbols = featurize_and_quantize(r, clip);

    RecognitionResult res;
    res.ranking.reserve(r.vocabulary.size());
    for (const auto& word : r.vocabulary)
        res.ranking.emplace_back(word, log_likelihood(r.word_models.at(word), symbols));

    std::stable_sort(res.ranking.begin(), res.ranking.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    res.all_impossible =
        std::all_of(res.ranking.begin(), res.ranking.end(),
                    [](const auto& p) { return p.second == kNegInf; });
    return res;
}

EvalReport evaluate(const Recognizer& r, const TrainingCorpus& test,
                    std::optional<double> noise_snr_db, std::uint64_t seed) {
    for (const auto& [word, _] : test.entries)
        if (std::find(r.vocabulary.begin(), r.vocabulary.end(), word) == r.vocabulary.end())
            throw UnknownWord(word);

    EvalReport report;
    report.labels = r.vocabulary;
    const std::size_t v = r.vocabulary.size();
    report.confusion.assign(v, std::vector<int>(v, 0));

    std::map<std::string, std::pair<int, int>> word_counts;  // word -> (correct, total)
    std::uint64_t sample_index = 0;
    for (std::size_t t = 0; t < v; ++t) {
        const auto& word = r.vocabulary[t];
        const auto it = test.entries.find(word);
        if (it == test.entries.end()) continue;
        for (const auto& sample : it->second) {
            AudioClip clip = sample.clip;
            if (noise_snr_db)
                clip = add_noise(clip, *noise_snr_db, combine_seed(seed, sample_index));
            ++sample_index;

            const RecognitionResult res = recognize(r, clip);
            const auto& predicted = res.best_word();
            const auto p = static_cast<std::size_t>(
                std::find(r.vocabulary.begin(), r.vocabulary.end(), predicted) -
                r.vocabulary.begin());
            ++report.confusion[t][p];
            ++report.total;
            auto& wc = word_counts[word];
            ++wc.second;
            if (predicted == word) {
                ++report.correct;
                ++wc.first;
            }
        }
    }
    if (report.total == 0) throw std::invalid_argument("test corpus is empty");
    report.accuracy = static_cast<double>(report.correct) / report.total;
    for (const auto& [word, wc] : word_counts)
        report.per_word_accuracy[word] = static_cast<double>(wc.first) / wc.second;
    return report;
}

std::string save_model(const Recognizer& r) {
    ordered_json j;
    j["format_version"] = kModelFormatVersion;
    j["frontend"] = frontend_to_json(r.frontend);
    j["codebook"]["centroids"] = r.codebook.centroids;

    ordered_json words = ordered_json::object();
    for (const auto& word : r.vocabulary) {
        const Hmm& h = r.word_models.at(word);
        ordered_json m;
        m["N"] = h.num_states;
        m["M"] = h.num_symbols;
        m["pi"] = h.initial;
        m["A"] = h.transition;
        m["B"] = h.emission;
        m["topology_mask"] = h.topology_mask;
        words[word] = std::move(m);
    }
    j["words"] = std::move(words);
    return j.dump(2) + "\n";
}

Recognizer load_model(const std::string& bytes) {
    ordered_json j;
    try {
        j = ordered_json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedModelFile(e.what());
    }
    read_format_version(j, "model file");

    Recognizer r;
    try {
        r.frontend = frontend_from_json(j.at("frontend"));

        const auto& cents = j.at("codebook").at("centroids");
        if (!cents.is_array() || cents.empty())
            throw MalformedModelFile("codebook.centroids must be a non-empty array");
        const std::size_t dim = cents.front().is_array() ? cents.front().size() : 0;
        if (dim == 0) throw MalformedModelFile("codebook centroids must be non-empty arrays");
        for (const auto& c : cents)
            r.codebook.centroids.push_back(row_from_json(c, dim, "codebook centroid"));

        const auto& words = j.at("words");
        if (!words.is_object() || words.empty())
            throw MalformedModelFile("words must be a non-empty object");
        for (const auto& [label, m] : words.items()) {
            Hmm h;
            h.num_states = m.at("N").get<int>();
            h.num_symbols = m.at("M").get<int>();
            if (h.num_states < 1) throw MalformedModelFile("word N must be >= 1");
            if (h.num_symbols != r.codebook.size())
                throw MalformedModelFile("word M must equal the codebook size");
            const auto n = static_cast<std::size_t>(h.num_states);
            const auto sym = static_cast<std::size_t>(h.num_symbols);

            h.initial = row_from_json(m.at("pi"), n, "pi");
            const auto& a = m.at("A");
            const auto& b = m.at("B");
            const auto& mask = m.at("topology_mask");
            if (!a.is_array() || a.size() != n || !b.is_array() || b.size() != n ||
                !mask.is_array() || mask.size() != n)
                throw MalformedModelFile("A, B and topology_mask must have N rows");
            for (std::size_t i = 0; i < n; ++i) {
                h.transition.push_back(row_from_json(a[i], n, "A row"));
                h.emission.push_back(row_from_json(b[i], sym, "B row"));
                const auto mask_row = row_from_json(mask[i], n, "topology_mask row");
                std::vector<std::uint8_t> bits(n);
                for (std::size_t k = 0; k < n; ++k) {
                    if (mask_row[k] != 0.0 && mask_row[k] != 1.0)
                        throw MalformedModelFile("topology_mask entries must be 0 or 1");
                    bits[k] = mask_row[k] == 1.0 ? 1 : 0;
                }
                h.topology_mask.push_back(std::move(bits));
            }
            r.vocabulary.push_back(label);
            r.word_models.emplace(label, std::move(h));
        }
    } catch (const nlohmann::json::exception& e) {
        throw MalformedModelFile(e.what());
    }
    return r;
}

std::string save_features(const FeatureSequence& fs) {
    ordered_json j;
    j["format_version"] = kModelFormatVersion;
    j["frontend"] = frontend_to_json(fs.config);
    j["vectors"] = fs.vectors;
    return j.dump(2) + "\n";
}

FeatureSequence load_features(const std::string& bytes) {
    ordered_json j;
    try {
        j = ordered_json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedModelFile(e.what());
    }
    read_format_version(j, "feature file");

    FeatureSequence fs;
    try {
        fs.config = frontend_from_json(j.at("frontend"));
        const auto& vecs = j.at("vectors");
        if (!vecs.is_array()) throw MalformedModelFile("vectors must be an array");
        for (const auto& v : vecs)
            fs.vectors.push_back(
                row_from_json(v, static_cast<std::size_t>(fs.config.cepstrum_order), "vector"));
    } catch (const nlohmann::json::exception& e) {
        throw MalformedModelFile(e.what());
    }
    return fs;
}

}  // namespace wordrec
