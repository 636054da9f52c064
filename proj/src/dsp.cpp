#include "wordrec/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wordrec {

namespace {

constexpr double kSilentFrameFloor = 1e-10;

void validate_config(const FrontendConfig& cfg) {
    if (!(cfg.preemphasis_alpha >= 0.0 && cfg.preemphasis_alpha <= 1.0))
        throw std::invalid_argument("preemphasis_alpha must be in [0, 1]");
    if (!(cfg.shift_ms > 0.0 && cfg.frame_len_ms >= cfg.shift_ms))
        throw std::invalid_argument("require frame_len_ms >= shift_ms > 0");
    if (cfg.lpc_order < 1) throw std::invalid_argument("lpc_order must be >= 1");
    if (cfg.cepstrum_order < 1) throw std::invalid_argument("cepstrum_order must be >= 1");
}

}  // namespace

int frame_length_samples(const FrontendConfig& cfg, int sample_rate) {
    return static_cast<int>(std::llround(cfg.frame_len_ms * sample_rate / 1000.0));
}

int frame_shift_samples(const FrontendConfig& cfg, int sample_rate) {
    return static_cast<int>(std::llround(cfg.shift_ms * sample_rate / 1000.0));
}

AudioClip preemphasize(const AudioClip& clip, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::invalid_argument("preemphasis alpha must be in [0, 1]");
    AudioClip out;
    out.sample_rate = clip.sample_rate;
    out.samples.resize(clip.samples.size());
    if (clip.samples.empty()) return out;
    out.samples[0] = clip.samples[0];
    for (std::size_t n = 1; n < clip.samples.size(); ++n)
        out.samples[n] = clip.samples[n] - alpha * clip.samples[n - 1];
    return out;
}

std::vector<std::vector<double>> frame_blocks(const AudioClip& clip, const FrontendConfig& cfg) {
    validate_config(cfg);
    const auto flen = static_cast<std::size_t>(frame_length_samples(cfg, clip.sample_rate));
    const auto shift = static_cast<std::size_t>(frame_shift_samples(cfg, clip.sample_rate));
    if (clip.samples.size() < flen)
        throw ClipTooShort("clip has " + std::to_string(clip.samples.size()) +
                           " samples, frame needs " + std::to_string(flen));

    const std::size_t count = (clip.samples.size() - flen) / shift + 1;
    std::vector<std::vector<double>> frames(count);
    for (std::size_t f = 0; f < count; ++f) {
        const auto begin = clip.samples.begin() + static_cast<std::ptrdiff_t>(f * shift);
        frames[f].assign(begin, begin + static_cast<std::ptrdiff_t>(flen));
    }
    return frames;
}

std::vector<double> hamming_window(const std::vector<double>& frame) {
    const std::size_t n = frame.size();
    if (n < 2) throw std::invalid_argument("hamming window needs at least 2 samples");
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double w =
            0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                   static_cast<double>(n - 1));
        out[i] = frame[i] * w;
    }
    return out;
}

std::vector<double> autocorrelate(const std::vector<double>& frame, int order) {
    if (order < 0 || static_cast<std::size_t>(order) >= frame.size())
        throw OrderTooHigh("autocorrelation order " + std::to_string(order) +
                           " not below frame length " + std::to_string(frame.size()));
    std::vector<double> r(static_cast<std::size_t>(order) + 1, 0.0);
    for (int k = 0; k <= order; ++k) {
        double acc = 0.0;
        for (std::size_t n = 0; n + static_cast<std::size_t>(k) < frame.size(); ++n)
            acc += frame[n] * frame[n + static_cast<std::size_t>(k)];
        r[static_cast<std::size_t>(k)] = acc;
    }
    return r;
}

LpcResult levinson_durbin(const std::vector<double>& r) {
    if (r.empty()) throw std::invalid_argument("autocorrelation vector is empty");
    if (r[0] <= kSilentFrameFloor) throw SilentFrame("r[0] at or below silence floor");

    const std::size_t p = r.size() - 1;
    LpcResult res;
    res.a.assign(p, 0.0);
    res.k.assign(p, 0.0);
    double energy = r[0];

    std::vector<double> prev(p, 0.0);
    for (std::size_t m = 1; m <= p; ++m) {
        if (energy <= 0.0)
            throw NumericalBreakdown("prediction-error energy vanished at order " +
                                     std::to_string(m));
        double acc = r[m];
        for (std::size_t j = 1; j < m; ++j) acc -= prev[j - 1] * r[m - j];
        const double km = acc / energy;

        res.a[m - 1] = km;
        for (std::size_t j = 1; j < m; ++j) res.a[j - 1] = prev[j - 1] - km * prev[m - j - 1];

        res.k[m - 1] = km;
        energy *= (1.0 - km * km);
        std::copy(res.a.begin(), res.a.begin() + static_cast<std::ptrdiff_t>(m), prev.begin());
    }
    res.residual_energy = std::max(energy, 0.0);
    return res;
}

std::vector<double> lpc_to_cepstrum(const LpcResult& lpc, int cepstrum_order) {
    if (cepstrum_order < 1) throw std::invalid_argument("cepstrum_order must be >= 1");
    const std::size_t p = lpc.a.size();
    const auto q = static_cast<std::size_t>(cepstrum_order);

    std::vector<double> c(q, 0.0);
    for (std::size_t m = 1; m <= q; ++m) {
        double acc = m <= p ? lpc.a[m - 1] : 0.0;
        const std::size_t k_lo = m > p ? m - p : 1;
        for (std::size_t k = k_lo; k < m; ++k)
            acc += (static_cast<double>(k) / static_cast<double>(m)) * c[k - 1] * lpc.a[m - k - 1];
        c[m - 1] = acc;
    }
    return c;
}

FeatureSequence extract_features(const AudioClip& clip, const FrontendConfig& cfg) {
    validate_config(cfg);
    const int flen = frame_length_samples(cfg, clip.sample_rate);
    if (flen <= cfg.lpc_order)
        throw std::invalid_argument("frame length in samples must exceed lpc_order");

    const AudioClip emphasized = preemphasize(clip, cfg.preemphasis_alpha);
    const auto frames = frame_blocks(emphasized, cfg);

    FeatureSequence seq;
    seq.config = cfg;
    seq.vectors.reserve(frames.size());
    for (const auto& frame : frames) {
        const auto windowed = hamming_window(frame);
        const auto r = autocorrelate(windowed, cfg.lpc_order);
        if (r[0] <= kSilentFrameFloor) {
            // keep token length: silent frames become zero vectors
            seq.vectors.emplace_back(static_cast<std::size_t>(cfg.cepstrum_order), 0.0);
            continue;
        }
        seq.vectors.push_back(lpc_to_cepstrum(levinson_durbin(r), cfg.cepstrum_order));
    }
    return seq;
}

}  // namespace wordrec
