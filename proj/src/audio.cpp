#include "wordrec/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "wordrec/seed.hpp"

namespace wordrec {

namespace {

constexpr double kSilenceEnergyFloor = 1e-10;

bool supported_rate(int rate) { return rate == 8000 || rate == 16000; }

std::uint32_t read_u32(std::span<const std::uint8_t> b, std::size_t off) {
    return static_cast<std::uint32_t>(b[off]) | (static_cast<std::uint32_t>(b[off + 1]) << 8) |
           (static_cast<std::uint32_t>(b[off + 2]) << 16) |
           (static_cast<std::uint32_t>(b[off + 3]) << 24);
}

std::uint16_t read_u16(std::span<const std::uint8_t> b, std::size_t off) {
    return static_cast<std::uint16_t>(b[off] | (b[off + 1] << 8));
}

bool chunk_id_is(std::span<const std::uint8_t> b, std::size_t off, const char* id) {
    return std::memcmp(b.data() + off, id, 4) == 0;
}

void append_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

void append_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
}

void append_tag(std::vector<std::uint8_t>& out, const char* tag) {
    out.insert(out.end(), tag, tag + 4);
}

int frame_samples(double ms, int rate) {
    return static_cast<int>(std::llround(ms * rate / 1000.0));
}

}  // namespace

AudioClip load_wav(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 12) throw MalformedWav("buffer too small for RIFF header");
    if (!chunk_id_is(bytes, 0, "RIFF")) throw MalformedWav("missing RIFF magic");
    if (!chunk_id_is(bytes, 8, "WAVE")) throw MalformedWav("missing WAVE magic");

    bool have_fmt = false;
    bool have_data = false;
    std::uint16_t format_code = 0;
    std::uint16_t channels = 0;
    std::uint32_t rate = 0;
    std::uint16_t bits = 0;
    std::size_t data_off = 0;
    std::size_t data_len = 0;

    std::size_t off = 12;
    while (off + 8 <= bytes.size()) {
        const std::uint32_t chunk_size = read_u32(bytes, off + 4);
        if (off + 8 + chunk_size > bytes.size()) throw MalformedWav("chunk overruns buffer");
        if (chunk_id_is(bytes, off, "fmt ")) {
            if (chunk_size < 16) throw MalformedWav("fmt chunk too small");
            format_code = read_u16(bytes, off + 8);
            channels = read_u16(bytes, off + 10);
            rate = read_u32(bytes, off + 12);
            bits = read_u16(bytes, off + 22);
            have_fmt = true;
        } else if (chunk_id_is(bytes, off, "data")) {
            data_off = off + 8;
            data_len = chunk_size;
            have_data = true;
        }
        // unknown chunks are skipped; chunks are word-aligned
        off += 8 + chunk_size + (chunk_size & 1);
    }
    if (off != bytes.size()) throw MalformedWav("trailing bytes after last chunk");
    if (!have_fmt) throw MalformedWav("missing fmt chunk");
    if (!have_data) throw MalformedWav("missing data chunk");

    if (format_code != 1) throw UnsupportedFormat("only PCM (format code 1) is supported");
    if (channels != 1) throw UnsupportedFormat("only mono is supported");
    if (bits != 16) throw UnsupportedFormat("only 16-bit samples are supported");
    if (!supported_rate(static_cast<int>(rate)))
        throw UnsupportedFormat("sample rate must be 8000 or 16000 Hz");
    if (data_len % 2 != 0) throw MalformedWav("odd data chunk size for 16-bit samples");

    AudioClip clip;
    clip.sample_rate = static_cast<int>(rate);
    clip.samples.resize(data_len / 2);
    for (std::size_t i = 0; i < clip.samples.size(); ++i) {
        const auto raw = static_cast<std::int16_t>(read_u16(bytes, data_off + 2 * i));
        clip.samples[i] = raw / 32768.0;
    }
    return clip;
}

std::vector<std::uint8_t> save_wav(const AudioClip& clip) {
    const auto n = static_cast<std::uint32_t>(clip.samples.size());
    const std::uint32_t data_size = 2 * n;
    const auto rate = static_cast<std::uint32_t>(clip.sample_rate);

    std::vector<std::uint8_t> out;
    out.reserve(44 + data_size);
    append_tag(out, "RIFF");
    append_u32(out, 36 + data_size);
    append_tag(out, "WAVE");
    append_tag(out, "fmt ");
    append_u32(out, 16);
    append_u16(out, 1);  // PCM
    append_u16(out, 1);  // mono
    append_u32(out, rate);
    append_u32(out, rate * 2);  // byte rate
    append_u16(out, 2);         // block align
    append_u16(out, 16);        // bits per sample
    append_tag(out, "data");
    append_u32(out, data_size);

    for (double s : clip.samples) {
        auto q = std::llround(s * 32768.0);
        q = std::clamp<long long>(q, -32767, 32767);
        append_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
    }
    return out;
}

AudioClip detect_endpoints(const AudioClip& clip, const EndpointConfig& cfg) {
    if (!(cfg.threshold_ratio > 0.0 && cfg.threshold_ratio < 1.0))
        throw std::invalid_argument("threshold_ratio must be in (0, 1)");
    if (!(cfg.shift_ms > 0.0 && cfg.frame_len_ms >= cfg.shift_ms))
        throw std::invalid_argument("require frame_len_ms >= shift_ms > 0");
    if (cfg.margin_frames < 0) throw std::invalid_argument("margin_frames must be >= 0");

    const std::size_t flen = frame_samples(cfg.frame_len_ms, clip.sample_rate);
    const std::size_t shift = frame_samples(cfg.shift_ms, clip.sample_rate);
    if (clip.samples.size() < flen)
        throw std::invalid_argument("clip shorter than one endpointing frame");

    const std::size_t num_frames = (clip.samples.size() - flen) / shift + 1;
    std::vector<double> energy(num_frames, 0.0);
    for (std::size_t f = 0; f < num_frames; ++f) {
        const std::size_t start = f * shift;
        double e = 0.0;
        for (std::size_t i = start; i < start + flen; ++i) e += clip.samples[i] * clip.samples[i];
        energy[f] = e;
    }

    const double peak = *std::max_element(energy.begin(), energy.end());
    if (peak < kSilenceEnergyFloor) throw NoSpeech("peak frame energy below silence floor");

    const double threshold = cfg.threshold_ratio * peak;
    std::size_t first = 0;
    while (energy[first] < threshold) ++first;
    std::size_t last = num_frames - 1;
    while (energy[last] < threshold) --last;

    const auto margin = static_cast<long long>(cfg.margin_frames);
    const long long begin_frame = static_cast<long long>(first) - margin;
    const std::size_t begin =
        begin_frame <= 0 ? 0 : static_cast<std::size_t>(begin_frame) * shift;
    const std::size_t end = std::min(clip.samples.size(),
                                     (last + static_cast<std::size_t>(margin)) * shift + flen);

    AudioClip out;
    out.sample_rate = clip.sample_rate;
    out.samples.assign(clip.samples.begin() + begin, clip.samples.begin() + end);
    return out;
}

AudioClip add_noise(const AudioClip& clip, double snr_db, std::uint64_t seed) {
    if (std::isinf(snr_db) && snr_db > 0) return clip;  // "clean" sentinel
    if (clip.samples.empty()) throw SilentSignal("empty clip");

    double signal_power = 0.0;
    for (double s : clip.samples) signal_power += s * s;
    signal_power /= static_cast<double>(clip.samples.size());
    if (signal_power == 0.0) throw SilentSignal("signal power is zero");

    std::mt19937_64 rng(scramble_seed(seed));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> noise(clip.samples.size());
    double raw_power = 0.0;
    for (double& v : noise) {
        v = gauss(rng);
        raw_power += v * v;
    }
    raw_power /= static_cast<double>(noise.size());

    // exact post-hoc scaling: realized noise power is signal_power / 10^(snr/10)
    const double target_power = signal_power * std::pow(10.0, -snr_db / 10.0);
    const double scale = std::sqrt(target_power / raw_power);

    AudioClip out;
    out.sample_rate = clip.sample_rate;
    out.samples.resize(clip.samples.size());
    for (std::size_t i = 0; i < noise.size(); ++i)
        out.samples[i] = std::clamp(clip.samples[i] + scale * noise[i], -1.0, 1.0);
    return out;
}

namespace {

// Per-class resonance targets in Hz. Classes share an F2/F3 family in groups
// of four and step F1 within the family, so heavy noise confuses neighbors
// while clean tokens stay separable.
constexpr double kClassFormants[kSyntheticClassCount][3] = {
    {300.0, 1100.0, 2600.0}, {460.0, 1100.0, 2600.0}, {620.0, 1100.0, 2600.0},
    {780.0, 1100.0, 2600.0}, {300.0, 1700.0, 2900.0}, {460.0, 1700.0, 2900.0},
    {620.0, 1700.0, 2900.0}, {780.0, 1700.0, 2900.0}, {300.0, 2300.0, 3200.0},
    {460.0, 2300.0, 3200.0}, {620.0, 2300.0, 3200.0}, {780.0, 2300.0, 3200.0},
};

constexpr double kFormantBandwidth[3] = {90.0, 130.0, 170.0};

}  // namespace

AudioClip synthesize_word_token(int class_id, int speaker_id, std::uint64_t attempt_seed,
                                int sample_rate) {
    if (class_id < 0 || class_id >= kSyntheticClassCount)
        throw UnknownClass("class_id " + std::to_string(class_id) + " out of range");
    if (!supported_rate(sample_rate))
        throw UnsupportedFormat("sample rate must be 8000 or 16000 Hz");

    std::uint64_t seed = combine_seed(attempt_seed, static_cast<std::uint64_t>(class_id));
    seed = combine_seed(seed, static_cast<std::uint64_t>(speaker_id) + 0x100);
    seed = combine_seed(seed, static_cast<std::uint64_t>(sample_rate));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const double duration = 0.4 + 0.4 * unit(rng);
    const auto n = static_cast<std::size_t>(std::llround(duration * sample_rate));
    const double pitch_hz = 88.0 + 26.0 * (((speaker_id % 7) + 7) % 7);
    const auto period = static_cast<std::size_t>(std::llround(sample_rate / pitch_hz));

    std::vector<double> signal(n, 0.0);
    for (std::size_t i = 0; i < n; i += period) signal[i] = 1.0;

    // cascade of two-pole resonators, each jittered up to 3% per attempt
    for (int f = 0; f < 3; ++f) {
        const double jitter = 1.0 + 0.03 * (2.0 * unit(rng) - 1.0);
        const double freq = kClassFormants[class_id][f] * jitter;
        const double r = std::exp(-std::numbers::pi * kFormantBandwidth[f] / sample_rate);
        const double c1 = 2.0 * r * std::cos(2.0 * std::numbers::pi * freq / sample_rate);
        const double c2 = -r * r;
        double y1 = 0.0, y2 = 0.0;
        for (double& x : signal) {
            const double y = x + c1 * y1 + c2 * y2;
            y2 = y1;
            y1 = y;
            x = y;
        }
    }

    double peak = 0.0;
    for (double s : signal) peak = std::max(peak, std::abs(s));
    const double gain = 0.5 / peak;
    for (double& s : signal) s *= gain;

    AudioClip out;
    out.sample_rate = sample_rate;
    out.samples = std::move(signal);
    return out;
}

}  // namespace wordrec
