#ifndef WORDREC_AUDIO_HPP
#define WORDREC_AUDIO_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wordrec {

// Mono audio buffer, samples normalized to [-1, 1].
struct AudioClip {
    std::vector<double> samples;
    int sample_rate = 8000;  // 8000 or 16000 Hz

    double duration_seconds() const {
        return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }
};

struct EndpointConfig {
    double frame_len_ms = 25.0;
    double shift_ms = 10.0;
    double threshold_ratio = 0.05;  // fraction of peak frame energy
    int margin_frames = 3;          // frames kept on each side of detected speech
};

struct MalformedWav : std::runtime_error {
    explicit MalformedWav(const std::string& msg) : std::runtime_error("MalformedWav: " + msg) {}
};

struct UnsupportedFormat : std::runtime_error {
    explicit UnsupportedFormat(const std::string& msg)
        : std::runtime_error("UnsupportedFormat: " + msg) {}
};

struct NoSpeech : std::runtime_error {
    explicit NoSpeech(const std::string& msg) : std::runtime_error("NoSpeech: " + msg) {}
};

struct SilentSignal : std::runtime_error {
    explicit SilentSignal(const std::string& msg) : std::runtime_error("SilentSignal: " + msg) {}
};

struct UnknownClass : std::runtime_error {
    explicit UnknownClass(const std::string& msg) : std::runtime_error("UnknownClass: " + msg) {}
};

// Decode a RIFF/WAVE buffer. Accepts 16-bit mono PCM at 8 or 16 kHz only;
// unknown chunks are skipped. Samples are int16 / 32768.
AudioClip load_wav(std::span<const std::uint8_t> bytes);

// Encode as a canonical 44-byte-header PCM WAV. Samples encode as
// round(s * 32768) clamped to [-32767, 32767], so every file produced here
// decodes and re-encodes to identical bytes.
std::vector<std::uint8_t> save_wav(const AudioClip& clip);

// Trim leading/trailing silence by short-time energy thresholding. Returns
// the sub-clip spanning the first to last frame whose energy reaches
// threshold_ratio * peak, widened by margin_frames per side.
AudioClip detect_endpoints(const AudioClip& clip, const EndpointConfig& cfg = {});

// Add white Gaussian noise at an exact signal-to-noise ratio. The noise is
// rescaled after generation so the realized ratio equals snr_db; the sum is
// clamped back to [-1, 1]. snr_db = +infinity returns the clip unchanged.
AudioClip add_noise(const AudioClip& clip, double snr_db, std::uint64_t seed);

inline constexpr int kSyntheticClassCount = 12;

// Deterministic synthetic word token: a pulse train (pitch set by
// speaker_id) run through a per-class three-resonator all-pole filter, pole
// frequencies jittered up to 3% by attempt_seed. 0.4-0.8 s, peak 0.5.
AudioClip synthesize_word_token(int class_id, int speaker_id, std::uint64_t attempt_seed,
                                int sample_rate = 8000);

}  // namespace wordrec

#endif
