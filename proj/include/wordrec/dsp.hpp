#ifndef WORDREC_DSP_HPP
#define WORDREC_DSP_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "wordrec/audio.hpp"

namespace wordrec {

struct FrontendConfig {
    double preemphasis_alpha = 0.97;
    double frame_len_ms = 25.0;
    double shift_ms = 10.0;
    int lpc_order = 12;      // p
    int cepstrum_order = 12; // Q
};

// Output of one linear-prediction analysis. Coefficient convention:
// s(n) is predicted as  sum_{i=1..p} a[i-1] * s(n-i).
struct LpcResult {
    std::vector<double> a;          // predictor coefficients, length p
    std::vector<double> k;          // reflection coefficients, length p
    double residual_energy = 0.0;   // final prediction-error energy E
};

struct FeatureSequence {
    std::vector<std::vector<double>> vectors;  // one cepstral vector per frame
    FrontendConfig config;                     // fingerprint of how they were made
};

struct ClipTooShort : std::runtime_error {
    explicit ClipTooShort(const std::string& msg) : std::runtime_error("ClipTooShort: " + msg) {}
};

struct OrderTooHigh : std::runtime_error {
    explicit OrderTooHigh(const std::string& msg) : std::runtime_error("OrderTooHigh: " + msg) {}
};

struct SilentFrame : std::runtime_error {
    explicit SilentFrame(const std::string& msg) : std::runtime_error("SilentFrame: " + msg) {}
};

struct NumericalBreakdown : std::runtime_error {
    explicit NumericalBreakdown(const std::string& msg)
        : std::runtime_error("NumericalBreakdown: " + msg) {}
};

int frame_length_samples(const FrontendConfig& cfg, int sample_rate);
int frame_shift_samples(const FrontendConfig& cfg, int sample_rate);

// y[0] = x[0],  y[n] = x[n] - alpha * x[n-1]. alpha in [0, 1].
AudioClip preemphasize(const AudioClip& clip, double alpha);

// Split into overlapping frames starting at 0, shift, 2*shift, ...;
// a trailing partial frame is discarded.
std::vector<std::vector<double>> frame_blocks(const AudioClip& clip, const FrontendConfig& cfg);

// w[n] = 0.54 - 0.46 cos(2 pi n / (N-1))
std::vector<double> hamming_window(const std::vector<double>& frame);

// r[k] = sum_n x[n] x[n+k] for k = 0..order
std::vector<double> autocorrelate(const std::vector<double>& frame, int order);

// Order-recursive solve of the Toeplitz normal equations
// sum_{i=1..p} a_i r[|i-j|] = r[j].
LpcResult levinson_durbin(const std::vector<double>& r);

// Cepstrum of the all-pole model log-spectrum, c_1..c_Q:
//   c_m = a_m + sum_{k=1}^{m-1} (k/m) c_k a_{m-k}          (m <= p)
//   c_m =       sum_{k=m-p}^{m-1} (k/m) c_k a_{m-k}        (m > p)
std::vector<double> lpc_to_cepstrum(const LpcResult& lpc, int cepstrum_order);

// Full front end: preemphasis, framing, Hamming window, autocorrelation,
// Levinson-Durbin, cepstral conversion. Silent frames yield zero vectors so
// the frame count is preserved.
FeatureSequence extract_features(const AudioClip& clip, const FrontendConfig& cfg = {});

}  // namespace wordrec

#endif
