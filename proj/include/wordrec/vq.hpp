#ifndef WORDREC_VQ_HPP
#define WORDREC_VQ_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wordrec/dsp.hpp"

namespace wordrec {

struct Codebook {
    std::vector<std::vector<double>> centroids;

    int size() const { return static_cast<int>(centroids.size()); }
    int dimension() const { return centroids.empty() ? 0 : static_cast<int>(centroids[0].size()); }
};

struct EmptyData : std::runtime_error {
    explicit EmptyData(const std::string& msg) : std::runtime_error("EmptyData: " + msg) {}
};

struct TooManyCentroids : std::runtime_error {
    explicit TooManyCentroids(const std::string& msg)
        : std::runtime_error("TooManyCentroids: " + msg) {}
};

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& msg)
        : std::runtime_error("DimensionMismatch: " + msg) {}
};

// LBG binary-splitting k-means. Starts from the global mean, doubles the
// codebook by perturbing every centroid with +/- 0.001 * per-dimension std
// (signs drawn from seed), and runs Lloyd iterations after each split until
// the relative distortion improvement drops below tol. Empty cells are
// re-seeded with the point farthest from its assigned centroid.
// codebook_size must be a power of two and at most |data|.
//
// When distortion_log is given, each split stage appends one vector of
// per-Lloyd-iteration average distortions (non-increasing within a stage).
Codebook train_codebook(const std::vector<std::vector<double>>& data, int codebook_size,
                        std::uint64_t seed, int max_iters = 50, double tol = 1e-6,
                        std::vector<std::vector<double>>* distortion_log = nullptr);

// Index of the centroid with minimal squared Euclidean distance; ties go to
// the lowest index.
int quantize(const Codebook& cb, const std::vector<double>& v);

std::vector<int> quantize_sequence(const Codebook& cb, const FeatureSequence& fs);

}  // namespace wordrec

#endif
