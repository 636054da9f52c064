#include "wordrec/vq.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <random>

#include "wordrec/seed.hpp"

namespace wordrec {

namespace {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

struct LloydState {
    std::vector<int> assignment;       // per point, nearest centroid
    std::vector<double> point_cost;    // per point, squared distance to it
    double avg_distortion = 0.0;
};

LloydState assign_points(const std::vector<std::vector<double>>& data,
                         const std::vector<std::vector<double>>& centroids) {
    LloydState st;
    st.assignment.resize(data.size());
    st.point_cost.resize(data.size());
    double total = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        int best = 0;
        double best_d = squared_distance(data[i], centroids[0]);
        for (std::size_t c = 1; c < centroids.size(); ++c) {
            const double d = squared_distance(data[i], centroids[c]);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(c);
            }
        }
        st.assignment[i] = best;
        st.point_cost[i] = best_d;
        total += best_d;
    }
    st.avg_distortion = total / static_cast<double>(data.size());
    return st;
}

// Lloyd iterations until the relative distortion improvement falls below tol.
void lloyd(const std::vector<std::vector<double>>& data,
           std::vector<std::vector<double>>& centroids, int max_iters, double tol,
           std::vector<double>* trace) {
    const std::size_t dim = data[0].size();
    double prev = std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < max_iters; ++iter) {
        const LloydState st = assign_points(data, centroids);
        assert(st.avg_distortion <= prev * (1.0 + 1e-12));
        if (trace) trace->push_back(st.avg_distortion);

        if (std::isfinite(prev)) {
            const double improvement = (prev - st.avg_distortion) / prev;
            if (improvement < tol) return;
        }
        if (st.avg_distortion == 0.0) return;
        prev = st.avg_distortion;

        std::vector<std::vector<double>> sums(centroids.size(), std::vector<double>(dim, 0.0));
        std::vector<std::size_t> counts(centroids.size(), 0);
        for (std::size_t i = 0; i < data.size(); ++i) {
            const auto c = static_cast<std::size_t>(st.assignment[i]);
            ++counts[c];
            for (std::size_t d = 0; d < dim; ++d) sums[c][d] += data[i][d];
        }

        std::vector<std::size_t> empty_cells;
        for (std::size_t c = 0; c < centroids.size(); ++c) {
            if (counts[c] == 0) {
                empty_cells.push_back(c);
                continue;
            }
            for (std::size_t d = 0; d < dim; ++d)
                centroids[c][d] = sums[c][d] / static_cast<double>(counts[c]);
        }

        if (!empty_cells.empty()) {
            // steal the points farthest from their assigned centroids
            std::vector<std::size_t> order(data.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                if (st.point_cost[a] != st.point_cost[b])
                    return st.point_cost[a] > st.point_cost[b];
                return a < b;
            });
            for (std::size_t e = 0; e < empty_cells.size() && e < order.size(); ++e)
                centroids[empty_cells[e]] = data[order[e]];
        }
    }
}

}  // namespace

Codebook train_codebook(const std::vector<std::vector<double>>& data, int codebook_size,
                        std::uint64_t seed, int max_iters, double tol,
                        std::vector<std::vector<double>>* distortion_log) {
    if (data.empty()) throw EmptyData("no training vectors");
    if (codebook_size < 1 || (codebook_size & (codebook_size - 1)) != 0)
        throw std::invalid_argument("codebook_size must be a power of two");
    if (static_cast<std::size_t>(codebook_size) > data.size())
        throw TooManyCentroids("codebook_size " + std::to_string(codebook_size) +
                               " exceeds data size " + std::to_string(data.size()));
    const std::size_t dim = data[0].size();
    for (const auto& v : data)
        if (v.size() != dim) throw DimensionMismatch("training vectors differ in dimension");

    std::vector<double> mean(dim, 0.0);
    for (const auto& v : data)
        for (std::size_t d = 0; d < dim; ++d) mean[d] += v[d];
    for (double& m : mean) m /= static_cast<double>(data.size());

    std::vector<double> stddev(dim, 0.0);
    for (const auto& v : data)
        for (std::size_t d = 0; d < dim; ++d) {
            const double diff = v[d] - mean[d];
            stddev[d] += diff * diff;
        }
    for (double& s : stddev) s = std::sqrt(s / static_cast<double>(data.size()));

    const auto stage_trace = [&]() -> std::vector<double>* {
        if (!distortion_log) return nullptr;
        distortion_log->emplace_back();
        return &distortion_log->back();
    };

    std::mt19937_64 rng(scramble_seed(seed));
    std::vector<std::vector<double>> centroids{mean};
    lloyd(data, centroids, max_iters, tol, stage_trace());

    while (centroids.size() < static_cast<std::size_t>(codebook_size)) {
        std::vector<std::vector<double>> split;
        split.reserve(centroids.size() * 2);
        for (const auto& c : centroids) {
            std::vector<double> lo = c, hi = c;
            for (std::size_t d = 0; d < dim; ++d) {
                const double sign = (rng() & 1) ? 1.0 : -1.0;
                const double eps = 0.001 * stddev[d] * sign;
                hi[d] += eps;
                lo[d] -= eps;
            }
            split.push_back(std::move(hi));
            split.push_back(std::move(lo));
        }
        centroids = std::move(split);
        lloyd(data, centroids, max_iters, tol, stage_trace());
    }

    return Codebook{std::move(centroids)};
}

int quantize(const Codebook& cb, const std::vector<double>& v) {
    if (cb.centroids.empty()) throw EmptyData("codebook has no centroids");
    if (v.size() != cb.centroids[0].size())
        throw DimensionMismatch("vector dimension " + std::to_string(v.size()) +
                                " != centroid dimension " +
                                std::to_string(cb.centroids[0].size()));
    int best = 0;
    double best_d = squared_distance(v, cb.centroids[0]);
    for (std::size_t c = 1; c < cb.centroids.size(); ++c) {
        const double d = squared_distance(v, cb.centroids[c]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

std::vector<int> quantize_sequence(const Codebook& cb, const FeatureSequence& fs) {
    std::vector<int> symbols;
    symbols.reserve(fs.vectors.size());
    for (const auto& v : fs.vectors) symbols.push_back(quantize(cb, v));
    return symbols;
}

}  // namespace wordrec
