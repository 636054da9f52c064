#include "wordrec/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "wordrec/seed.hpp"

namespace wordrec {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void validate_model(const Hmm& h) {
    const auto n = static_cast<std::size_t>(h.num_states);
    const auto m = static_cast<std::size_t>(h.num_symbols);
    if (h.num_states < 1 || h.num_symbols < 1)
        throw std::invalid_argument("model needs at least one state and one symbol");
    if (h.initial.size() != n || h.transition.size() != n || h.emission.size() != n ||
        h.topology_mask.size() != n)
        throw std::invalid_argument("model field sizes disagree with num_states");
    for (std::size_t i = 0; i < n; ++i) {
        if (h.transition[i].size() != n || h.topology_mask[i].size() != n)
            throw std::invalid_argument("transition rows must be N x N");
        if (h.emission[i].size() != m)
            throw std::invalid_argument("emission rows must be N x M");
    }
}

void validate_observations(const Hmm& h, const ObservationSequence& obs) {
    if (obs.empty()) throw std::invalid_argument("observation sequence is empty");
    for (int sym : obs)
        if (sym < 0 || sym >= h.num_symbols)
            throw std::invalid_argument("observation symbol " + std::to_string(sym) +
                                        " outside [0, " + std::to_string(h.num_symbols) + ")");
}

// Exact M-step under a lower bound: maximizes sum w_k log p_k subject to
// sum p_k = 1 and p_k >= floor on the allowed set (zeros elsewhere).
// Iteratively pins violators at the floor and redistributes the rest.
std::vector<double> floored_row(const std::vector<double>& weights,
                                const std::vector<std::uint8_t>& allowed, double floor) {
    const std::size_t n = weights.size();
    std::vector<double> row(n, 0.0);
    std::vector<std::uint8_t> pinned(n, 0);
    std::size_t allowed_count = 0;
    for (std::size_t k = 0; k < n; ++k)
        if (allowed[k]) ++allowed_count;

    for (;;) {
        double wsum = 0.0;
        std::size_t pinned_count = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (!allowed[k]) continue;
            if (pinned[k])
                ++pinned_count;
            else
                wsum += weights[k];
        }
        const double budget = 1.0 - floor * static_cast<double>(pinned_count);
        if (wsum <= 0.0) {
            const auto unpinned = static_cast<double>(allowed_count - pinned_count);
            for (std::size_t k = 0; k < n; ++k)
                if (allowed[k]) row[k] = pinned[k] ? floor : budget / unpinned;
            return row;
        }
        bool changed = false;
        for (std::size_t k = 0; k < n; ++k) {
            if (!allowed[k]) continue;
            if (pinned[k]) {
                row[k] = floor;
                continue;
            }
            row[k] = weights[k] * budget / wsum;
            if (row[k] < floor) {
                pinned[k] = 1;
                changed = true;
            }
        }
        if (!changed) return row;
    }
}

}  // namespace

Hmm init_left_right(int num_states, int num_symbols, std::uint64_t seed) {
    if (num_states < 1 || num_symbols < 1)
        throw std::invalid_argument("need at least one state and one symbol");
    const auto n = static_cast<std::size_t>(num_states);
    const auto m = static_cast<std::size_t>(num_symbols);

    Hmm h;
    h.num_states = num_states;
    h.num_symbols = num_symbols;
    h.initial.assign(n, 0.0);
    h.initial[0] = 1.0;

    h.topology_mask.assign(n, std::vector<std::uint8_t>(n, 0));
    h.transition.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t arcs = 0;
        for (std::size_t j = i; j < std::min(n, i + 3); ++j) {
            h.topology_mask[i][j] = 1;
            ++arcs;
        }
        for (std::size_t j = i; j < std::min(n, i + 3); ++j)
            h.transition[i][j] = 1.0 / static_cast<double>(arcs);
    }

    std::mt19937_64 rng(scramble_seed(seed));
    std::uniform_real_distribution<double> jitter(-1.0, 1.0);
    h.emission.assign(n, std::vector<double>(m, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        double sum = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            h.emission[j][k] = (1.0 / static_cast<double>(m)) * (1.0 + 0.01 * jitter(rng));
            sum += h.emission[j][k];
        }
        for (std::size_t k = 0; k < m; ++k) h.emission[j][k] /= sum;
    }
    return h;
}

ForwardResult forward(const Hmm& h, const ObservationSequence& obs) {
    validate_model(h);
    validate_observations(h, obs);
    const auto n = static_cast<std::size_t>(h.num_states);
    const std::size_t t_len = obs.size();

    ForwardResult res;
    res.scaled_alpha.assign(t_len, std::vector<double>(n, 0.0));
    res.scale_factors.assign(t_len, 0.0);

    bool dead = false;
    for (std::size_t t = 0; t < t_len && !dead; ++t) {
        auto& row = res.scaled_alpha[t];
        const auto sym = static_cast<std::size_t>(obs[t]);
        if (t == 0) {
            for (std::size_t j = 0; j < n; ++j) row[j] = h.initial[j] * h.emission[j][sym];
        } else {
            const auto& prev = res.scaled_alpha[t - 1];
            for (std::size_t j = 0; j < n; ++j) {
                double acc = 0.0;
                for (std::size_t i = 0; i < n; ++i) acc += prev[i] * h.transition[i][j];
                row[j] = acc * h.emission[j][sym];
            }
        }
        double sum = 0.0;
        for (double v : row) sum += v;
        res.scale_factors[t] = sum;
        if (sum == 0.0) {
            dead = true;  // impossible sequence; leave the remaining rows zero
            continue;
        }
        for (double& v : row) v /= sum;
    }

    if (dead) {
        res.log_likelihood = kNegInf;
        return res;
    }
    double ll = 0.0;
    for (double s : res.scale_factors) ll += std::log(s);
    res.log_likelihood = ll;
    return res;
}

std::vector<std::vector<double>> backward(const Hmm& h, const ObservationSequence& obs,
                                          const std::vector<double>& scale_factors) {
    validate_model(h);
    validate_observations(h, obs);
    if (scale_factors.size() != obs.size())
        throw std::invalid_argument("scale_factors length must equal sequence length");
    const auto n = static_cast<std::size_t>(h.num_states);
    const std::size_t t_len = obs.size();

    std::vector<std::vector<double>> beta(t_len, std::vector<double>(n, 0.0));
    for (double s : scale_factors)
        if (s == 0.0) return beta;  // impossible sequence

    for (std::size_t j = 0; j < n; ++j) beta[t_len - 1][j] = 1.0 / scale_factors[t_len - 1];
    for (std::size_t t = t_len - 1; t-- > 0;) {
        const auto sym_next = static_cast<std::size_t>(obs[t + 1]);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                acc += h.transition[i][j] * h.emission[j][sym_next] * beta[t + 1][j];
            beta[t][i] = acc / scale_factors[t];
        }
    }
    return beta;
}

ViterbiResult viterbi(const Hmm& h, const ObservationSequence& obs) {
    validate_model(h);
    validate_observations(h, obs);
    const auto n = static_cast<std::size_t>(h.num_states);
    const std::size_t t_len = obs.size();

    const auto safe_log = [](double p) { return p > 0.0 ? std::log(p) : kNegInf; };

    std::vector<std::vector<double>> delta(t_len, std::vector<double>(n, kNegInf));
    std::vector<std::vector<int>> back(t_len, std::vector<int>(n, 0));

    for (std::size_t j = 0; j < n; ++j)
        delta[0][j] = safe_log(h.initial[j]) + safe_log(h.emission[j][obs[0]]);

    for (std::size_t t = 1; t < t_len; ++t) {
        const auto sym = static_cast<std::size_t>(obs[t]);
        for (std::size_t j = 0; j < n; ++j) {
            double best = kNegInf;
            int best_i = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const double cand = delta[t - 1][i] + safe_log(h.transition[i][j]);
                if (cand > best) {
                    best = cand;
                    best_i = static_cast<int>(i);
                }
            }
            delta[t][j] = best + safe_log(h.emission[j][sym]);
            back[t][j] = best_i;
        }
    }

    ViterbiResult res;
    res.path.assign(t_len, 0);
    double best = kNegInf;
    int best_j = 0;
    for (std::size_t j = 0; j < n; ++j) {
        if (delta[t_len - 1][j] > best) {
            best = delta[t_len - 1][j];
            best_j = static_cast<int>(j);
        }
    }
    res.log_prob = best;
    res.path[t_len - 1] = best_j;
    for (std::size_t t = t_len - 1; t-- > 0;)
        res.path[t] = back[t + 1][static_cast<std::size_t>(res.path[t + 1])];
    return res;
}

BaumWelchResult baum_welch(const Hmm& h, const std::vector<ObservationSequence>& training,
                           int max_iters, double tol, double floor_b, double floor_a) {
    validate_model(h);
    if (training.empty()) throw EmptyTrainingSet("no training sequences");
    for (const auto& seq : training) validate_observations(h, seq);
    if (floor_a < 0.0 || floor_b < 0.0) throw std::invalid_argument("floors must be >= 0");
    if (floor_b * h.num_symbols >= 1.0 || floor_a * h.num_states >= 1.0)
        throw std::invalid_argument("floor too large for row length");

    const auto n = static_cast<std::size_t>(h.num_states);
    const auto m = static_cast<std::size_t>(h.num_symbols);
    const std::vector<std::uint8_t> all_symbols(m, 1);

    BaumWelchResult result;
    result.model = h;
    Hmm& model = result.model;

    double prev_ll = kNegInf;
    for (int iter = 0; iter < max_iters; ++iter) {
        std::vector<double> pi_acc(n, 0.0);
        std::vector<std::vector<double>> num_a(n, std::vector<double>(n, 0.0));
        std::vector<double> den_a(n, 0.0);
        std::vector<std::vector<double>> num_b(n, std::vector<double>(m, 0.0));
        std::vector<double> den_b(n, 0.0);
        std::size_t valid_seqs = 0;
        double total_ll = 0.0;

        for (const auto& seq : training) {
            const ForwardResult fwd = forward(model, seq);
            total_ll += fwd.log_likelihood;
            if (fwd.log_likelihood == kNegInf) continue;  // contributes no counts
            const auto beta = backward(model, seq, fwd.scale_factors);
            const std::size_t t_len = seq.size();
            ++valid_seqs;

            for (std::size_t t = 0; t < t_len; ++t) {
                const auto sym = static_cast<std::size_t>(seq[t]);
                for (std::size_t i = 0; i < n; ++i) {
                    const double gamma =
                        fwd.scaled_alpha[t][i] * beta[t][i] * fwd.scale_factors[t];
                    den_b[i] += gamma;
                    num_b[i][sym] += gamma;
                    if (t == 0) pi_acc[i] += gamma;
                    if (t + 1 < t_len) den_a[i] += gamma;
                }
                if (t + 1 < t_len) {
                    const auto sym_next = static_cast<std::size_t>(seq[t + 1]);
                    for (std::size_t i = 0; i < n; ++i) {
                        if (fwd.scaled_alpha[t][i] == 0.0) continue;
                        for (std::size_t j = 0; j < n; ++j)
                            num_a[i][j] += fwd.scaled_alpha[t][i] * model.transition[i][j] *
                                           model.emission[j][sym_next] * beta[t + 1][j];
                    }
                }
            }
        }

        result.log_likelihoods.push_back(total_ll);
        if (iter > 0 && std::isfinite(total_ll) && std::isfinite(prev_ll)) {
            const double rel = (total_ll - prev_ll) / std::abs(prev_ll);
            if (std::abs(prev_ll) == 0.0 ? total_ll == prev_ll : rel < tol) break;
        }
        prev_ll = total_ll;
        if (valid_seqs == 0) break;  // nothing to re-estimate from

        for (std::size_t i = 0; i < n; ++i)
            model.initial[i] = pi_acc[i] / static_cast<double>(valid_seqs);
        for (std::size_t i = 0; i < n; ++i) {
            // a state with no expected occupancy keeps its rows this iteration
            if (den_a[i] > 0.0) {
                std::vector<std::uint8_t> allowed(n);
                for (std::size_t j = 0; j < n; ++j) allowed[j] = model.topology_mask[i][j];
                model.transition[i] = floored_row(num_a[i], allowed, floor_a);
            }
            if (den_b[i] > 0.0) model.emission[i] = floored_row(num_b[i], all_symbols, floor_b);
        }
    }
    return result;
}

double log_likelihood(const Hmm& h, const ObservationSequence& obs) {
    return forward(h, obs).log_likelihood;
}

}  // namespace wordrec
