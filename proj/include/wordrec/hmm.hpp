#ifndef WORDREC_HMM_HPP
#define WORDREC_HMM_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace wordrec {

using ObservationSequence = std::vector<int>;

// Discrete-emission hidden Markov model. Rows of transition and emission and
// the initial distribution each sum to 1; transition[i][j] is 0 wherever
// topology_mask[i][j] is 0, and training preserves those structural zeros.
struct Hmm {
    int num_states = 0;   // N
    int num_symbols = 0;  // M
    std::vector<double> initial;                        // pi, length N
    std::vector<std::vector<double>> transition;        // A, N x N
    std::vector<std::vector<double>> emission;          // B, N x M
    std::vector<std::vector<std::uint8_t>> topology_mask;  // N x N, 0/1
};

// Scaled forward pass. scaled_alpha rows sum to 1 and
// log_likelihood = sum_t log(scale_factors[t]). If the alpha row vanishes at
// some t (sequence impossible under the model) the result is distinguished:
// log_likelihood is -infinity, scale_factors[t..] are 0 and the remaining
// alpha rows are zero.
struct ForwardResult {
    double log_likelihood = 0.0;
    std::vector<std::vector<double>> scaled_alpha;  // T x N
    std::vector<double> scale_factors;              // length T
};

struct ViterbiResult {
    std::vector<int> path;       // length T
    double log_prob = 0.0;       // -infinity when no path has nonzero probability
};

struct BaumWelchResult {
    Hmm model;
    std::vector<double> log_likelihoods;  // total log-likelihood at the start of each iteration
};

struct EmptyTrainingSet : std::runtime_error {
    explicit EmptyTrainingSet(const std::string& msg)
        : std::runtime_error("EmptyTrainingSet: " + msg) {}
};

// Bakis left-to-right model: every state allows self-loop, next state, and
// skip of one; the last state has only its self-loop. pi puts all mass on
// state 0, transitions are uniform over allowed arcs, and emissions are
// uniform with up to 1% seeded jitter (renormalized) so re-estimation has a
// symmetry-breaking starting point.
Hmm init_left_right(int num_states, int num_symbols, std::uint64_t seed);

ForwardResult forward(const Hmm& h, const ObservationSequence& obs);

// Scaled backward pass using the scale factors of the matching forward call.
// Returns the T x N scaled beta matrix; if any scale factor is 0 the
// sequence was impossible and an all-zero matrix is returned.
std::vector<std::vector<double>> backward(const Hmm& h, const ObservationSequence& obs,
                                          const std::vector<double>& scale_factors);

// Most likely state path, computed in log space. Ties are broken toward the
// lower state index at each backtrack step.
ViterbiResult viterbi(const Hmm& h, const ObservationSequence& obs);

// Multi-sequence Baum-Welch re-estimation. Expected transition and emission
// counts are accumulated over all sequences from the scaled alpha/beta
// passes; the M-step keeps structural zeros, floors surviving transition
// entries at floor_a and emission entries at floor_b (rows renormalized),
// and leaves a state's rows unchanged in any iteration where it receives no
// expected occupancy. Stops when the relative improvement of the total
// log-likelihood falls below tol, or after max_iters iterations.
BaumWelchResult baum_welch(const Hmm& h, const std::vector<ObservationSequence>& training,
                           int max_iters = 40, double tol = 1e-4, double floor_b = 1e-6,
                           double floor_a = 1e-8);

double log_likelihood(const Hmm& h, const ObservationSequence& obs);

}  // namespace wordrec

#endif
