#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "vibromon/fault_class.hpp"
#include "vibromon/gmm.hpp"

namespace vibromon {

// T feature vectors of uniform dimension, e.g. the per-frame cepstral
// vectors of one segment.
using ObservationSequence = std::vector<std::vector<double>>;

// Ergodic hidden Markov model with per-state diagonal Gaussian-mixture
// emissions.
struct HmmModel {
    std::vector<double> pi;                       // N
    std::vector<std::vector<double>> transitions;  // N x N, rows sum to 1
    std::vector<GaussianMixtureModel> emissions;   // N
    bool converged = true;

    std::size_t state_count() const { return pi.size(); }
    void validate() const;
};

// log P(O | model) by the scaled forward recursion; equals the log of the
// sum over all state paths of the joint path probability.
double forward_loglik(const HmmModel& model, const ObservationSequence& obs);

struct ViterbiResult {
    std::vector<std::size_t> path;
    double log_prob = 0.0;
};

// Most probable state path. Among tying paths the one whose state index is
// lower at the first differing step is returned.
ViterbiResult viterbi(const HmmModel& model, const ObservationSequence& obs);

struct HmmTrainOptions {
    std::size_t n_states = 2;
    std::size_t n_mixtures = 10;
    std::uint64_t seed = 0;
    int max_iters = 50;
    double tol = 1e-4;
};

// Baum-Welch over initial distribution, transitions and emission mixtures,
// with the scaled forward-backward recursions. The total log-likelihood is
// non-decreasing per iteration up to the variance-floor clamp.
HmmModel train_baum_welch(const std::vector<ObservationSequence>& sequences,
                          const HmmTrainOptions& options = {});

// One model per condition; a sequence goes to the class whose model gives
// the highest forward log-likelihood (ties to the lowest ordinal).
struct HmmBank {
    std::map<FaultClass, HmmModel> per_class;
};

struct HmmDecision {
    FaultClass fault = FaultClass::Normal;
    std::map<FaultClass, double> scores;
};

HmmDecision classify(const HmmBank& bank, const ObservationSequence& obs);

}  // namespace vibromon
