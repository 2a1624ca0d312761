#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "vibromon/fault_class.hpp"

namespace vibromon {

// Diagonal-covariance Gaussian mixture.
struct GaussianMixtureModel {
    std::vector<double> weights;               // M, sums to 1
    std::vector<std::vector<double>> means;    // M x dim
    std::vector<std::vector<double>> variances;  // M x dim, floored
    bool converged = true;

    std::size_t component_count() const { return weights.size(); }
    std::size_t dim() const { return means.empty() ? 0 : means.front().size(); }
    void validate() const;
};

inline constexpr double kVarianceFloor = 1e-6;

// log N(x; mean, diag(variances))
double gaussian_logpdf(std::span<const double> x, std::span<const double> mean,
                       std::span<const double> variances);

// log sum_i w_i N_i(x), evaluated with a max shift for stability.
double mixture_loglik(const GaussianMixtureModel& model, std::span<const double> x);

struct GmmTrainOptions {
    std::uint64_t seed = 0;
    int max_iters = 200;
    double tol = 1e-6;
    int kmeans_iters = 10;
};

// Expectation-maximization with k-means initialization (farthest-point
// seeding). The dataset log-likelihood is non-decreasing per iteration up to
// the variance-floor clamp.
GaussianMixtureModel train_em(const std::vector<std::vector<double>>& data,
                              std::size_t n_components,
                              const GmmTrainOptions& options = {});

// Lloyd k-means with farthest-point seeding; also used to seed the
// per-state emission mixtures of the Markov-chain classifier.
std::vector<std::vector<double>> kmeans_centers(
    const std::vector<std::vector<double>>& data, std::size_t k,
    std::uint64_t seed, int iters);

// One mixture per condition; a segment is scored by the summed per-vector
// log-likelihood and assigned to the highest-scoring class (ties go to the
// lowest ordinal).
struct GmmClassifier {
    std::map<FaultClass, GaussianMixtureModel> per_class;
};

struct GmmDecision {
    FaultClass fault = FaultClass::Normal;
    std::map<FaultClass, double> scores;
};

GmmDecision classify(const GmmClassifier& classifier,
                     const std::vector<std::vector<double>>& observations);

}  // namespace vibromon
