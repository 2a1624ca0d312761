#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "vibromon/fault_class.hpp"
#include "vibromon/kernel.hpp"

namespace vibromon {

// Soft-margin kernel SVM for labels in {-1, +1}. Only training points with
// a positive multiplier are stored.
struct BinarySvmModel {
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> alphas;
    std::vector<int> labels;  // +-1 per support vector
    double bias = 0.0;
    KernelSpec kernel;
    double c = 10.0;
    bool converged = true;
};

struct SvmTrainOptions {
    double c = 10.0;
    double tol = 1e-3;
    // consecutive full sweeps without an accepted update before giving up
    int max_passes = 100;
    // invoked with the dual objective after every accepted pair update
    std::function<void(double)> dual_observer;
};

// Solves the dual soft-margin problem by sequential minimal optimization:
// full sweeps pick the first KKT violator as the first index and the point
// with the largest |E_i - E_j| as its partner.
BinarySvmModel train_binary(const std::vector<std::vector<double>>& points,
                            const std::vector<int>& labels,
                            const KernelSpec& kernel,
                            const SvmTrainOptions& options = {});

struct SvmDecision {
    double score = 0.0;
    int sign = 1;  // sgn(0) = +1
};

SvmDecision predict_binary(const BinarySvmModel& model,
                           std::span<const double> x);

// One-vs-one multiclass wrapper: one binary machine per unordered class
// pair, majority vote with |score|-sum then lowest-ordinal tie-breaking.
struct MulticlassSvmModel {
    std::map<std::pair<FaultClass, FaultClass>, BinarySvmModel> pairwise;
    std::vector<FaultClass> classes;
};

MulticlassSvmModel train_multiclass(const std::vector<std::vector<double>>& points,
                                    const std::vector<FaultClass>& labels,
                                    const KernelSpec& kernel,
                                    const SvmTrainOptions& options = {});

FaultClass predict_multiclass(const MulticlassSvmModel& model,
                              std::span<const double> x);

}  // namespace vibromon
