#pragma once

#include <span>
#include <vector>

#include "vibromon/fault_class.hpp"

namespace vibromon {

// Extension neural network: one feature interval [w_lower, w_upper] per
// class and feature, with centers kept at the interval midpoints.
struct EnnModel {
    std::size_t n_classes = 0;
    std::size_t n_features = 0;
    std::vector<std::vector<double>> w_lower;  // n_classes x n_features
    std::vector<std::vector<double>> w_upper;
    std::vector<std::vector<double>> centers;
    double eta = 0.219;

    void validate() const;  // w_lower <= w_upper, centers at midpoints
};

// Interval-normalized distance of x from a class's feature intervals:
// sum over features of (|x_j - z_cj| - half_width_cj) / (|half_width_cj| + 1e-12) + 1.
// Zero at the center when all widths are positive, n_features on the
// interval boundary.
double extension_distance(const EnnModel& model, std::size_t class_index,
                          std::span<const double> x);

struct EnnDecision {
    FaultClass fault = FaultClass::Normal;
    std::vector<double> distances;  // per class
};

// argmin of the extension distance; ties go to the lowest ordinal.
EnnDecision classify(const EnnModel& model, std::span<const double> x);

struct EnnTrainOptions {
    double eta = 0.219;
    int epochs = 100;
    bool stop_at_zero_error = true;
};

struct EnnTrainResult {
    EnnModel model;
    std::vector<double> epoch_error_curve;  // misclassification rate per epoch
};

// Intervals start at the per-class feature minima/maxima. A misclassified
// pattern translates the true class's interval toward it and the wrongly
// chosen class's interval away from it by eta times the distance to the
// respective center; widths are preserved, so no bound can cross its
// partner and the centers stay at the midpoints.
EnnTrainResult train_enn(const std::vector<std::vector<double>>& points,
                         const std::vector<FaultClass>& labels,
                         const EnnTrainOptions& options = {});

}  // namespace vibromon
