#include "vibromon/enn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vibromon/errors.hpp"

namespace vibromon {

namespace {
constexpr double kWidthGuard = 1e-12;
}

void EnnModel::validate() const {
    if (w_lower.size() != n_classes || w_upper.size() != n_classes ||
        centers.size() != n_classes)
        throw InvalidParameter("inconsistent model shape");
    for (std::size_t c = 0; c < n_classes; ++c) {
        for (std::size_t j = 0; j < n_features; ++j) {
            if (w_lower[c][j] > w_upper[c][j])
                throw InvalidParameter("inverted interval bound");
            const double mid = 0.5 * (w_lower[c][j] + w_upper[c][j]);
            if (std::abs(centers[c][j] - mid) > 1e-12)
                throw InvalidParameter("center off the interval midpoint");
        }
    }
}

double extension_distance(const EnnModel& model, std::size_t class_index,
                          std::span<const double> x) {
    if (class_index >= model.n_classes) throw UnknownClass("class index out of range");
    if (x.size() != model.n_features)
        throw DimensionMismatch("pattern dimension differs from model");

    double ed = 0.0;
    for (std::size_t j = 0; j < model.n_features; ++j) {
        const double half_width =
            0.5 * (model.w_upper[class_index][j] - model.w_lower[class_index][j]);
        const double dist = std::abs(x[j] - model.centers[class_index][j]);
        ed += (dist - half_width) / (std::abs(half_width) + kWidthGuard) + 1.0;
    }
    return ed;
}

EnnDecision classify(const EnnModel& model, std::span<const double> x) {
    EnnDecision d;
    d.distances.resize(model.n_classes);
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_c = 0;
    for (std::size_t c = 0; c < model.n_classes; ++c) {
        d.distances[c] = extension_distance(model, c, x);
        if (d.distances[c] < best) {  // strict: ties keep the lower ordinal
            best = d.distances[c];
            best_c = c;
        }
    }
    d.fault = static_cast<FaultClass>(best_c);
    return d;
}

EnnTrainResult train_enn(const std::vector<std::vector<double>>& points,
                         const std::vector<FaultClass>& labels,
                         const EnnTrainOptions& options) {
    if (points.size() != labels.size())
        throw DimensionMismatch("points and labels differ in count");
    if (points.empty()) throw TooFewPoints("no training data");
    if (!(options.eta > 0.0 && options.eta < 1.0))
        throw InvalidLearningRate("eta must lie in (0,1)");

    const std::size_t nf = points.front().size();
    for (const auto& p : points) {
        if (p.size() != nf) throw DimensionMismatch("ragged training data");
    }

    EnnTrainResult result;
    EnnModel& model = result.model;
    model.n_classes = kNumFaultClasses;
    model.n_features = nf;
    model.eta = options.eta;
    model.w_lower.assign(kNumFaultClasses,
                         std::vector<double>(nf, std::numeric_limits<double>::infinity()));
    model.w_upper.assign(kNumFaultClasses,
                         std::vector<double>(nf, -std::numeric_limits<double>::infinity()));

    std::array<bool, kNumFaultClasses> seen{};
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto c = static_cast<std::size_t>(ordinal(labels[i]));
        seen[c] = true;
        for (std::size_t j = 0; j < nf; ++j) {
            model.w_lower[c][j] = std::min(model.w_lower[c][j], points[i][j]);
            model.w_upper[c][j] = std::max(model.w_upper[c][j], points[i][j]);
        }
    }
    for (FaultClass c : all_fault_classes()) {
        if (!seen[static_cast<std::size_t>(ordinal(c))])
            throw MissingClass("no training data for " + to_label(c));
    }

    model.centers.assign(kNumFaultClasses, std::vector<double>(nf, 0.0));
    auto recenter = [&](std::size_t c) {
        for (std::size_t j = 0; j < nf; ++j) {
            if (model.w_lower[c][j] > model.w_upper[c][j])
                std::swap(model.w_lower[c][j], model.w_upper[c][j]);
            model.centers[c][j] = 0.5 * (model.w_lower[c][j] + model.w_upper[c][j]);
        }
    };
    for (std::size_t c = 0; c < kNumFaultClasses; ++c) recenter(c);

    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        std::size_t errors = 0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto truth = static_cast<std::size_t>(ordinal(labels[i]));
            const auto predicted =
                static_cast<std::size_t>(ordinal(classify(model, points[i]).fault));
            if (predicted == truth) continue;
            ++errors;
            for (std::size_t j = 0; j < nf; ++j) {
                const double toward =
                    options.eta * (points[i][j] - model.centers[truth][j]);
                model.w_lower[truth][j] += toward;
                model.w_upper[truth][j] += toward;
                const double away =
                    options.eta * (points[i][j] - model.centers[predicted][j]);
                model.w_lower[predicted][j] -= away;
                model.w_upper[predicted][j] -= away;
            }
            recenter(truth);
            recenter(predicted);
        }
        result.epoch_error_curve.push_back(static_cast<double>(errors) /
                                           static_cast<double>(points.size()));
        if (options.stop_at_zero_error && errors == 0) break;
    }
    return result;
}

}  // namespace vibromon
