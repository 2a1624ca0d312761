#include "vibromon/svm.hpp"

#include <algorithm>
#include <cmath>

#include "vibromon/errors.hpp"

namespace vibromon {

namespace {

// Dual objective: sum(alpha) - 1/2 sum_ij alpha_i alpha_j d_i d_j K_ij.
double dual_objective(const std::vector<double>& alpha, const std::vector<int>& y,
                      const std::vector<std::vector<double>>& k) {
    const std::size_t n = alpha.size();
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        obj += alpha[i];
        if (alpha[i] == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (alpha[j] == 0.0) continue;
            obj -= 0.5 * alpha[i] * alpha[j] * y[i] * y[j] * k[i][j];
        }
    }
    return obj;
}

struct SmoState {
    const std::vector<std::vector<double>>& k;
    const std::vector<int>& y;
    std::vector<double> alpha;
    std::vector<double> error;  // f(x_i) - y_i
    double b = 0.0;
    double c;
    double tol;
};

bool take_step(SmoState& s, std::size_t i1, std::size_t i2) {
    if (i1 == i2) return false;
    const double a1 = s.alpha[i1], a2 = s.alpha[i2];
    const int y1 = s.y[i1], y2 = s.y[i2];
    const double e1 = s.error[i1], e2 = s.error[i2];

    double lo, hi;
    if (y1 != y2) {
        lo = std::max(0.0, a2 - a1);
        hi = std::min(s.c, s.c + a2 - a1);
    } else {
        lo = std::max(0.0, a1 + a2 - s.c);
        hi = std::min(s.c, a1 + a2);
    }
    if (lo >= hi) return false;

    const double k11 = s.k[i1][i1], k22 = s.k[i2][i2], k12 = s.k[i1][i2];
    const double eta = 2.0 * k12 - k11 - k22;
    if (eta >= 0.0) return false;  // non-positive curvature along the pair

    double a2_new = a2 - static_cast<double>(y2) * (e1 - e2) / eta;
    a2_new = std::clamp(a2_new, lo, hi);
    if (std::abs(a2_new - a2) < 1e-12 * (a2_new + a2 + 1e-12)) return false;

    const double a1_new = a1 + static_cast<double>(y1 * y2) * (a2 - a2_new);

    const double d1 = static_cast<double>(y1) * (a1_new - a1);
    const double d2 = static_cast<double>(y2) * (a2_new - a2);
    const double b1 = s.b - e1 - d1 * k11 - d2 * k12;
    const double b2 = s.b - e2 - d1 * k12 - d2 * k22;
    double b_new;
    if (a1_new > 0.0 && a1_new < s.c) {
        b_new = b1;
    } else if (a2_new > 0.0 && a2_new < s.c) {
        b_new = b2;
    } else {
        b_new = 0.5 * (b1 + b2);
    }

    const double db = b_new - s.b;
    for (std::size_t j = 0; j < s.alpha.size(); ++j)
        s.error[j] += d1 * s.k[i1][j] + d2 * s.k[i2][j] + db;

    s.alpha[i1] = a1_new;
    s.alpha[i2] = a2_new;
    s.b = b_new;
    return true;
}

bool violates_kkt(const SmoState& s, std::size_t i) {
    const double r = s.error[i] * static_cast<double>(s.y[i]);  // y*f - 1
    return (r < -s.tol && s.alpha[i] < s.c) || (r > s.tol && s.alpha[i] > 0.0);
}

}  // namespace

BinarySvmModel train_binary(const std::vector<std::vector<double>>& points,
                            const std::vector<int>& labels,
                            const KernelSpec& kernel,
                            const SvmTrainOptions& options) {
    kernel.validate();
    if (points.size() != labels.size())
        throw DimensionMismatch("points and labels differ in count");
    if (points.size() < 2) throw TooFewPoints("need at least two training points");
    bool has_pos = false, has_neg = false;
    for (int y : labels) {
        if (y == 1) has_pos = true;
        else if (y == -1) has_neg = true;
        else throw InvalidParameter("labels must be +1 or -1");
    }
    if (!has_pos || !has_neg) throw SingleClassData("both labels must be present");
    if (!(options.c > 0.0)) throw InvalidParameter("C must be positive");

    const std::size_t n = points.size();
    const auto k = gram_matrix(kernel, points);

    SmoState s{k, labels, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
               0.0, options.c, options.tol};
    // alpha = 0 everywhere, so f(x_i) = b = 0 and E_i = -y_i
    for (std::size_t i = 0; i < n; ++i) s.error[i] = -static_cast<double>(labels[i]);

    bool converged = false;
    const long max_sweeps = static_cast<long>(options.max_passes) * 100L;
    for (long sweep = 0; sweep < max_sweeps; ++sweep) {
        std::size_t accepted = 0;
        bool any_violation = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!violates_kkt(s, i)) continue;
            any_violation = true;
            // partner with the largest |E_i - E_j|, falling back to a scan
            std::size_t best = i;
            double best_gap = -1.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double gap = std::abs(s.error[i] - s.error[j]);
                if (j != i && gap > best_gap) {
                    best_gap = gap;
                    best = j;
                }
            }
            bool stepped = best != i && take_step(s, i, best);
            if (!stepped) {
                for (std::size_t j = 0; j < n && !stepped; ++j)
                    stepped = take_step(s, i, j);
            }
            if (stepped) {
                ++accepted;
                if (options.dual_observer)
                    options.dual_observer(dual_objective(s.alpha, labels, k));
            }
        }
        if (!any_violation) {
            converged = true;
            break;
        }
        // Selection is deterministic: a sweep that accepted nothing is a
        // fixed point and repeating it cannot make progress.
        if (accepted == 0) break;
    }

    BinarySvmModel model;
    model.kernel = kernel;
    model.c = options.c;
    model.bias = s.b;
    model.converged = converged;
    for (std::size_t i = 0; i < n; ++i) {
        if (s.alpha[i] > 0.0) {
            model.support_vectors.push_back(points[i]);
            model.alphas.push_back(s.alpha[i]);
            model.labels.push_back(labels[i]);
        }
    }
    return model;
}

SvmDecision predict_binary(const BinarySvmModel& model, std::span<const double> x) {
    if (!model.support_vectors.empty() &&
        model.support_vectors.front().size() != x.size())
        throw DimensionMismatch("query dimension differs from training");
    double score = model.bias;
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
        score += model.alphas[i] * static_cast<double>(model.labels[i]) *
                 kernel_eval(model.kernel, model.support_vectors[i], x);
    }
    return {score, score >= 0.0 ? 1 : -1};
}

MulticlassSvmModel train_multiclass(const std::vector<std::vector<double>>& points,
                                    const std::vector<FaultClass>& labels,
                                    const KernelSpec& kernel,
                                    const SvmTrainOptions& options) {
    if (points.size() != labels.size())
        throw DimensionMismatch("points and labels differ in count");

    MulticlassSvmModel model;
    for (FaultClass c : all_fault_classes()) {
        const bool present = std::find(labels.begin(), labels.end(), c) != labels.end();
        if (!present) throw MissingClass("no training data for " + to_label(c));
        model.classes.push_back(c);
    }

    for (std::size_t a = 0; a < model.classes.size(); ++a) {
        for (std::size_t b = a + 1; b < model.classes.size(); ++b) {
            const FaultClass ca = model.classes[a], cb = model.classes[b];
            std::vector<std::vector<double>> sub;
            std::vector<int> sub_y;
            for (std::size_t i = 0; i < points.size(); ++i) {
                if (labels[i] == ca) {
                    sub.push_back(points[i]);
                    sub_y.push_back(1);
                } else if (labels[i] == cb) {
                    sub.push_back(points[i]);
                    sub_y.push_back(-1);
                }
            }
            model.pairwise.emplace(std::make_pair(ca, cb),
                                   train_binary(sub, sub_y, kernel, options));
        }
    }
    return model;
}

FaultClass predict_multiclass(const MulticlassSvmModel& model,
                              std::span<const double> x) {
    std::array<int, kNumFaultClasses> votes{};
    std::array<double, kNumFaultClasses> weight{};
    for (const auto& [pair, binary] : model.pairwise) {
        const SvmDecision d = predict_binary(binary, x);
        const FaultClass winner = d.sign > 0 ? pair.first : pair.second;
        votes[static_cast<std::size_t>(ordinal(winner))] += 1;
        weight[static_cast<std::size_t>(ordinal(winner))] += std::abs(d.score);
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < kNumFaultClasses; ++c) {
        if (votes[c] > votes[best] ||
            (votes[c] == votes[best] && weight[c] > weight[best]))
            best = c;
    }
    return static_cast<FaultClass>(best);
}

}  // namespace vibromon
