#include "vibromon/gmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vibromon/errors.hpp"
#include "vibromon/rng.hpp"

namespace vibromon {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

void GaussianMixtureModel::validate() const {
    if (weights.empty() || means.size() != weights.size() ||
        variances.size() != weights.size())
        throw InvalidParameter("inconsistent mixture shape");
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0 || w > 1.0) throw InvalidParameter("weight out of [0,1]");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw InvalidParameter("weights must sum to 1");
    for (const auto& v : variances) {
        for (double e : v) {
            if (!(e > 0.0)) throw InvalidParameter("variance must be positive");
        }
    }
}

double gaussian_logpdf(std::span<const double> x, std::span<const double> mean,
                       std::span<const double> variances) {
    if (x.size() != mean.size() || x.size() != variances.size())
        throw DimensionMismatch("logpdf dimensions differ");
    double log_det = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        log_det += std::log(variances[i]);
        const double d = x[i] - mean[i];
        quad += d * d / variances[i];
    }
    return -0.5 * (static_cast<double>(x.size()) * kLog2Pi + log_det + quad);
}

double mixture_loglik(const GaussianMixtureModel& model, std::span<const double> x) {
    const std::size_t m = model.component_count();
    if (m == 0) throw InvalidParameter("empty mixture");
    std::vector<double> lp(m);
    double max_lp = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        lp[i] = std::log(model.weights[i]) +
                gaussian_logpdf(x, model.means[i], model.variances[i]);
        max_lp = std::max(max_lp, lp[i]);
    }
    if (!std::isfinite(max_lp)) return max_lp;
    double acc = 0.0;
    for (double v : lp) acc += std::exp(v - max_lp);
    return max_lp + std::log(acc);
}

namespace {

// Farthest-point seeding followed by a fixed number of Lloyd iterations.
std::vector<std::vector<double>> kmeans_impl(
    const std::vector<std::vector<double>>& data, std::size_t k, Rng& rng,
    int iters) {
    const std::size_t n = data.size();
    std::vector<std::vector<double>> centers;
    centers.reserve(k);
    centers.push_back(data[rng.below(n)]);
    std::vector<double> dist2(n, std::numeric_limits<double>::infinity());
    auto sq_dist = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[i];
            s += d * d;
        }
        return s;
    };
    while (centers.size() < k) {
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            dist2[i] = std::min(dist2[i], sq_dist(data[i], centers.back()));
            if (dist2[i] > far_d) {
                far_d = dist2[i];
                far = i;
            }
        }
        centers.push_back(data[far]);
    }

    const std::size_t dim = data.front().size();
    std::vector<std::size_t> assign(n, 0);
    for (int it = 0; it < iters; ++it) {
        bool moved = false;
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k; ++c) {
                const double d = sq_dist(data[i], centers[c]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (assign[i] != best) {
                assign[i] = best;
                moved = true;
            }
        }
        if (!moved && it > 0) break;
        std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t d = 0; d < dim; ++d) sums[assign[i]][d] += data[i][d];
            ++counts[assign[i]];
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;  // keep the old center for empty clusters
            for (std::size_t d = 0; d < dim; ++d)
                centers[c][d] = sums[c][d] / static_cast<double>(counts[c]);
        }
    }
    return centers;
}

}  // namespace

std::vector<std::vector<double>> kmeans_centers(
    const std::vector<std::vector<double>>& data, std::size_t k,
    std::uint64_t seed, int iters) {
    if (data.empty() || k == 0 || data.size() < k)
        throw TooFewPoints("k-means needs at least k points");
    Rng rng(seed);
    return kmeans_impl(data, k, rng, iters);
}

GaussianMixtureModel train_em(const std::vector<std::vector<double>>& data,
                              std::size_t n_components,
                              const GmmTrainOptions& options) {
    if (n_components == 0) throw InvalidParameter("need at least one component");
    if (data.size() < n_components)
        throw TooFewPoints("fewer points than mixture components");
    const std::size_t n = data.size();
    const std::size_t dim = data.front().size();
    if (dim == 0) throw InvalidParameter("zero-dimensional data");
    for (const auto& x : data) {
        if (x.size() != dim) throw DimensionMismatch("ragged training data");
    }
    bool all_same = true;
    for (std::size_t i = 1; i < n && all_same; ++i) all_same = data[i] == data[0];
    if (all_same) throw DegenerateData("all training points identical");

    Rng rng(options.seed);
    GaussianMixtureModel model;
    model.means = kmeans_impl(data, n_components, rng, options.kmeans_iters);
    model.weights.assign(n_components, 1.0 / static_cast<double>(n_components));
    model.variances.assign(n_components, std::vector<double>(dim, 1.0));

    // responsibilities from nearest-center hard assignment, then one M-step
    std::vector<std::vector<double>> resp(n, std::vector<double>(n_components, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < n_components; ++c) {
            double d2 = 0.0;
            for (std::size_t d = 0; d < dim; ++d) {
                const double dd = data[i][d] - model.means[c][d];
                d2 += dd * dd;
            }
            if (d2 < best_d) {
                best_d = d2;
                best = c;
            }
        }
        resp[i][best] = 1.0;
    }

    auto m_step = [&]() {
        for (std::size_t c = 0; c < n_components; ++c) {
            double nc = 0.0;
            for (std::size_t i = 0; i < n; ++i) nc += resp[i][c];
            if (nc < 1e-12) {
                // dead component: park it on the globally farthest point
                model.weights[c] = 1e-12;
                continue;
            }
            model.weights[c] = nc / static_cast<double>(n);
            for (std::size_t d = 0; d < dim; ++d) {
                double mu = 0.0;
                for (std::size_t i = 0; i < n; ++i) mu += resp[i][c] * data[i][d];
                mu /= nc;
                double var = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double dd = data[i][d] - mu;
                    var += resp[i][c] * dd * dd;
                }
                var /= nc;
                model.means[c][d] = mu;
                model.variances[c][d] = std::max(var, kVarianceFloor);
            }
        }
        // renormalize in case any component died
        double wsum = 0.0;
        for (double w : model.weights) wsum += w;
        for (double& w : model.weights) w /= wsum;
    };
    m_step();

    model.converged = false;
    double prev_ll = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < options.max_iters; ++iter) {
        // E-step
        double total_ll = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double max_lp = -std::numeric_limits<double>::infinity();
            std::vector<double> lp(n_components);
            for (std::size_t c = 0; c < n_components; ++c) {
                lp[c] = std::log(model.weights[c]) +
                        gaussian_logpdf(data[i], model.means[c], model.variances[c]);
                max_lp = std::max(max_lp, lp[c]);
            }
            double denom = 0.0;
            for (std::size_t c = 0; c < n_components; ++c)
                denom += std::exp(lp[c] - max_lp);
            for (std::size_t c = 0; c < n_components; ++c)
                resp[i][c] = std::exp(lp[c] - max_lp) / denom;
            total_ll += max_lp + std::log(denom);
        }
        if (iter > 0 && total_ll - prev_ll < options.tol) {
            model.converged = true;
            prev_ll = total_ll;
            break;
        }
        prev_ll = total_ll;
        m_step();
    }

    model.validate();
    return model;
}

GmmDecision classify(const GmmClassifier& classifier,
                     const std::vector<std::vector<double>>& observations) {
    if (classifier.per_class.empty()) throw InvalidParameter("empty classifier");
    if (observations.empty()) throw EmptyObservation("no observation vectors");

    GmmDecision decision;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [cls, model] : classifier.per_class) {
        double total = 0.0;
        for (const auto& x : observations) total += mixture_loglik(model, x);
        decision.scores[cls] = total;
        // strictly-greater keeps the lowest ordinal on ties (map is ordered)
        if (total > best) {
            best = total;
            decision.fault = cls;
        }
    }
    return decision;
}

}  // namespace vibromon
