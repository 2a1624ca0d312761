#include "vibromon/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "vibromon/errors.hpp"
#include "vibromon/rng.hpp"

namespace vibromon {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Log emission densities for one observation under every state, plus the
// shift that keeps the scaled recursions in a safe floating-point range.
struct ShiftedEmissions {
    std::vector<double> scaled;  // exp(log b_j - shift)
    double shift = 0.0;
};

ShiftedEmissions emissions_at(const HmmModel& model,
                              const std::vector<double>& obs) {
    const std::size_t n = model.state_count();
    std::vector<double> lb(n);
    double m = kNegInf;
    for (std::size_t j = 0; j < n; ++j) {
        lb[j] = mixture_loglik(model.emissions[j], obs);
        m = std::max(m, lb[j]);
    }
    ShiftedEmissions e;
    e.scaled.resize(n);
    if (!std::isfinite(m)) {  // every state assigns zero density
        e.shift = 0.0;
        return e;
    }
    e.shift = m;
    for (std::size_t j = 0; j < n; ++j) e.scaled[j] = std::exp(lb[j] - m);
    return e;
}

void check_obs(const HmmModel& model, const ObservationSequence& obs) {
    if (obs.empty()) throw EmptySequence("empty observation sequence");
    const std::size_t dim = model.emissions.front().dim();
    for (const auto& o : obs) {
        if (o.size() != dim)
            throw DimensionMismatch("observation dimension differs from model");
    }
}

}  // namespace

void HmmModel::validate() const {
    const std::size_t n = pi.size();
    if (n == 0 || transitions.size() != n || emissions.size() != n)
        throw InvalidParameter("inconsistent model shape");
    double psum = 0.0;
    for (double p : pi) {
        if (p < 0.0) throw InvalidParameter("negative initial probability");
        psum += p;
    }
    if (std::abs(psum - 1.0) > 1e-9)
        throw InvalidParameter("initial distribution must sum to 1");
    for (const auto& row : transitions) {
        if (row.size() != n) throw InvalidParameter("transition matrix not square");
        double rsum = 0.0;
        for (double a : row) {
            if (a < 0.0) throw InvalidParameter("negative transition probability");
            rsum += a;
        }
        if (std::abs(rsum - 1.0) > 1e-9)
            throw InvalidParameter("transition rows must sum to 1");
    }
    for (const auto& e : emissions) e.validate();
}

double forward_loglik(const HmmModel& model, const ObservationSequence& obs) {
    check_obs(model, obs);
    const std::size_t n = model.state_count();
    const std::size_t t_len = obs.size();

    std::vector<double> alpha(n), next(n);
    double log_prob = 0.0;

    ShiftedEmissions e = emissions_at(model, obs[0]);
    double scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        alpha[j] = model.pi[j] * e.scaled[j];
        scale += alpha[j];
    }
    if (scale <= 0.0) return kNegInf;
    for (double& a : alpha) a /= scale;
    log_prob += std::log(scale) + e.shift;

    for (std::size_t t = 1; t < t_len; ++t) {
        e = emissions_at(model, obs[t]);
        scale = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                acc += alpha[i] * model.transitions[i][j];
            next[j] = acc * e.scaled[j];
            scale += next[j];
        }
        if (scale <= 0.0) return kNegInf;
        for (std::size_t j = 0; j < n; ++j) alpha[j] = next[j] / scale;
        log_prob += std::log(scale) + e.shift;
    }
    return log_prob;
}

ViterbiResult viterbi(const HmmModel& model, const ObservationSequence& obs) {
    check_obs(model, obs);
    const std::size_t n = model.state_count();
    const std::size_t t_len = obs.size();

    auto safe_log = [](double v) { return v > 0.0 ? std::log(v) : kNegInf; };

    // log emissions
    std::vector<std::vector<double>> lb(t_len, std::vector<double>(n));
    for (std::size_t t = 0; t < t_len; ++t) {
        for (std::size_t j = 0; j < n; ++j)
            lb[t][j] = mixture_loglik(model.emissions[j], obs[t]);
    }
    std::vector<std::vector<double>> log_a(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) log_a[i][j] = safe_log(model.transitions[i][j]);

    // best achievable continuation value from (t, j), emissions at t excluded
    std::vector<std::vector<double>> suffix(t_len, std::vector<double>(n, 0.0));
    for (std::size_t t = t_len - 1; t-- > 0;) {
        for (std::size_t j = 0; j < n; ++j) {
            double best = kNegInf;
            for (std::size_t k = 0; k < n; ++k)
                best = std::max(best, log_a[j][k] + lb[t + 1][k] + suffix[t + 1][k]);
            suffix[t][j] = best;
        }
    }

    double best_total = kNegInf;
    for (std::size_t j = 0; j < n; ++j)
        best_total = std::max(best_total, safe_log(model.pi[j]) + lb[0][j] + suffix[0][j]);

    // Greedy front-to-back reconstruction: at each step take the lowest
    // state index whose continuation still achieves the optimum. This makes
    // ties resolve toward the lower-indexed state at the first difference.
    const double tie_eps = 1e-9 * std::max(1.0, std::abs(best_total));
    ViterbiResult result;
    result.path.resize(t_len);
    double prefix = 0.0;
    for (std::size_t t = 0; t < t_len; ++t) {
        std::size_t chosen = n;
        for (std::size_t j = 0; j < n; ++j) {
            const double step = t == 0 ? safe_log(model.pi[j]) + lb[0][j]
                                       : log_a[result.path[t - 1]][j] + lb[t][j];
            if (prefix + step + suffix[t][j] >= best_total - tie_eps) {
                chosen = j;
                prefix += step;
                break;
            }
        }
        if (chosen == n) {
            // numerically impossible continuation; fall back to the argmax
            double best = kNegInf;
            for (std::size_t j = 0; j < n; ++j) {
                const double step = t == 0 ? safe_log(model.pi[j]) + lb[0][j]
                                           : log_a[result.path[t - 1]][j] + lb[t][j];
                if (step + suffix[t][j] > best) {
                    best = step + suffix[t][j];
                    chosen = j;
                }
            }
            prefix += t == 0 ? safe_log(model.pi[chosen]) + lb[0][chosen]
                             : log_a[result.path[t - 1]][chosen] + lb[t][chosen];
        }
        result.path[t] = chosen;
    }
    result.log_prob = prefix;
    return result;
}

HmmModel train_baum_welch(const std::vector<ObservationSequence>& sequences,
                          const HmmTrainOptions& options) {
    if (sequences.empty()) throw TooFewObservations("no training sequences");
    const std::size_t n = options.n_states;
    const std::size_t m = options.n_mixtures;
    if (n == 0 || m == 0) throw InvalidParameter("need at least one state and mixture");

    std::vector<std::vector<double>> pooled;
    for (const auto& seq : sequences) {
        if (seq.empty()) throw EmptySequence("empty training sequence");
        for (const auto& o : seq) pooled.push_back(o);
    }
    const std::size_t dim = pooled.front().size();
    for (const auto& o : pooled) {
        if (o.size() != dim) throw DimensionMismatch("ragged observations");
    }
    if (pooled.size() < n * m)
        throw TooFewObservations("fewer frames than states x mixtures");

    Rng rng(options.seed);

    // state priors and transition rows: uniform plus seeded jitter
    HmmModel model;
    model.pi.assign(n, 0.0);
    model.transitions.assign(n, std::vector<double>(n, 0.0));
    {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            model.pi[j] = 1.0 + 0.01 * rng.uniform();
            sum += model.pi[j];
        }
        for (double& p : model.pi) p /= sum;
        for (std::size_t i = 0; i < n; ++i) {
            double rsum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                model.transitions[i][j] = 1.0 + 0.01 * rng.uniform();
                rsum += model.transitions[i][j];
            }
            for (double& a : model.transitions[i]) a /= rsum;
        }
    }

    // emission mixtures: k-means over the pooled frames, centers dealt
    // round-robin to states, variances from the global spread
    {
        const auto centers = kmeans_centers(pooled, n * m, rng.next_u64(),
                                            10);
        std::vector<double> gvar(dim, 0.0), gmean(dim, 0.0);
        for (const auto& o : pooled)
            for (std::size_t d = 0; d < dim; ++d) gmean[d] += o[d];
        for (double& v : gmean) v /= static_cast<double>(pooled.size());
        for (const auto& o : pooled) {
            for (std::size_t d = 0; d < dim; ++d) {
                const double dd = o[d] - gmean[d];
                gvar[d] += dd * dd;
            }
        }
        for (double& v : gvar)
            v = std::max(v / static_cast<double>(pooled.size()), kVarianceFloor);

        model.emissions.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            auto& em = model.emissions[j];
            em.weights.assign(m, 1.0 / static_cast<double>(m));
            for (std::size_t c = 0; c < m; ++c) {
                em.means.push_back(centers[c * n + j]);
                em.variances.push_back(gvar);
            }
        }
    }

    const std::size_t n_seq = sequences.size();
    model.converged = false;
    double prev_ll = kNegInf;

    for (int iter = 0; iter < options.max_iters; ++iter) {
        // accumulators
        std::vector<double> pi_acc(n, 0.0);
        std::vector<std::vector<double>> a_num(n, std::vector<double>(n, 0.0));
        std::vector<double> a_den(n, 0.0);
        std::vector<std::vector<double>> w_acc(n, std::vector<double>(m, 0.0));
        std::vector<std::vector<std::vector<double>>> mu_acc(
            n, std::vector<std::vector<double>>(m, std::vector<double>(dim, 0.0)));
        std::vector<std::vector<std::vector<double>>> var_acc(
            n, std::vector<std::vector<double>>(m, std::vector<double>(dim, 0.0)));
        double total_ll = 0.0;

        for (std::size_t r = 0; r < n_seq; ++r) {
            const auto& obs = sequences[r];
            const std::size_t t_len = obs.size();

            std::vector<ShiftedEmissions> em(t_len);
            for (std::size_t t = 0; t < t_len; ++t) em[t] = emissions_at(model, obs[t]);

            // scaled forward
            std::vector<std::vector<double>> alpha(t_len, std::vector<double>(n));
            std::vector<double> scale(t_len, 0.0);
            for (std::size_t j = 0; j < n; ++j) {
                alpha[0][j] = model.pi[j] * em[0].scaled[j];
                scale[0] += alpha[0][j];
            }
            for (double& a : alpha[0]) a /= scale[0];
            for (std::size_t t = 1; t < t_len; ++t) {
                for (std::size_t j = 0; j < n; ++j) {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < n; ++i)
                        acc += alpha[t - 1][i] * model.transitions[i][j];
                    alpha[t][j] = acc * em[t].scaled[j];
                    scale[t] += alpha[t][j];
                }
                for (double& a : alpha[t]) a /= scale[t];
            }
            for (std::size_t t = 0; t < t_len; ++t)
                total_ll += std::log(scale[t]) + em[t].shift;

            // scaled backward, same scale factors
            std::vector<std::vector<double>> beta(t_len, std::vector<double>(n, 1.0));
            for (std::size_t t = t_len - 1; t-- > 0;) {
                for (std::size_t i = 0; i < n; ++i) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < n; ++j)
                        acc += model.transitions[i][j] * em[t + 1].scaled[j] *
                               beta[t + 1][j];
                    beta[t][i] = acc / scale[t + 1];
                }
            }

            // state and component posteriors
            for (std::size_t t = 0; t < t_len; ++t) {
                for (std::size_t j = 0; j < n; ++j) {
                    const double gamma = alpha[t][j] * beta[t][j];
                    if (gamma <= 0.0) continue;
                    if (t == 0) pi_acc[j] += gamma;
                    if (t + 1 < t_len) a_den[j] += gamma;

                    // split gamma over mixture components
                    const auto& emj = model.emissions[j];
                    std::vector<double> clp(m);
                    double cmax = kNegInf;
                    for (std::size_t c = 0; c < m; ++c) {
                        clp[c] = std::log(emj.weights[c]) +
                                 gaussian_logpdf(obs[t], emj.means[c], emj.variances[c]);
                        cmax = std::max(cmax, clp[c]);
                    }
                    double csum = 0.0;
                    for (std::size_t c = 0; c < m; ++c) csum += std::exp(clp[c] - cmax);
                    for (std::size_t c = 0; c < m; ++c) {
                        const double gc = gamma * std::exp(clp[c] - cmax) / csum;
                        w_acc[j][c] += gc;
                        for (std::size_t d = 0; d < dim; ++d) {
                            mu_acc[j][c][d] += gc * obs[t][d];
                            var_acc[j][c][d] += gc * obs[t][d] * obs[t][d];
                        }
                    }
                }
                if (t + 1 < t_len) {
                    for (std::size_t i = 0; i < n; ++i) {
                        for (std::size_t j = 0; j < n; ++j) {
                            const double xi = alpha[t][i] * model.transitions[i][j] *
                                              em[t + 1].scaled[j] * beta[t + 1][j] /
                                              scale[t + 1];
                            a_num[i][j] += xi;
                        }
                    }
                }
            }
        }

        if (iter > 0 && total_ll - prev_ll < options.tol) {
            model.converged = true;
            prev_ll = total_ll;
            break;
        }
        prev_ll = total_ll;

        // M-step
        {
            double psum = 0.0;
            for (double p : pi_acc) psum += p;
            if (psum > 0.0)
                for (std::size_t j = 0; j < n; ++j) model.pi[j] = pi_acc[j] / psum;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (a_den[i] <= 0.0) continue;  // unoccupied state keeps its row
            double rsum = 0.0;
            for (std::size_t j = 0; j < n; ++j) rsum += a_num[i][j];
            if (rsum <= 0.0) continue;
            for (std::size_t j = 0; j < n; ++j)
                model.transitions[i][j] = a_num[i][j] / rsum;
        }
        for (std::size_t j = 0; j < n; ++j) {
            double wsum = 0.0;
            for (std::size_t c = 0; c < m; ++c) wsum += w_acc[j][c];
            if (wsum <= 0.0) continue;
            auto& emj = model.emissions[j];
            for (std::size_t c = 0; c < m; ++c) {
                const double gc = w_acc[j][c];
                if (gc <= 1e-12) {
                    emj.weights[c] = 1e-12;
                    continue;
                }
                emj.weights[c] = gc / wsum;
                for (std::size_t d = 0; d < dim; ++d) {
                    const double mu = mu_acc[j][c][d] / gc;
                    emj.means[c][d] = mu;
                    emj.variances[c][d] =
                        std::max(var_acc[j][c][d] / gc - mu * mu, kVarianceFloor);
                }
            }
            double renorm = 0.0;
            for (double w : emj.weights) renorm += w;
            for (double& w : emj.weights) w /= renorm;
        }
    }

    model.validate();
    return model;
}

HmmDecision classify(const HmmBank& bank, const ObservationSequence& obs) {
    if (bank.per_class.empty()) throw InvalidParameter("empty model bank");
    HmmDecision decision;
    double best = kNegInf;
    for (const auto& [cls, model] : bank.per_class) {
        const double ll = forward_loglik(model, obs);
        decision.scores[cls] = ll;
        if (ll > best) {
            best = ll;
            decision.fault = cls;
        }
    }
    return decision;
}

}  // namespace vibromon
