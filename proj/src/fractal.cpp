#include "vibromon/fractal.hpp"

#include <algorithm>
#include <cmath>

#include "vibromon/errors.hpp"

namespace vibromon {

ResolutionGrid ResolutionGrid::uniform(int eps_min, int count) {
    ResolutionGrid g;
    g.eps_min = eps_min;
    g.resolutions.reserve(static_cast<std::size_t>(count));
    for (int j = 1; j <= count; ++j) g.resolutions.push_back(j * eps_min);
    g.validate();
    return g;
}

void ResolutionGrid::validate() const {
    if (eps_min < 1) throw InvalidParameter("eps_min must be >= 1");
    if (resolutions.size() < 2)
        throw InvalidParameter("a slope needs at least two resolutions");
    if (resolutions.front() != eps_min)
        throw InvalidParameter("first resolution must equal eps_min");
    for (std::size_t i = 1; i < resolutions.size(); ++i) {
        if (resolutions[i] <= resolutions[i - 1])
            throw InvalidParameter("resolutions must be strictly increasing");
    }
}

std::size_t box_count(std::span<const double> samples, int eps) {
    if (samples.empty()) throw EmptyInput("box_count on empty signal");
    if (eps < 1) throw InvalidParameter("eps must be >= 1");

    const std::size_t n = samples.size();
    const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    const double lo = *lo_it, hi = *hi_it;
    // scale mapping amplitudes onto [0, n-1]; constant signals map to 0
    const double scale = hi > lo ? static_cast<double>(n - 1) / (hi - lo) : 0.0;

    const auto step = static_cast<std::size_t>(eps);
    std::size_t total = 0;
    for (std::size_t col = 0; col * step < n; ++col) {
        const std::size_t begin = col * step;
        const std::size_t end = std::min(begin + step + 1, n);  // +1: boundary sample
        double cmin = samples[begin], cmax = samples[begin];
        for (std::size_t i = begin + 1; i < end; ++i) {
            cmin = std::min(cmin, samples[i]);
            cmax = std::max(cmax, samples[i]);
        }
        const double span = (cmax - cmin) * scale;
        total += static_cast<std::size_t>(std::ceil((span + 1.0) / eps));
    }
    return total;
}

namespace {

double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto j = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxy += x[i] * y[i];
        sxx += x[i] * x[i];
    }
    const double den = j * sxx - sx * sx;
    if (std::abs(den) < 1e-30)
        throw DegenerateRegression("all regression abscissae equal");
    return (j * sxy - sx * sy) / den;
}

}  // namespace

double box_counting_dimension(std::span<const double> samples,
                              const ResolutionGrid& grid) {
    grid.validate();
    const int largest = grid.resolutions.back();
    if (samples.size() < static_cast<std::size_t>(largest) * 2)
        throw TooFewSamples("signal too short for the largest resolution");

    std::vector<double> x, y;
    x.reserve(grid.resolutions.size());
    y.reserve(grid.resolutions.size());
    for (int eps : grid.resolutions) {
        x.push_back(std::log(1.0 / static_cast<double>(eps)));
        y.push_back(std::log(static_cast<double>(box_count(samples, eps))));
    }
    return regression_slope(x, y);
}

std::vector<double> mfd(std::span<const double> samples, int k_max, int eps_min) {
    if (k_max < 1) throw InvalidK("mfd size must be >= 1");
    if (eps_min < 1) throw InvalidParameter("eps_min must be >= 1");
    if (samples.size() < static_cast<std::size_t>(k_max) * static_cast<std::size_t>(eps_min) * 2)
        throw TooFewSamples("signal too short for the coarsest mfd resolution");

    // counts at eps_min, 2*eps_min, ..., max(2, k_max)*eps_min
    const int levels = std::max(k_max, 2);
    std::vector<double> ln_inv_eps(static_cast<std::size_t>(levels));
    std::vector<double> ln_counts(static_cast<std::size_t>(levels));
    for (int j = 1; j <= levels; ++j) {
        const int eps = j * eps_min;
        ln_inv_eps[static_cast<std::size_t>(j - 1)] = std::log(1.0 / eps);
        ln_counts[static_cast<std::size_t>(j - 1)] =
            std::log(static_cast<double>(box_count(samples, eps)));
    }

    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(k_max));
    for (int k = 1; k <= k_max; ++k) {
        if (k == 1) {
            const double slope = (ln_counts[0] - ln_counts[1]) / (ln_inv_eps[0] - ln_inv_eps[1]);
            out.push_back(slope);
        } else {
            const std::vector<double> x(ln_inv_eps.begin(), ln_inv_eps.begin() + k);
            const std::vector<double> y(ln_counts.begin(), ln_counts.begin() + k);
            out.push_back(regression_slope(x, y));
        }
    }
    return out;
}

double kurtosis(std::span<const double> samples) {
    if (samples.size() < 2) throw TooFewSamples("kurtosis needs at least two samples");
    const auto n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= n;

    double m2 = 0.0, m4 = 0.0;
    for (double v : samples) {
        const double d = v - mean;
        const double d2 = d * d;
        m2 += d2;
        m4 += d2 * d2;
    }
    m2 /= n;
    m4 /= n;
    if (m2 <= 0.0) throw ZeroVariance("kurtosis of a constant signal");
    return m4 / (m2 * m2);
}

}  // namespace vibromon
