#include "vibromon/kernel.hpp"

#include <cmath>

#include "vibromon/errors.hpp"

namespace vibromon {

KernelSpec KernelSpec::polynomial(int degree) {
    KernelSpec s{Type::Polynomial, degree, 0.0};
    s.validate();
    return s;
}

KernelSpec KernelSpec::gaussian(double bandwidth_sq) {
    KernelSpec s{Type::Gaussian, 0, bandwidth_sq};
    s.validate();
    return s;
}

void KernelSpec::validate() const {
    if (type == Type::Polynomial && degree < 1)
        throw InvalidParameter("polynomial degree must be >= 1");
    if (type == Type::Gaussian && !(bandwidth_sq > 0.0))
        throw InvalidParameter("gaussian bandwidth must be positive");
}

double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y) {
    if (x.size() != y.size())
        throw DimensionMismatch("kernel arguments differ in dimension");
    switch (spec.type) {
        case KernelSpec::Type::Linear: {
            double dot = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
            return dot;
        }
        case KernelSpec::Type::Polynomial: {
            double dot = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) dot += x[i] * y[i];
            return std::pow(dot + 1.0, spec.degree);
        }
        case KernelSpec::Type::Gaussian: {
            double d2 = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double d = x[i] - y[i];
                d2 += d * d;
            }
            return std::exp(-d2 / spec.bandwidth_sq);
        }
    }
    return 0.0;
}

std::vector<std::vector<double>> gram_matrix(
    const KernelSpec& spec, const std::vector<std::vector<double>>& points) {
    const std::size_t n = points.size();
    std::vector<std::vector<double>> g(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const double v = kernel_eval(spec, points[i], points[j]);
            g[i][j] = v;
            g[j][i] = v;
        }
    }
    return g;
}

}  // namespace vibromon
