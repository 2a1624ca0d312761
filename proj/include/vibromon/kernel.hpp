#pragma once

#include <span>
#include <vector>

namespace vibromon {

struct KernelSpec {
    enum class Type { Linear, Polynomial, Gaussian };
    Type type = Type::Linear;
    int degree = 3;             // Polynomial
    double bandwidth_sq = 1.0;  // Gaussian

    static KernelSpec linear() { return {Type::Linear, 0, 0.0}; }
    static KernelSpec polynomial(int degree);
    static KernelSpec gaussian(double bandwidth_sq);
    void validate() const;
};

// Linear: x.y; Polynomial: (x.y + 1)^d; Gaussian: exp(-|x-y|^2 / bandwidth).
double kernel_eval(const KernelSpec& spec, std::span<const double> x,
                   std::span<const double> y);

// Full Gram matrix, row-major n x n.
std::vector<std::vector<double>> gram_matrix(
    const KernelSpec& spec, const std::vector<std::vector<double>>& points);

}  // namespace vibromon
