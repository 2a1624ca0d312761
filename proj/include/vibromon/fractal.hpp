#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vibromon {

// Box sides used for the regression that estimates the box-counting
// dimension. Strictly increasing, at least two entries.
struct ResolutionGrid {
    int eps_min = 1;
    std::vector<int> resolutions;

    // {eps_min, 2*eps_min, ..., count*eps_min}
    static ResolutionGrid uniform(int eps_min, int count);
    void validate() const;
};

// Number of eps x eps grid cells intersected by the graph of the signal.
//
// The amplitude axis is affinely mapped onto [0, n-1] so one amplitude unit
// equals one sample step and the count is invariant under affine amplitude
// transforms. Time is partitioned into columns of eps samples; a column's
// cell count is ceil((max - min + 1)/eps) over the column's normalized
// samples including the boundary sample shared with the next column, which
// covers the line connecting adjacent columns. A constant signal is valid:
// every column contributes one cell.
std::size_t box_count(std::span<const double> samples, int eps);

// Least-squares slope of ln N(eps_j) against ln(1/eps_j) over the grid.
double box_counting_dimension(std::span<const double> samples,
                              const ResolutionGrid& grid);

// Multi-scale fractal dimension: entry k (1-based) is the regression slope
// over box sides {eps_min, 2*eps_min, ..., k*eps_min}. The k = 1 entry uses
// the two-point slope between eps_min and 2*eps_min since a single
// resolution admits no regression.
std::vector<double> mfd(std::span<const double> samples, int k_max,
                        int eps_min = 1);

// Population fourth central moment over squared population variance.
// Gaussian data gives 3; impulsive signals give more.
double kurtosis(std::span<const double> samples);

}  // namespace vibromon
