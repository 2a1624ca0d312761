#pragma once

#include <complex>
#include <vector>

namespace vibromon {

// In-place iterative radix-2 decimation-in-time FFT. The length must be a
// power of two (throws InvalidParameter otherwise).
void fft_inplace(std::vector<std::complex<double>>& data);

bool is_power_of_two(std::size_t n);

}  // namespace vibromon
