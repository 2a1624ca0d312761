#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vibromon/signal.hpp"

namespace vibromon {

// Raised-cosine window scaled so its root mean square is exactly one.
std::vector<double> hamming_window(std::size_t n);

// Windows the frame, zero-pads to fft_size, applies the DFT with a
// 1/fft_size normalization and returns squared magnitudes of the
// non-negative-frequency bins 0..fft_size/2.
std::vector<double> power_spectrum(std::span<const double> frame,
                                   std::size_t fft_size);

// mel = 2595 * log10(1 + f/700)
double hz_to_mel(double f_hz);
double mel_to_hz(double mel);

// Triangular filters spaced uniformly on the mel scale over [0, rate/2],
// peak weight 1, boundaries snapped to DFT bins.
struct MelFilterbank {
    std::size_t n_filters = 0;
    double sample_rate_hz = 0.0;
    std::size_t fft_size = 0;
    std::vector<std::vector<double>> weights;  // n_filters x (fft_size/2 + 1)
    std::vector<double> center_freqs_hz;
};

MelFilterbank build_filterbank(std::size_t n_filters, double sample_rate_hz,
                               std::size_t fft_size);

// Cepstral coefficients C_0..C_{L-1}: DCT of the log10 filterbank energies.
// Energies are floored at 1e-12 so silent frames stay finite.
std::vector<double> mfcc(std::span<const double> frame, const MelFilterbank& bank,
                         std::size_t n_coeffs);

struct MfccConfig {
    std::size_t n_frames = 14;
    std::size_t fft_size = 256;
    std::size_t n_filters = 26;
    std::size_t n_coeffs = 13;
};

// frames_per_segment x n_coeffs, row per frame
struct MfccMatrix {
    std::size_t n_frames = 0;
    std::size_t n_coeffs = 0;
    std::vector<std::vector<double>> coeffs;
};

MfccMatrix mfcc_segment(const Segment& seg, const MelFilterbank& bank,
                        const MfccConfig& config);

}  // namespace vibromon
