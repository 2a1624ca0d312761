#include "vibromon/mfcc.hpp"

#include <cmath>
#include <complex>

#include "vibromon/dft.hpp"
#include "vibromon/errors.hpp"

namespace vibromon {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kLogFloor = 1e-12;
}  // namespace

std::vector<double> hamming_window(std::size_t n) {
    if (n < 2) throw InvalidLength("window needs at least two points");
    std::vector<double> w(n);
    double sum_sq = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double v =
            0.5 - 0.5 * std::cos(2.0 * kPi * static_cast<double>(k) /
                                 static_cast<double>(n - 1));
        w[k] = v;
        sum_sq += v * v;
    }
    // beta makes the root mean square of the window exactly one
    const double beta = std::sqrt(static_cast<double>(n) / sum_sq);
    for (double& v : w) v *= beta;
    return w;
}

std::vector<double> power_spectrum(std::span<const double> frame,
                                   std::size_t fft_size) {
    if (!is_power_of_two(fft_size))
        throw InvalidParameter("fft_size must be a power of two");
    if (frame.size() > fft_size) throw FrameTooLong("frame longer than fft_size");
    if (frame.empty()) throw EmptyInput("empty frame");

    std::vector<std::complex<double>> buf(fft_size, {0.0, 0.0});
    if (frame.size() >= 2) {
        const std::vector<double> w = hamming_window(frame.size());
        for (std::size_t i = 0; i < frame.size(); ++i) buf[i] = frame[i] * w[i];
    } else {
        buf[0] = frame[0];
    }
    fft_inplace(buf);

    const double norm = 1.0 / static_cast<double>(fft_size);
    std::vector<double> power(fft_size / 2 + 1);
    for (std::size_t m = 0; m < power.size(); ++m) {
        const std::complex<double> y = buf[m] * norm;
        power[m] = std::norm(y);
    }
    return power;
}

double hz_to_mel(double f_hz) {
    if (f_hz < 0.0) throw NegativeFrequency("negative frequency");
    return 2595.0 * std::log10(1.0 + f_hz / 700.0);
}

double mel_to_hz(double mel) {
    return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

MelFilterbank build_filterbank(std::size_t n_filters, double sample_rate_hz,
                               std::size_t fft_size) {
    if (n_filters < 2) throw InvalidParameter("need at least two filters");
    if (!(sample_rate_hz > 0.0)) throw InvalidParameter("sample rate must be positive");
    if (!is_power_of_two(fft_size))
        throw InvalidParameter("fft_size must be a power of two");

    const std::size_t n_bins = fft_size / 2 + 1;
    const double mel_max = hz_to_mel(sample_rate_hz / 2.0);

    // n_filters + 2 boundary points, uniform in mel, snapped to bins
    std::vector<std::size_t> bins(n_filters + 2);
    std::vector<double> hz(n_filters + 2);
    for (std::size_t i = 0; i < bins.size(); ++i) {
        const double mel = mel_max * static_cast<double>(i) /
                           static_cast<double>(n_filters + 1);
        hz[i] = mel_to_hz(mel);
        bins[i] = static_cast<std::size_t>(
            std::llround(hz[i] * static_cast<double>(fft_size) / sample_rate_hz));
        if (bins[i] >= n_bins) bins[i] = n_bins - 1;
    }
    for (std::size_t i = 1; i < bins.size(); ++i) {
        if (bins[i] <= bins[i - 1])
            throw TooManyFilters("filter boundaries collide on the bin grid");
    }

    MelFilterbank bank;
    bank.n_filters = n_filters;
    bank.sample_rate_hz = sample_rate_hz;
    bank.fft_size = fft_size;
    bank.weights.assign(n_filters, std::vector<double>(n_bins, 0.0));
    bank.center_freqs_hz.resize(n_filters);

    for (std::size_t f = 0; f < n_filters; ++f) {
        const std::size_t a = bins[f], b = bins[f + 1], c = bins[f + 2];
        bank.center_freqs_hz[f] = hz[f + 1];
        auto& row = bank.weights[f];
        for (std::size_t j = a; j < b; ++j)
            row[j] = static_cast<double>(j - a) / static_cast<double>(b - a);
        for (std::size_t j = b; j <= c; ++j)
            row[j] = static_cast<double>(c - j) / static_cast<double>(c - b);
        row[b] = 1.0;
    }
    return bank;
}

std::vector<double> mfcc(std::span<const double> frame, const MelFilterbank& bank,
                         std::size_t n_coeffs) {
    if (n_coeffs > bank.n_filters)
        throw TooManyCoefficients("more coefficients than filters");

    const std::vector<double> power = power_spectrum(frame, bank.fft_size);

    const std::size_t nf = bank.n_filters;
    std::vector<double> log_energy(nf);
    for (std::size_t f = 0; f < nf; ++f) {
        double e = 0.0;
        const auto& row = bank.weights[f];
        for (std::size_t j = 0; j < power.size(); ++j) e += row[j] * power[j];
        log_energy[f] = std::log10(std::max(e, kLogFloor));
    }

    std::vector<double> out(n_coeffs);
    for (std::size_t m = 0; m < n_coeffs; ++m) {
        double c = 0.0;
        for (std::size_t f = 0; f < nf; ++f) {
            c += std::cos(static_cast<double>(m) * kPi *
                          (static_cast<double>(f) + 0.5) / static_cast<double>(nf)) *
                 log_energy[f];
        }
        out[m] = c;
    }
    return out;
}

MfccMatrix mfcc_segment(const Segment& seg, const MelFilterbank& bank,
                        const MfccConfig& config) {
    const std::vector<Frame> frames = frame(seg, config.n_frames);
    MfccMatrix m;
    m.n_frames = config.n_frames;
    m.n_coeffs = config.n_coeffs;
    m.coeffs.reserve(frames.size());
    for (const Frame& f : frames)
        m.coeffs.push_back(mfcc(f.samples, bank, config.n_coeffs));
    return m;
}

}  // namespace vibromon
