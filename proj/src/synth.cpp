#include "vibromon/synth.hpp"

#include <algorithm>
#include <cmath>

#include "vibromon/errors.hpp"
#include "vibromon/rng.hpp"

namespace vibromon {

VibrationSignal generate_synthetic(FaultClass cls, double duration_s,
                                   double sample_rate_hz, double rpm,
                                   std::uint64_t seed, const SynthParams& p) {
    if (!(duration_s > 0.0)) throw InvalidParameter("duration_s must be positive");
    if (!(sample_rate_hz > 0.0)) throw InvalidParameter("sample_rate_hz must be positive");
    if (!(rpm > 0.0)) throw InvalidParameter("rpm must be positive");

    const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
    if (n == 0) throw InvalidParameter("duration too short for one sample");

    const double shaft_hz = rpm / 60.0;
    const double two_pi = 2.0 * 3.14159265358979323846;

    Rng rng(seed);
    VibrationSignal s;
    s.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / sample_rate_hz;
        s.samples[i] = p.noise_sigma * rng.gaussian() +
                       p.sine_amp_sigmas * p.noise_sigma * std::sin(two_pi * shaft_hz * t);
    }

    if (cls != FaultClass::Normal) {
        double rate_mult = 0.0, res_hz = 0.0;
        switch (cls) {
            case FaultClass::InnerRace: rate_mult = p.rate_inner; res_hz = p.res_inner_hz; break;
            case FaultClass::OuterRace: rate_mult = p.rate_outer; res_hz = p.res_outer_hz; break;
            case FaultClass::Ball: rate_mult = p.rate_ball; res_hz = p.res_ball_hz; break;
            case FaultClass::Normal: break;
        }
        const double period = sample_rate_hz / (rate_mult * shaft_hz);  // samples
        const double tau = p.decay_s * sample_rate_hz;                  // samples
        const double amp = p.impulse_amp_sigmas * p.noise_sigma;
        const auto ring_len = static_cast<std::size_t>(8.0 * tau);
        for (std::size_t k = 0;; ++k) {
            const auto start = static_cast<std::size_t>(
                std::llround(static_cast<double>(k) * period));
            if (start >= n) break;
            const std::size_t span = std::min(n - start, ring_len);
            for (std::size_t i = 0; i < span; ++i) {
                const double di = static_cast<double>(i);
                s.samples[start + i] +=
                    amp * std::exp(-di / tau) * std::cos(two_pi * res_hz * di / sample_rate_hz);
            }
        }
    }

    s.sample_rate_hz = sample_rate_hz;
    s.shaft_speed_rpm = rpm;
    s.label = cls;
    s.source_id = "synthetic/" + to_label(cls);
    return s;
}

}  // namespace vibromon
