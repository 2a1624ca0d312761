#pragma once

#include <cstdint>

#include "vibromon/signal.hpp"

namespace vibromon {

// Synthetic bearing vibration generator. Every class is Gaussian noise plus a
// shaft-frequency sinusoid; fault classes add periodic impulse trains of
// exponentially decaying resonant rings. Repetition rates follow approximate
// bearing defect-frequency ratios, and each fault rings at its own resonance
// so the classes are statistically separable. Pure function of its arguments.
struct SynthParams {
    double noise_sigma = 0.1;
    double sine_amp_sigmas = 1.0;       // shaft sinusoid amplitude, in noise sigmas
    double impulse_amp_sigmas = 12.0;   // ring peak amplitude, in noise sigmas
    double decay_s = 1e-3;              // ring decay time constant
    // impulse repetition rate as a multiple of shaft frequency
    double rate_inner = 3.58;
    double rate_outer = 5.42;
    double rate_ball = 4.71;
    // ring resonance frequencies
    double res_inner_hz = 3300.0;
    double res_outer_hz = 1500.0;
    double res_ball_hz = 5500.0;
};

VibrationSignal generate_synthetic(FaultClass cls, double duration_s,
                                   double sample_rate_hz, double rpm,
                                   std::uint64_t seed,
                                   const SynthParams& params = {});

}  // namespace vibromon
