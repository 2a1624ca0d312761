#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "vibromon/fault_class.hpp"

namespace vibromon {

// A vibration recording with acquisition metadata. Immutable by convention
// after construction; validate() enforces the structural invariants.
struct VibrationSignal {
    std::vector<double> samples;
    double sample_rate_hz = 0.0;
    double shaft_speed_rpm = 0.0;
    std::optional<FaultClass> label;
    std::string source_id;

    void validate() const;  // throws EmptySignal / InvalidParameter / MalformedRecord
};

// A contiguous slice of a recording, nominally a fixed number of shaft
// revolutions long. The parent's sample rate rides along so downstream
// spectral features know their frequency axis.
struct Segment {
    std::vector<double> samples;
    std::string parent_source_id;
    std::size_t index = 0;
    std::optional<FaultClass> label;
    double sample_rate_hz = 0.0;
};

struct Frame {
    std::vector<double> samples;
    std::size_t frame_index = 0;
};

// Number of samples covering `revolutions` shaft turns, rounded to nearest.
std::size_t segment_length(double shaft_speed_rpm, double sample_rate_hz,
                           double revolutions);

// Cuts the signal into consecutive non-overlapping segments of
// segment_length(...) samples; the trailing remainder is discarded.
// Throws SignalTooShort when not even one segment fits.
std::vector<Segment> segment(const VibrationSignal& signal,
                             double revolutions = 5.0);

// Splits a segment into exactly n_frames contiguous frames whose lengths
// differ by at most one sample; the remainder is spread over the leading
// frames so the frames cover the segment completely.
// Throws TooFewSamples when the segment has fewer samples than n_frames.
std::vector<Frame> frame(const Segment& seg, std::size_t n_frames = 14);

}  // namespace vibromon
