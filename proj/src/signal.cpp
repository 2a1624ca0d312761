#include "vibromon/signal.hpp"

#include <cmath>

#include "vibromon/errors.hpp"

namespace vibromon {

void VibrationSignal::validate() const {
    if (samples.empty()) throw EmptySignal("signal has no samples: " + source_id);
    if (!(sample_rate_hz > 0.0))
        throw InvalidParameter("sample_rate_hz must be positive");
    if (!(shaft_speed_rpm > 0.0))
        throw InvalidParameter("shaft_speed_rpm must be positive");
    for (double v : samples) {
        if (!std::isfinite(v))
            throw MalformedRecord("non-finite sample in " + source_id);
    }
}

std::size_t segment_length(double shaft_speed_rpm, double sample_rate_hz,
                           double revolutions) {
    if (!(revolutions > 0.0)) throw InvalidParameter("revolutions must be positive");
    const double len = revolutions * 60.0 / shaft_speed_rpm * sample_rate_hz;
    return static_cast<std::size_t>(std::llround(len));
}

std::vector<Segment> segment(const VibrationSignal& signal, double revolutions) {
    signal.validate();
    const std::size_t seg_len =
        segment_length(signal.shaft_speed_rpm, signal.sample_rate_hz, revolutions);
    if (seg_len == 0) throw InvalidParameter("segment length rounds to zero");
    if (signal.samples.size() < seg_len)
        throw SignalTooShort("signal shorter than one segment");

    const std::size_t count = signal.samples.size() / seg_len;
    std::vector<Segment> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Segment s;
        s.samples.assign(signal.samples.begin() + static_cast<std::ptrdiff_t>(i * seg_len),
                         signal.samples.begin() + static_cast<std::ptrdiff_t>((i + 1) * seg_len));
        s.parent_source_id = signal.source_id;
        s.index = i;
        s.label = signal.label;
        s.sample_rate_hz = signal.sample_rate_hz;
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<Frame> frame(const Segment& seg, std::size_t n_frames) {
    if (n_frames == 0) throw InvalidParameter("n_frames must be positive");
    const std::size_t n = seg.samples.size();
    if (n < n_frames) throw TooFewSamples("segment shorter than frame count");

    const std::size_t base = n / n_frames;
    const std::size_t rem = n % n_frames;
    std::vector<Frame> out;
    out.reserve(n_frames);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n_frames; ++i) {
        const std::size_t len = base + (i < rem ? 1 : 0);
        Frame f;
        f.samples.assign(seg.samples.begin() + static_cast<std::ptrdiff_t>(pos),
                         seg.samples.begin() + static_cast<std::ptrdiff_t>(pos + len));
        f.frame_index = i;
        out.push_back(std::move(f));
        pos += len;
    }
    return out;
}

}  // namespace vibromon
