#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>

namespace vibromon {

// Bearing conditions. The ordinal values are fixed: they define the
// row/column order of every confusion matrix and all tie-breaking rules.
enum class FaultClass : int {
    Normal = 0,
    InnerRace = 1,
    OuterRace = 2,
    Ball = 3,
};

inline constexpr std::size_t kNumFaultClasses = 4;

inline constexpr std::array<FaultClass, kNumFaultClasses> all_fault_classes() {
    return {FaultClass::Normal, FaultClass::InnerRace, FaultClass::OuterRace,
            FaultClass::Ball};
}

inline constexpr int ordinal(FaultClass c) { return static_cast<int>(c); }

// Manifest spelling: normal | inner | outer | ball.
inline std::string to_label(FaultClass c) {
    switch (c) {
        case FaultClass::Normal: return "normal";
        case FaultClass::InnerRace: return "inner";
        case FaultClass::OuterRace: return "outer";
        case FaultClass::Ball: return "ball";
    }
    return "normal";
}

inline std::optional<FaultClass> fault_class_from_label(const std::string& s) {
    if (s == "normal") return FaultClass::Normal;
    if (s == "inner") return FaultClass::InnerRace;
    if (s == "outer") return FaultClass::OuterRace;
    if (s == "ball") return FaultClass::Ball;
    return std::nullopt;
}

// Display names used in confusion-matrix headers.
inline std::string display_name(FaultClass c) {
    switch (c) {
        case FaultClass::Normal: return "Normal";
        case FaultClass::InnerRace: return "Inner";
        case FaultClass::OuterRace: return "Outer";
        case FaultClass::Ball: return "Ball";
    }
    return "Normal";
}

}  // namespace vibromon
