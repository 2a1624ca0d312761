#pragma once

#include <string>
#include <vector>

#include "vibromon/signal.hpp"

namespace vibromon {

// One recording listed in a dataset manifest.
struct ManifestEntry {
    std::string path;
    FaultClass label = FaultClass::Normal;
    double shaft_speed_rpm = 0.0;
    double sample_rate_hz = 0.0;
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;

    void validate() const;  // distinct paths, complete entries
};

// Manifest file format: '#' comment lines; one "key = value" pair per line
// with keys path, label, rpm, sample_rate_hz; a new entry begins at each
// "path" line. Labels are spelled normal|inner|outer|ball.
DatasetManifest load_manifest(const std::string& path);
void save_manifest(const DatasetManifest& manifest, const std::string& path);

// Loads a recording named by a manifest entry. The file format is chosen by
// content: files starting with the "VSIG" magic are binary, anything else is
// parsed as CSV (one sample per line, optional '#' header lines).
VibrationSignal load_signal(const std::string& path, const ManifestEntry& meta);

// CSV with 9 significant digits per sample.
void save_signal_csv(const VibrationSignal& signal, const std::string& path);

// Binary layout: "VSIG", version byte 0x01, u32 little-endian sample count,
// float32 little-endian samples.
void save_signal_binary(const VibrationSignal& signal, const std::string& path);

}  // namespace vibromon
