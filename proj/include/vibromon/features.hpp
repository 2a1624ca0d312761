#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vibromon/fault_class.hpp"
#include "vibromon/signal.hpp"

namespace vibromon {

enum class FeatureKind { Mfd, Mfcc, MfccPlusKurtosis, KurtosisOnly };

std::string to_string(FeatureKind kind);
std::optional<FeatureKind> feature_kind_from_string(const std::string& s);

struct FeatureSetSpec {
    FeatureKind kind = FeatureKind::Mfd;
    int mfd_size = 13;  // fractogram length
    int eps_min = 1;
    int n_coeffs = 13;  // cepstral coefficients per frame
    int n_filters = 26;
    int fft_size = 256;
    int n_frames = 14;

    bool operator==(const FeatureSetSpec&) const = default;
    void validate() const;
};

// Per-segment features in canonical matrix form: one row per frame for
// cepstral features, a single row holding the fractogram or the kurtosis
// scalar otherwise. The optional kurtosis augmentation is kept separate so
// each classifier view can place it where it belongs.
struct SegmentFeatures {
    FaultClass label = FaultClass::Normal;
    std::vector<std::vector<double>> rows;
    std::optional<double> kurtosis_value;
};

struct FeatureTable {
    FeatureSetSpec spec;
    std::vector<SegmentFeatures> items;
    std::vector<std::string> skipped;  // one diagnostic per failed segment
};

// Extracts features for every segment; segments that fail (for example a
// constant segment under kurtosis) are skipped and logged, never fatal.
FeatureTable extract_features(const std::vector<Segment>& segments,
                              const FeatureSetSpec& spec);

// Vector consumed by the margin and interval classifiers: the canonical
// rows flattened row-major, with the kurtosis augmentation appended once.
std::vector<double> flat_view(const SegmentFeatures& item);

// Point set consumed by the mixture classifier: cepstral features yield one
// point per frame (kurtosis broadcast as an extra dimension), everything
// else a single point.
std::vector<std::vector<double>> point_view(const SegmentFeatures& item,
                                            FeatureKind kind);

// Sequence consumed by the Markov-chain classifier: cepstral frames in
// order; a fractogram becomes a sequence of scalars, one per scale.
std::vector<std::vector<double>> sequence_view(const SegmentFeatures& item,
                                               FeatureKind kind);

// Per-column affine normalization fitted on the training split only.
struct Standardizer {
    std::vector<double> means;
    std::vector<double> stds;
    double kurt_mean = 0.0;
    double kurt_std = 1.0;
    bool has_kurt = false;

    static Standardizer fit(const FeatureTable& table);
    SegmentFeatures apply(const SegmentFeatures& item) const;
    FeatureTable apply(const FeatureTable& table) const;
};

// Feature CSV: header "label,f0,f1,...", one flattened row per segment.
std::string feature_table_csv(const FeatureTable& table);

}  // namespace vibromon
