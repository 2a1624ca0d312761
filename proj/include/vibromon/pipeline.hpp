#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vibromon/enn.hpp"
#include "vibromon/features.hpp"
#include "vibromon/gmm.hpp"
#include "vibromon/hmm.hpp"
#include "vibromon/svm.hpp"

namespace vibromon {

enum class ClassifierKind { Svm = 0, Hmm = 1, Gmm = 2, Enn = 3 };

std::string to_string(ClassifierKind kind);
std::optional<ClassifierKind> classifier_kind_from_string(const std::string& s);

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

// Stratified, seeded, disjoint split of item indices by class. Every class
// must land in both halves; a class with a single item cannot.
SplitIndices stratified_split(const std::vector<FaultClass>& labels,
                              double train_fraction, std::uint64_t seed);

FeatureTable subset(const FeatureTable& table, const std::vector<std::size_t>& idx);

// Rows are true classes, columns predictions, in fixed ordinal order.
struct ConfusionMatrix {
    std::array<std::array<std::uint64_t, kNumFaultClasses>, kNumFaultClasses> counts{};

    void add(FaultClass truth, FaultClass predicted);
    std::uint64_t row_total(std::size_t row) const;
    std::array<std::array<double, kNumFaultClasses>, kNumFaultClasses> percentages() const;
    double macro_recall_percent() const;  // mean of per-class recall
    std::string to_csv() const;
    std::string to_text() const;
};

struct TrainConfig {
    std::vector<ClassifierKind> classifiers = {ClassifierKind::Svm, ClassifierKind::Hmm,
                                               ClassifierKind::Gmm, ClassifierKind::Enn};
    std::uint64_t seed = 0;
    // margin classifier
    KernelSpec kernel = KernelSpec{KernelSpec::Type::Polynomial, 5, 1.0};
    double svm_c = 10.0;
    double svm_tol = 1e-3;
    // mixture classifier
    std::size_t gmm_components = 3;
    // Markov-chain classifier
    std::size_t hmm_states = 2;
    std::size_t hmm_mixtures = 10;
    // interval classifier
    double enn_eta = 0.219;
    int enn_epochs = 100;
};

// Everything needed to classify new segments: the feature recipe, the
// training-split normalization and the trained classifiers.
struct ModelBundle {
    static constexpr int kVersion = 1;
    FeatureSetSpec spec;
    Standardizer standardizer;
    std::optional<MulticlassSvmModel> svm;
    std::optional<GmmClassifier> gmm;
    std::optional<HmmBank> hmm;
    std::optional<EnnModel> enn;
    std::string created_from;
};

// Fits the standardizer on the given (training) table, then trains every
// requested classifier on the standardized features.
ModelBundle train_all(const FeatureTable& train_table, const TrainConfig& config);

// Per-segment prediction of every classifier in the bundle.
struct BundlePrediction {
    std::map<ClassifierKind, FaultClass> predicted;
    std::map<ClassifierKind, std::map<FaultClass, double>> scores;
};

BundlePrediction predict_segment(const ModelBundle& bundle,
                                 const SegmentFeatures& raw_item);

// Confusion matrix per classifier over a test table whose feature spec must
// match the bundle's.
std::map<ClassifierKind, ConfusionMatrix> evaluate(const ModelBundle& bundle,
                                                   const FeatureTable& test_table);

struct SweepResult {
    std::string parameter_name;
    std::vector<int> values;
    std::map<ClassifierKind, std::vector<double>> accuracy;  // percent per value

    std::string to_csv() const;  // "param_value,svm,hmm,gmm,enn"
};

enum class SweepParameter { MfdSize, MfccCount };

// Trains and evaluates the full classifier set for every parameter value,
// reusing one split seed so only the swept parameter varies.
SweepResult sweep(SweepParameter parameter, int from, int to,
                  const std::vector<Segment>& segments, const FeatureSetSpec& base,
                  const TrainConfig& config, double train_fraction);

}  // namespace vibromon
