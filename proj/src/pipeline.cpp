#include "vibromon/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "vibromon/errors.hpp"
#include "vibromon/rng.hpp"

namespace vibromon {

std::string to_string(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::Svm: return "svm";
        case ClassifierKind::Hmm: return "hmm";
        case ClassifierKind::Gmm: return "gmm";
        case ClassifierKind::Enn: return "enn";
    }
    return "svm";
}

std::optional<ClassifierKind> classifier_kind_from_string(const std::string& s) {
    if (s == "svm") return ClassifierKind::Svm;
    if (s == "hmm") return ClassifierKind::Hmm;
    if (s == "gmm") return ClassifierKind::Gmm;
    if (s == "enn") return ClassifierKind::Enn;
    return std::nullopt;
}

SplitIndices stratified_split(const std::vector<FaultClass>& labels,
                              double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw InvalidParameter("train fraction must lie in (0,1)");

    SplitIndices out;
    Rng rng(seed);
    for (FaultClass c : all_fault_classes()) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == c) idx.push_back(i);
        }
        if (idx.empty()) continue;  // class absence is the trainer's concern
        // Fisher-Yates with the shared deterministic source
        for (std::size_t i = idx.size(); i-- > 1;) {
            const std::size_t j = static_cast<std::size_t>(rng.below(i + 1));
            std::swap(idx[i], idx[j]);
        }
        const auto n_train = static_cast<std::size_t>(
            std::llround(train_fraction * static_cast<double>(idx.size())));
        if (n_train == 0 || n_train >= idx.size())
            throw ClassTooSmall("class " + to_label(c) +
                                " cannot appear in both splits");
        out.train.insert(out.train.end(), idx.begin(),
                         idx.begin() + static_cast<std::ptrdiff_t>(n_train));
        out.test.insert(out.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train),
                        idx.end());
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

FeatureTable subset(const FeatureTable& table, const std::vector<std::size_t>& idx) {
    FeatureTable out;
    out.spec = table.spec;
    out.items.reserve(idx.size());
    for (std::size_t i : idx) out.items.push_back(table.items.at(i));
    return out;
}

void ConfusionMatrix::add(FaultClass truth, FaultClass predicted) {
    counts[static_cast<std::size_t>(ordinal(truth))]
          [static_cast<std::size_t>(ordinal(predicted))] += 1;
}

std::uint64_t ConfusionMatrix::row_total(std::size_t row) const {
    std::uint64_t t = 0;
    for (std::uint64_t v : counts[row]) t += v;
    return t;
}

std::array<std::array<double, kNumFaultClasses>, kNumFaultClasses>
ConfusionMatrix::percentages() const {
    std::array<std::array<double, kNumFaultClasses>, kNumFaultClasses> p{};
    for (std::size_t r = 0; r < kNumFaultClasses; ++r) {
        const std::uint64_t total = row_total(r);
        for (std::size_t c = 0; c < kNumFaultClasses; ++c) {
            p[r][c] = total == 0 ? 0.0
                                 : 100.0 * static_cast<double>(counts[r][c]) /
                                       static_cast<double>(total);
        }
    }
    return p;
}

double ConfusionMatrix::macro_recall_percent() const {
    double acc = 0.0;
    std::size_t rows = 0;
    for (std::size_t r = 0; r < kNumFaultClasses; ++r) {
        const std::uint64_t total = row_total(r);
        if (total == 0) continue;
        acc += static_cast<double>(counts[r][r]) / static_cast<double>(total);
        ++rows;
    }
    return rows == 0 ? 0.0 : 100.0 * acc / static_cast<double>(rows);
}

std::string ConfusionMatrix::to_csv() const {
    std::string out = "true\\predicted";
    for (FaultClass c : all_fault_classes()) out += "," + display_name(c);
    out += "\n";
    const auto p = percentages();
    char buf[32];
    for (std::size_t r = 0; r < kNumFaultClasses; ++r) {
        out += display_name(static_cast<FaultClass>(r));
        for (std::size_t c = 0; c < kNumFaultClasses; ++c) {
            std::snprintf(buf, sizeof buf, "%.2f", p[r][c]);
            out += ",";
            out += buf;
        }
        out += "\n";
    }
    return out;
}

std::string ConfusionMatrix::to_text() const {
    const auto p = percentages();
    char line[160];
    std::string out;
    std::snprintf(line, sizeof line, "%-8s %8s %8s %8s %8s\n", "",
                  "Normal", "Inner", "Outer", "Ball");
    out += line;
    for (std::size_t r = 0; r < kNumFaultClasses; ++r) {
        std::snprintf(line, sizeof line, "%-8s %8.1f %8.1f %8.1f %8.1f\n",
                      display_name(static_cast<FaultClass>(r)).c_str(), p[r][0],
                      p[r][1], p[r][2], p[r][3]);
        out += line;
    }
    return out;
}

namespace {

std::vector<FaultClass> table_labels(const FeatureTable& table) {
    std::vector<FaultClass> labels;
    labels.reserve(table.items.size());
    for (const auto& item : table.items) labels.push_back(item.label);
    return labels;
}

bool wants(const TrainConfig& config, ClassifierKind kind) {
    return std::find(config.classifiers.begin(), config.classifiers.end(), kind) !=
           config.classifiers.end();
}

}  // namespace

ModelBundle train_all(const FeatureTable& train_table, const TrainConfig& config) {
    if (train_table.items.empty()) throw TooFewPoints("empty training table");
    for (FaultClass c : all_fault_classes()) {
        const auto labels = table_labels(train_table);
        if (std::find(labels.begin(), labels.end(), c) == labels.end())
            throw MissingClass("no training segments for " + to_label(c));
    }

    ModelBundle bundle;
    bundle.spec = train_table.spec;
    bundle.standardizer = Standardizer::fit(train_table);
    const FeatureTable table = bundle.standardizer.apply(train_table);
    const FeatureKind kind = table.spec.kind;

    if (wants(config, ClassifierKind::Svm)) {
        std::vector<std::vector<double>> x;
        std::vector<FaultClass> y;
        for (const auto& item : table.items) {
            x.push_back(flat_view(item));
            y.push_back(item.label);
        }
        SvmTrainOptions opt;
        opt.c = config.svm_c;
        opt.tol = config.svm_tol;
        bundle.svm = train_multiclass(x, y, config.kernel, opt);
    }
    if (wants(config, ClassifierKind::Gmm)) {
        GmmClassifier classifier;
        for (FaultClass c : all_fault_classes()) {
            std::vector<std::vector<double>> pts;
            for (const auto& item : table.items) {
                if (item.label != c) continue;
                for (auto& p : point_view(item, kind)) pts.push_back(std::move(p));
            }
            GmmTrainOptions opt;
            opt.seed = config.seed + static_cast<std::uint64_t>(ordinal(c));
            classifier.per_class.emplace(c,
                                         train_em(pts, config.gmm_components, opt));
        }
        bundle.gmm = std::move(classifier);
    }
    if (wants(config, ClassifierKind::Hmm)) {
        HmmBank bank;
        for (FaultClass c : all_fault_classes()) {
            std::vector<ObservationSequence> seqs;
            for (const auto& item : table.items) {
                if (item.label == c) seqs.push_back(sequence_view(item, kind));
            }
            HmmTrainOptions opt;
            opt.n_states = config.hmm_states;
            opt.n_mixtures = config.hmm_mixtures;
            opt.seed = config.seed + 17 + static_cast<std::uint64_t>(ordinal(c));
            bank.per_class.emplace(c, train_baum_welch(seqs, opt));
        }
        bundle.hmm = std::move(bank);
    }
    if (wants(config, ClassifierKind::Enn)) {
        std::vector<std::vector<double>> x;
        std::vector<FaultClass> y;
        for (const auto& item : table.items) {
            x.push_back(flat_view(item));
            y.push_back(item.label);
        }
        EnnTrainOptions opt;
        opt.eta = config.enn_eta;
        opt.epochs = config.enn_epochs;
        bundle.enn = train_enn(x, y, opt).model;
    }
    return bundle;
}

BundlePrediction predict_segment(const ModelBundle& bundle,
                                 const SegmentFeatures& raw_item) {
    const SegmentFeatures item = bundle.standardizer.apply(raw_item);
    const FeatureKind kind = bundle.spec.kind;
    BundlePrediction out;

    if (bundle.svm) {
        const FaultClass p = predict_multiclass(*bundle.svm, flat_view(item));
        out.predicted[ClassifierKind::Svm] = p;
    }
    if (bundle.gmm) {
        const GmmDecision d = classify(*bundle.gmm, point_view(item, kind));
        out.predicted[ClassifierKind::Gmm] = d.fault;
        out.scores[ClassifierKind::Gmm] = d.scores;
    }
    if (bundle.hmm) {
        const HmmDecision d = classify(*bundle.hmm, sequence_view(item, kind));
        out.predicted[ClassifierKind::Hmm] = d.fault;
        out.scores[ClassifierKind::Hmm] = d.scores;
    }
    if (bundle.enn) {
        const EnnDecision d = classify(*bundle.enn, flat_view(item));
        out.predicted[ClassifierKind::Enn] = d.fault;
        std::map<FaultClass, double> s;
        for (std::size_t c = 0; c < d.distances.size(); ++c)
            s[static_cast<FaultClass>(c)] = d.distances[c];
        out.scores[ClassifierKind::Enn] = s;
    }
    return out;
}

std::map<ClassifierKind, ConfusionMatrix> evaluate(const ModelBundle& bundle,
                                                   const FeatureTable& test_table) {
    if (!(test_table.spec == bundle.spec))
        throw FeatureSpecMismatch("test features built with a different spec");

    std::map<ClassifierKind, ConfusionMatrix> out;
    for (const auto& item : test_table.items) {
        const BundlePrediction p = predict_segment(bundle, item);
        for (const auto& [kind, predicted] : p.predicted)
            out[kind].add(item.label, predicted);
    }
    return out;
}

std::string SweepResult::to_csv() const {
    std::string out = "param_value,svm,hmm,gmm,enn\n";
    char buf[32];
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += std::to_string(values[i]);
        for (ClassifierKind kind : {ClassifierKind::Svm, ClassifierKind::Hmm,
                                    ClassifierKind::Gmm, ClassifierKind::Enn}) {
            out += ",";
            const auto it = accuracy.find(kind);
            if (it == accuracy.end()) {
                out += "nan";
            } else {
                std::snprintf(buf, sizeof buf, "%.4f", it->second[i]);
                out += buf;
            }
        }
        out += "\n";
    }
    return out;
}

SweepResult sweep(SweepParameter parameter, int from, int to,
                  const std::vector<Segment>& segments, const FeatureSetSpec& base,
                  const TrainConfig& config, double train_fraction) {
    if (from > to) throw InvalidParameter("empty sweep range");

    SweepResult result;
    result.parameter_name = parameter == SweepParameter::MfdSize ? "mfd_size"
                                                                 : "mfcc_count";
    for (int value = from; value <= to; ++value) {
        FeatureSetSpec spec = base;
        if (parameter == SweepParameter::MfdSize) {
            spec.kind = FeatureKind::Mfd;
            spec.mfd_size = value;
        } else {
            if (base.kind != FeatureKind::MfccPlusKurtosis)
                spec.kind = FeatureKind::Mfcc;
            spec.n_coeffs = value;
        }

        const FeatureTable table = extract_features(segments, spec);
        const SplitIndices idx =
            stratified_split(table_labels(table), train_fraction, config.seed);
        const ModelBundle bundle = train_all(subset(table, idx.train), config);
        const auto matrices = evaluate(bundle, subset(table, idx.test));

        result.values.push_back(value);
        for (const auto& [kind, matrix] : matrices)
            result.accuracy[kind].push_back(matrix.macro_recall_percent());
    }
    return result;
}

}  // namespace vibromon
