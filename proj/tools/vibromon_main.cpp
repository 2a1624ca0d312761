// Command-line front end: synth | ingest | extract | train | eval | sweep |
// predict. Every stage of the diagnosis pipeline is independently runnable
// so intermediate artifacts can be cached and inspected.
//
// Exit codes: 0 success, 2 usage or configuration error, 3 runtime failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vibromon/bundle_io.hpp"
#include "vibromon/errors.hpp"
#include "vibromon/features.hpp"
#include "vibromon/pipeline.hpp"
#include "vibromon/signal_io.hpp"
#include "vibromon/synth.hpp"

namespace fs = std::filesystem;
using namespace vibromon;

namespace {

struct CliOptions {
    std::string manifest_path;
    std::string out_dir = ".";
    std::string bundle_path;
    std::string input_path;
    std::string features = "mfd";
    std::string classifiers = "svm,hmm,gmm,enn";
    std::string param;
    std::string classes = "normal,inner,outer,ball";
    std::uint64_t seed = 0;
    double split_fraction = 0.7;
    double duration_s = 10.0;
    double rate_hz = 12000.0;
    double rpm = 1797.0;
    double revolutions = 5.0;
    int from = 2;
    int to = 20;
    int mfd_k = 13;
    int eps_min = 1;
    int mfcc_l = 13;
    int mfcc_filters = 26;
    int mfcc_fft = 256;
    int n_frames = 14;
    double svm_c = 10.0;
    int svm_degree = 5;
    int gmm_m = 3;
    int hmm_n = 2;
    int hmm_m = 10;
    double enn_eta = 0.219;
    int enn_epochs = 100;
    bool have_split = false;
    bool have_seed = false;
};

FeatureSetSpec spec_from(const CliOptions& o) {
    const auto kind =
        feature_kind_from_string(o.features.empty() ? "mfd" : o.features);
    if (!kind) throw InvalidParameter("unknown feature set: " + o.features);
    FeatureSetSpec spec;
    spec.kind = *kind;
    spec.mfd_size = o.mfd_k;
    spec.eps_min = o.eps_min;
    spec.n_coeffs = o.mfcc_l;
    spec.n_filters = o.mfcc_filters;
    spec.fft_size = o.mfcc_fft;
    spec.n_frames = o.n_frames;
    spec.validate();
    return spec;
}

TrainConfig config_from(const CliOptions& o) {
    TrainConfig cfg;
    cfg.classifiers.clear();
    std::stringstream ss(o.classifiers);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto kind = classifier_kind_from_string(tok);
        if (!kind) throw InvalidParameter("unknown classifier: " + tok);
        cfg.classifiers.push_back(*kind);
    }
    if (cfg.classifiers.empty()) throw InvalidParameter("no classifiers selected");
    cfg.seed = o.seed;
    cfg.kernel = KernelSpec::polynomial(o.svm_degree);
    cfg.svm_c = o.svm_c;
    cfg.gmm_components = static_cast<std::size_t>(o.gmm_m);
    cfg.hmm_states = static_cast<std::size_t>(o.hmm_n);
    cfg.hmm_mixtures = static_cast<std::size_t>(o.hmm_m);
    cfg.enn_eta = o.enn_eta;
    cfg.enn_epochs = o.enn_epochs;
    return cfg;
}

// Loads every manifest recording and cuts it into segments. Per-file
// failures go to stderr; the good files survive.
std::vector<Segment> load_segments(const CliOptions& o) {
    const DatasetManifest manifest = load_manifest(o.manifest_path);
    std::vector<Segment> segments;
    for (const auto& entry : manifest.entries) {
        try {
            const VibrationSignal sig = load_signal(entry.path, entry);
            auto segs = segment(sig, o.revolutions);
            for (auto& s : segs) segments.push_back(std::move(s));
        } catch (const Error& err) {
            std::cerr << "skipping " << entry.path << ": " << err.what() << "\n";
        }
    }
    return segments;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot write " + path);
    out << content;
    if (!out) throw IoFailure("write failed: " + path);
}

int cmd_synth(const CliOptions& o) {
    if (!o.have_seed) throw InvalidParameter("--seed is required");
    fs::create_directories(o.out_dir);
    DatasetManifest manifest;
    std::stringstream ss(o.classes);
    std::string tok;
    std::uint64_t offset = 0;
    while (std::getline(ss, tok, ',')) {
        const auto cls = fault_class_from_label(tok);
        if (!cls) throw InvalidParameter("unknown class: " + tok);
        const VibrationSignal sig =
            generate_synthetic(*cls, o.duration_s, o.rate_hz, o.rpm, o.seed + offset);
        const std::string path = (fs::path(o.out_dir) / (tok + ".vsig")).string();
        save_signal_binary(sig, path);
        manifest.entries.push_back({path, *cls, o.rpm, o.rate_hz});
        ++offset;
    }
    const std::string mpath = (fs::path(o.out_dir) / "manifest.txt").string();
    save_manifest(manifest, mpath);
    std::cout << "wrote " << manifest.entries.size() << " recordings and " << mpath
              << "\n";
    return 0;
}

int cmd_ingest(const CliOptions& o) {
    fs::create_directories(o.out_dir);
    const DatasetManifest manifest = load_manifest(o.manifest_path);
    DatasetManifest cache;
    std::map<FaultClass, std::size_t> per_class;
    for (const auto& entry : manifest.entries) {
        try {
            const VibrationSignal sig = load_signal(entry.path, entry);
            for (const Segment& seg : segment(sig, o.revolutions)) {
                VibrationSignal one;
                one.samples = seg.samples;
                one.sample_rate_hz = entry.sample_rate_hz;
                one.shaft_speed_rpm = entry.shaft_speed_rpm;
                one.label = seg.label;
                const std::string name =
                    fs::path(entry.path).stem().string() + "_seg" +
                    std::to_string(seg.index) + ".vsig";
                const std::string path = (fs::path(o.out_dir) / name).string();
                save_signal_binary(one, path);
                cache.entries.push_back(
                    {path, *seg.label, entry.shaft_speed_rpm, entry.sample_rate_hz});
                per_class[*seg.label] += 1;
            }
        } catch (const Error& err) {
            std::cerr << "skipping " << entry.path << ": " << err.what() << "\n";
        }
    }
    if (cache.entries.empty()) {
        std::cerr << "no segments produced\n";
        return 2;
    }
    save_manifest(cache, (fs::path(o.out_dir) / "segments_manifest.txt").string());
    std::cout << "segments:";
    for (FaultClass c : all_fault_classes())
        std::cout << " " << to_label(c) << "=" << per_class[c];
    std::cout << "\n";
    return 0;
}

int cmd_extract(const CliOptions& o) {
    const FeatureSetSpec spec = spec_from(o);
    const std::vector<Segment> segments = load_segments(o);
    if (segments.empty()) throw SignalTooShort("no segments from manifest");
    const FeatureTable table = extract_features(segments, spec);
    for (const auto& msg : table.skipped) std::cerr << msg << "\n";
    write_text(o.out_dir, feature_table_csv(table));
    std::cout << "wrote " << table.items.size() << " feature rows to " << o.out_dir
              << "\n";
    return 0;
}

int cmd_train(const CliOptions& o) {
    if (!o.have_seed) throw InvalidParameter("--seed is required");
    fs::create_directories(o.out_dir);
    const FeatureSetSpec spec = spec_from(o);
    const TrainConfig cfg = config_from(o);
    const std::vector<Segment> segments = load_segments(o);
    if (segments.empty()) throw SignalTooShort("no segments from manifest");

    const FeatureTable table = extract_features(segments, spec);
    for (const auto& msg : table.skipped) std::cerr << msg << "\n";
    std::vector<FaultClass> labels;
    for (const auto& item : table.items) labels.push_back(item.label);
    const SplitIndices idx = stratified_split(labels, o.split_fraction, o.seed);

    ModelBundle bundle = train_all(subset(table, idx.train), cfg);
    bundle.created_from = o.manifest_path;
    const std::string bpath = (fs::path(o.out_dir) / "bundle.vdmb").string();
    save_bundle(bundle, bpath);
    std::cout << "trained on " << idx.train.size() << " segments, held out "
              << idx.test.size() << "; bundle: " << bpath << "\n";
    return 0;
}

int cmd_eval(const CliOptions& o) {
    fs::create_directories(o.out_dir);
    const ModelBundle bundle = load_bundle(o.bundle_path);
    if (!o.features.empty()) {
        const FeatureSetSpec requested = spec_from(o);
        if (!(requested == bundle.spec))
            throw FeatureSpecMismatch("requested features differ from the bundle");
    }
    const std::vector<Segment> segments = load_segments(o);
    if (segments.empty()) throw SignalTooShort("no segments from manifest");

    FeatureTable table = extract_features(segments, bundle.spec);
    for (const auto& msg : table.skipped) std::cerr << msg << "\n";
    if (o.have_split) {
        if (!o.have_seed) throw InvalidParameter("--split needs --seed");
        std::vector<FaultClass> labels;
        for (const auto& item : table.items) labels.push_back(item.label);
        const SplitIndices idx = stratified_split(labels, o.split_fraction, o.seed);
        table = subset(table, idx.test);
    }

    const auto matrices = evaluate(bundle, table);
    for (const auto& [kind, matrix] : matrices) {
        const std::string name = to_string(kind);
        write_text((fs::path(o.out_dir) / ("confusion_" + name + ".csv")).string(),
                   matrix.to_csv());
        std::cout << name << " confusion (%):\n" << matrix.to_text();
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s accuracy: %.4f\n", name.c_str(),
                      matrix.macro_recall_percent());
        std::cout << buf;
    }
    return 0;
}

int cmd_sweep(const CliOptions& o) {
    if (!o.have_seed) throw InvalidParameter("--seed is required");
    fs::create_directories(o.out_dir);
    SweepParameter param;
    if (o.param == "mfd") {
        param = SweepParameter::MfdSize;
    } else if (o.param == "mfcc") {
        param = SweepParameter::MfccCount;
    } else {
        throw InvalidParameter("--param must be mfd or mfcc");
    }
    const TrainConfig cfg = config_from(o);
    const std::vector<Segment> segments = load_segments(o);
    if (segments.empty()) throw SignalTooShort("no segments from manifest");

    FeatureSetSpec base = spec_from(o);
    const SweepResult result =
        sweep(param, o.from, o.to, segments, base, cfg, o.split_fraction);
    const std::string path = (fs::path(o.out_dir) / "sweep.csv").string();
    write_text(path, result.to_csv());
    std::cout << "wrote " << result.values.size() << " sweep rows to " << path << "\n";
    return 0;
}

int cmd_predict(const CliOptions& o) {
    const ModelBundle bundle = load_bundle(o.bundle_path);
    if (!o.features.empty()) {
        const FeatureSetSpec requested = spec_from(o);
        if (!(requested == bundle.spec))
            throw FeatureSpecMismatch("requested features differ from the bundle");
    }
    ManifestEntry meta{o.input_path, FaultClass::Normal, o.rpm, o.rate_hz};
    const VibrationSignal sig = load_signal(o.input_path, meta);
    std::vector<Segment> segments = segment(sig, o.revolutions);
    for (auto& seg : segments) seg.label = FaultClass::Normal;  // placeholder

    const FeatureTable table = extract_features(segments, bundle.spec);
    for (const auto& msg : table.skipped) std::cerr << msg << "\n";
    for (std::size_t i = 0; i < table.items.size(); ++i) {
        const BundlePrediction p = predict_segment(bundle, table.items[i]);
        std::cout << "segment " << i << ":";
        for (const auto& [kind, fault] : p.predicted) {
            std::cout << " " << to_string(kind) << "=" << to_label(fault);
            const auto s = p.scores.find(kind);
            if (s != p.scores.end()) {
                std::cout << " (";
                bool first = true;
                for (const auto& [cls, score] : s->second) {
                    char buf[48];
                    std::snprintf(buf, sizeof buf, "%s%s=%.4g", first ? "" : " ",
                                  to_label(cls).c_str(), score);
                    std::cout << buf;
                    first = false;
                }
                std::cout << ")";
            }
        }
        std::cout << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vibration-based bearing condition monitoring"};
    app.set_config("--config");
    app.require_subcommand(1);

    CliOptions o;

    auto add_feature_opts = [&](CLI::App* cmd) {
        cmd->add_option("--features", o.features,
                        "mfd|mfcc|mfcc+kurtosis|kurtosis");
        cmd->add_option("--mfd-k", o.mfd_k, "fractogram length");
        cmd->add_option("--eps-min", o.eps_min, "finest box side, samples");
        cmd->add_option("--mfcc-l", o.mfcc_l, "cepstral coefficients per frame");
        cmd->add_option("--mfcc-filters", o.mfcc_filters, "mel filters");
        cmd->add_option("--mfcc-fft", o.mfcc_fft, "FFT size");
        cmd->add_option("--frames", o.n_frames, "frames per segment");
        cmd->add_option("--revolutions", o.revolutions, "revolutions per segment");
    };
    auto add_train_opts = [&](CLI::App* cmd) {
        cmd->add_option("--classifiers", o.classifiers, "comma list of svm,hmm,gmm,enn");
        cmd->add_option("--svm-c", o.svm_c, "soft-margin penalty");
        cmd->add_option("--svm-degree", o.svm_degree, "polynomial kernel degree");
        cmd->add_option("--gmm-m", o.gmm_m, "mixture components per class");
        cmd->add_option("--hmm-n", o.hmm_n, "hidden states");
        cmd->add_option("--hmm-m", o.hmm_m, "mixtures per state");
        cmd->add_option("--enn-eta", o.enn_eta, "interval learning rate");
        cmd->add_option("--enn-epochs", o.enn_epochs, "training epochs");
    };

    CLI::App* synth = app.add_subcommand("synth", "write synthetic recordings + manifest");
    synth->add_option("--out", o.out_dir, "output directory")->required();
    synth->add_option("--seed", o.seed)->required();
    synth->add_option("--duration", o.duration_s, "seconds per class");
    synth->add_option("--rate", o.rate_hz, "sample rate, Hz");
    synth->add_option("--rpm", o.rpm, "shaft speed");
    synth->add_option("--classes", o.classes, "comma list");

    CLI::App* ingest = app.add_subcommand("ingest", "segment recordings into a cache");
    ingest->add_option("--manifest", o.manifest_path)->required();
    ingest->add_option("--out", o.out_dir)->required();
    ingest->add_option("--revolutions", o.revolutions);

    CLI::App* extract = app.add_subcommand("extract", "write a feature CSV");
    extract->add_option("--manifest", o.manifest_path)->required();
    extract->add_option("--out", o.out_dir, "output CSV path")->required();
    add_feature_opts(extract);

    CLI::App* train = app.add_subcommand("train", "train classifiers into a bundle");
    train->add_option("--manifest", o.manifest_path)->required();
    train->add_option("--out", o.out_dir)->required();
    train->add_option("--seed", o.seed)->required();
    train->add_option("--split", o.split_fraction, "train fraction");
    add_feature_opts(train);
    add_train_opts(train);

    CLI::App* eval = app.add_subcommand("eval", "confusion matrices on a dataset");
    eval->add_option("--manifest", o.manifest_path)->required();
    eval->add_option("--bundle", o.bundle_path)->required();
    eval->add_option("--out", o.out_dir)->required();
    CLI::Option* split_opt = eval->add_option("--split", o.split_fraction,
                                              "evaluate the held-out fraction");
    CLI::Option* seed_opt = eval->add_option("--seed", o.seed);
    eval->add_option("--features", o.features, "must match the bundle when given");
    eval->add_option("--revolutions", o.revolutions);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "accuracy vs feature size");
    sweep_cmd->add_option("--manifest", o.manifest_path)->required();
    sweep_cmd->add_option("--param", o.param, "mfd|mfcc")->required();
    sweep_cmd->add_option("--out", o.out_dir)->required();
    sweep_cmd->add_option("--seed", o.seed)->required();
    sweep_cmd->add_option("--from", o.from);
    sweep_cmd->add_option("--to", o.to);
    sweep_cmd->add_option("--split", o.split_fraction);
    add_feature_opts(sweep_cmd);
    add_train_opts(sweep_cmd);

    CLI::App* predict = app.add_subcommand("predict", "classify segments of one recording");
    predict->add_option("--bundle", o.bundle_path)->required();
    predict->add_option("--input", o.input_path)->required();
    predict->add_option("--rate", o.rate_hz);
    predict->add_option("--rpm", o.rpm);
    predict->add_option("--features", o.features, "must match the bundle when given");
    predict->add_option("--revolutions", o.revolutions);

    o.features = "";  // only treated as a request when explicitly given

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    o.have_seed = (synth->count("--seed") + train->count("--seed") +
                   sweep_cmd->count("--seed") + seed_opt->count()) > 0;
    o.have_split = split_opt->count() > 0;

    try {
        if (synth->parsed()) return cmd_synth(o);
        if (ingest->parsed()) return cmd_ingest(o);
        if (extract->parsed()) return cmd_extract(o);
        if (train->parsed()) return cmd_train(o);
        if (eval->parsed()) return cmd_eval(o);
        if (sweep_cmd->parsed()) return cmd_sweep(o);
        if (predict->parsed()) return cmd_predict(o);
    } catch (const InvalidParameter& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const MissingFile& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
