#include "vibromon/bundle_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "vibromon/errors.hpp"

namespace vibromon {

namespace {

constexpr char kMagic[4] = {'V', 'D', 'M', 'B'};

std::uint32_t crc32(const std::string& bytes) {
    std::uint32_t crc = 0xffffffffu;
    for (unsigned char b : bytes) {
        crc ^= b;
        for (int k = 0; k < 8; ++k)
            crc = (crc >> 1) ^ (0xedb88320u & (~(crc & 1u) + 1u));
    }
    return ~crc;
}

class Writer {
public:
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        buf_.append(s);
    }
    void str_raw(const std::string& s) { buf_.append(s); }
    void vec(const std::vector<double>& v) {
        u32(static_cast<std::uint32_t>(v.size()));
        for (double d : v) f64(d);
    }
    void mat(const std::vector<std::vector<double>>& m) {
        u32(static_cast<std::uint32_t>(m.size()));
        for (const auto& row : m) vec(row);
    }
    const std::string& bytes() const { return buf_; }

private:
    std::string buf_;
};

class Reader {
public:
    explicit Reader(std::string bytes) : buf_(std::move(bytes)) {}

    std::uint8_t u8() {
        need(1);
        return static_cast<std::uint8_t>(buf_[pos_++]);
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(buf_[pos_++])) << (8 * i);
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf_[pos_++])) << (8 * i);
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string str() {
        const std::uint32_t n = u32();
        need(n);
        std::string s = buf_.substr(pos_, n);
        pos_ += n;
        return s;
    }
    std::vector<double> vec() {
        const std::uint32_t n = u32();
        std::vector<double> v(n);
        for (auto& d : v) d = f64();
        return v;
    }
    std::vector<std::vector<double>> mat() {
        const std::uint32_t n = u32();
        std::vector<std::vector<double>> m(n);
        for (auto& row : m) row = vec();
        return m;
    }
    std::size_t pos() const { return pos_; }
    std::size_t size() const { return buf_.size(); }

private:
    void need(std::size_t n) {
        if (pos_ + n > buf_.size()) throw CorruptBundle("truncated bundle");
    }
    std::string buf_;
    std::size_t pos_ = 0;
};

void write_spec(Writer& w, const FeatureSetSpec& spec) {
    w.u8(static_cast<std::uint8_t>(spec.kind));
    w.u32(static_cast<std::uint32_t>(spec.mfd_size));
    w.u32(static_cast<std::uint32_t>(spec.eps_min));
    w.u32(static_cast<std::uint32_t>(spec.n_coeffs));
    w.u32(static_cast<std::uint32_t>(spec.n_filters));
    w.u32(static_cast<std::uint32_t>(spec.fft_size));
    w.u32(static_cast<std::uint32_t>(spec.n_frames));
}

FeatureSetSpec read_spec(Reader& r) {
    FeatureSetSpec spec;
    const std::uint8_t kind = r.u8();
    if (kind > 3) throw CorruptBundle("unknown feature kind");
    spec.kind = static_cast<FeatureKind>(kind);
    spec.mfd_size = static_cast<int>(r.u32());
    spec.eps_min = static_cast<int>(r.u32());
    spec.n_coeffs = static_cast<int>(r.u32());
    spec.n_filters = static_cast<int>(r.u32());
    spec.fft_size = static_cast<int>(r.u32());
    spec.n_frames = static_cast<int>(r.u32());
    return spec;
}

void write_gmm(Writer& w, const GaussianMixtureModel& g) {
    w.vec(g.weights);
    w.mat(g.means);
    w.mat(g.variances);
    w.u8(g.converged ? 1 : 0);
}

GaussianMixtureModel read_gmm(Reader& r) {
    GaussianMixtureModel g;
    g.weights = r.vec();
    g.means = r.mat();
    g.variances = r.mat();
    g.converged = r.u8() != 0;
    return g;
}

void write_kernel(Writer& w, const KernelSpec& k) {
    w.u8(static_cast<std::uint8_t>(k.type));
    w.u32(static_cast<std::uint32_t>(k.degree));
    w.f64(k.bandwidth_sq);
}

KernelSpec read_kernel(Reader& r) {
    KernelSpec k;
    const std::uint8_t t = r.u8();
    if (t > 2) throw CorruptBundle("unknown kernel type");
    k.type = static_cast<KernelSpec::Type>(t);
    k.degree = static_cast<int>(r.u32());
    k.bandwidth_sq = r.f64();
    return k;
}

}  // namespace

void save_bundle(const ModelBundle& bundle, const std::string& path) {
    Writer w;
    w.u8(static_cast<std::uint8_t>(ModelBundle::kVersion));
    write_spec(w, bundle.spec);
    w.str(bundle.created_from);

    w.vec(bundle.standardizer.means);
    w.vec(bundle.standardizer.stds);
    w.u8(bundle.standardizer.has_kurt ? 1 : 0);
    w.f64(bundle.standardizer.kurt_mean);
    w.f64(bundle.standardizer.kurt_std);

    std::uint8_t flags = 0;
    if (bundle.svm) flags |= 1;
    if (bundle.gmm) flags |= 2;
    if (bundle.hmm) flags |= 4;
    if (bundle.enn) flags |= 8;
    w.u8(flags);

    if (bundle.svm) {
        Writer s;
        s.u32(static_cast<std::uint32_t>(bundle.svm->pairwise.size()));
        for (const auto& [pair, model] : bundle.svm->pairwise) {
            s.u8(static_cast<std::uint8_t>(ordinal(pair.first)));
            s.u8(static_cast<std::uint8_t>(ordinal(pair.second)));
            write_kernel(s, model.kernel);
            s.f64(model.c);
            s.f64(model.bias);
            s.u8(model.converged ? 1 : 0);
            s.mat(model.support_vectors);
            s.vec(model.alphas);
            s.u32(static_cast<std::uint32_t>(model.labels.size()));
            for (int y : model.labels) s.u8(y > 0 ? 1 : 0);
        }
        w.u64(s.bytes().size());
        w.str_raw(s.bytes());
    }
    if (bundle.gmm) {
        Writer s;
        s.u32(static_cast<std::uint32_t>(bundle.gmm->per_class.size()));
        for (const auto& [cls, model] : bundle.gmm->per_class) {
            s.u8(static_cast<std::uint8_t>(ordinal(cls)));
            write_gmm(s, model);
        }
        w.u64(s.bytes().size());
        w.str_raw(s.bytes());
    }
    if (bundle.hmm) {
        Writer s;
        s.u32(static_cast<std::uint32_t>(bundle.hmm->per_class.size()));
        for (const auto& [cls, model] : bundle.hmm->per_class) {
            s.u8(static_cast<std::uint8_t>(ordinal(cls)));
            s.vec(model.pi);
            s.mat(model.transitions);
            s.u32(static_cast<std::uint32_t>(model.emissions.size()));
            for (const auto& g : model.emissions) write_gmm(s, g);
            s.u8(model.converged ? 1 : 0);
        }
        w.u64(s.bytes().size());
        w.str_raw(s.bytes());
    }
    if (bundle.enn) {
        Writer s;
        s.u32(static_cast<std::uint32_t>(bundle.enn->n_classes));
        s.u32(static_cast<std::uint32_t>(bundle.enn->n_features));
        s.f64(bundle.enn->eta);
        s.mat(bundle.enn->w_lower);
        s.mat(bundle.enn->w_upper);
        s.mat(bundle.enn->centers);
        w.u64(s.bytes().size());
        w.str_raw(s.bytes());
    }

    std::string payload;
    payload.append(kMagic, 4);
    payload.append(w.bytes());
    const std::uint32_t crc = crc32(payload);
    char trailer[4];
    for (int i = 0; i < 4; ++i) trailer[i] = static_cast<char>((crc >> (8 * i)) & 0xff);
    payload.append(trailer, 4);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot write bundle: " + path);
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) throw IoFailure("bundle write failed: " + path);
}

ModelBundle load_bundle(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open bundle: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());

    if (bytes.size() < 9 || std::memcmp(bytes.data(), kMagic, 4) != 0)
        throw CorruptBundle("missing bundle magic");
    const auto version = static_cast<std::uint8_t>(bytes[4]);
    if (version != ModelBundle::kVersion)
        throw VersionMismatch("unsupported bundle version " + std::to_string(version));

    std::uint32_t stored_crc = 0;
    for (int i = 0; i < 4; ++i)
        stored_crc |= static_cast<std::uint32_t>(
                          static_cast<unsigned char>(bytes[bytes.size() - 4 + static_cast<std::size_t>(i)]))
                      << (8 * i);
    const std::string body = bytes.substr(0, bytes.size() - 4);
    if (crc32(body) != stored_crc) throw CorruptBundle("checksum mismatch");

    Reader r(body.substr(5));  // past magic and version
    ModelBundle bundle;
    bundle.spec = read_spec(r);
    bundle.created_from = r.str();
    bundle.standardizer.means = r.vec();
    bundle.standardizer.stds = r.vec();
    bundle.standardizer.has_kurt = r.u8() != 0;
    bundle.standardizer.kurt_mean = r.f64();
    bundle.standardizer.kurt_std = r.f64();

    const std::uint8_t flags = r.u8();
    if (flags & 1) {
        const std::uint64_t len = r.u64();
        (void)len;
        MulticlassSvmModel svm;
        const std::uint32_t n_pairs = r.u32();
        for (std::uint32_t p = 0; p < n_pairs; ++p) {
            const auto a = static_cast<FaultClass>(r.u8());
            const auto b = static_cast<FaultClass>(r.u8());
            BinarySvmModel m;
            m.kernel = read_kernel(r);
            m.c = r.f64();
            m.bias = r.f64();
            m.converged = r.u8() != 0;
            m.support_vectors = r.mat();
            m.alphas = r.vec();
            const std::uint32_t n_labels = r.u32();
            m.labels.resize(n_labels);
            for (auto& y : m.labels) y = r.u8() != 0 ? 1 : -1;
            svm.pairwise.emplace(std::make_pair(a, b), std::move(m));
        }
        for (FaultClass c : all_fault_classes()) svm.classes.push_back(c);
        bundle.svm = std::move(svm);
    }
    if (flags & 2) {
        r.u64();
        GmmClassifier g;
        const std::uint32_t n = r.u32();
        for (std::uint32_t i = 0; i < n; ++i) {
            const auto cls = static_cast<FaultClass>(r.u8());
            g.per_class.emplace(cls, read_gmm(r));
        }
        bundle.gmm = std::move(g);
    }
    if (flags & 4) {
        r.u64();
        HmmBank bank;
        const std::uint32_t n = r.u32();
        for (std::uint32_t i = 0; i < n; ++i) {
            const auto cls = static_cast<FaultClass>(r.u8());
            HmmModel m;
            m.pi = r.vec();
            m.transitions = r.mat();
            const std::uint32_t n_states = r.u32();
            m.emissions.resize(n_states);
            for (auto& g : m.emissions) g = read_gmm(r);
            m.converged = r.u8() != 0;
            bank.per_class.emplace(cls, std::move(m));
        }
        bundle.hmm = std::move(bank);
    }
    if (flags & 8) {
        r.u64();
        EnnModel e;
        e.n_classes = r.u32();
        e.n_features = r.u32();
        e.eta = r.f64();
        e.w_lower = r.mat();
        e.w_upper = r.mat();
        e.centers = r.mat();
        bundle.enn = std::move(e);
    }
    if (r.pos() != r.size()) throw CorruptBundle("trailing bytes in bundle");
    return bundle;
}

}  // namespace vibromon
