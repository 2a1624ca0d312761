#include "vibromon/features.hpp"

#include <cmath>
#include <cstdio>

#include "vibromon/errors.hpp"
#include "vibromon/fractal.hpp"
#include "vibromon/mfcc.hpp"

namespace vibromon {

std::string to_string(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::Mfd: return "mfd";
        case FeatureKind::Mfcc: return "mfcc";
        case FeatureKind::MfccPlusKurtosis: return "mfcc+kurtosis";
        case FeatureKind::KurtosisOnly: return "kurtosis";
    }
    return "mfd";
}

std::optional<FeatureKind> feature_kind_from_string(const std::string& s) {
    if (s == "mfd") return FeatureKind::Mfd;
    if (s == "mfcc") return FeatureKind::Mfcc;
    if (s == "mfcc+kurtosis") return FeatureKind::MfccPlusKurtosis;
    if (s == "kurtosis") return FeatureKind::KurtosisOnly;
    return std::nullopt;
}

void FeatureSetSpec::validate() const {
    if (mfd_size < 1) throw InvalidK("mfd size must be >= 1");
    if (eps_min < 1) throw InvalidParameter("eps_min must be >= 1");
    if (n_coeffs < 1 || n_filters < 2 || n_coeffs > n_filters)
        throw InvalidParameter("need 1 <= coefficients <= filters");
    if (fft_size < 2 || (fft_size & (fft_size - 1)) != 0)
        throw InvalidParameter("fft_size must be a power of two");
    if (n_frames < 1) throw InvalidParameter("n_frames must be >= 1");
}

FeatureTable extract_features(const std::vector<Segment>& segments,
                              const FeatureSetSpec& spec) {
    spec.validate();
    FeatureTable table;
    table.spec = spec;

    // the filterbank depends only on spec and rate, share it across segments
    MelFilterbank bank;
    MfccConfig cfg;
    double bank_rate = 0.0;

    for (std::size_t idx = 0; idx < segments.size(); ++idx) {
        const Segment& seg = segments[idx];
        try {
            SegmentFeatures item;
            if (!seg.label)
                throw InvalidParameter("unlabeled segment");
            item.label = *seg.label;

            switch (spec.kind) {
                case FeatureKind::Mfd:
                    item.rows = {mfd(seg.samples, spec.mfd_size, spec.eps_min)};
                    break;
                case FeatureKind::MfccPlusKurtosis:
                    item.kurtosis_value = kurtosis(seg.samples);
                    [[fallthrough]];
                case FeatureKind::Mfcc: {
                    if (!(seg.sample_rate_hz > 0.0))
                        throw InvalidParameter("segment without sample rate");
                    // segments may come from different recordings; the
                    // filterbank is rebuilt when the rate changes
                    if (bank.weights.empty() || bank_rate != seg.sample_rate_hz) {
                        cfg.n_frames = static_cast<std::size_t>(spec.n_frames);
                        cfg.fft_size = static_cast<std::size_t>(spec.fft_size);
                        cfg.n_filters = static_cast<std::size_t>(spec.n_filters);
                        cfg.n_coeffs = static_cast<std::size_t>(spec.n_coeffs);
                        bank = build_filterbank(cfg.n_filters, seg.sample_rate_hz,
                                                cfg.fft_size);
                        bank_rate = seg.sample_rate_hz;
                    }
                    item.rows = mfcc_segment(seg, bank, cfg).coeffs;
                    break;
                }
                case FeatureKind::KurtosisOnly:
                    item.rows = {{kurtosis(seg.samples)}};
                    break;
            }
            table.items.push_back(std::move(item));
        } catch (const Error& err) {
            table.skipped.push_back("segment " + std::to_string(idx) + " (" +
                                    seg.parent_source_id + "): " + err.what());
        }
    }
    return table;
}

std::vector<double> flat_view(const SegmentFeatures& item) {
    std::vector<double> out;
    for (const auto& row : item.rows) out.insert(out.end(), row.begin(), row.end());
    if (item.kurtosis_value) out.push_back(*item.kurtosis_value);
    return out;
}

std::vector<std::vector<double>> point_view(const SegmentFeatures& item,
                                            FeatureKind kind) {
    if (kind == FeatureKind::Mfd || kind == FeatureKind::KurtosisOnly)
        return item.rows;
    std::vector<std::vector<double>> pts = item.rows;
    if (item.kurtosis_value) {
        for (auto& p : pts) p.push_back(*item.kurtosis_value);
    }
    return pts;
}

std::vector<std::vector<double>> sequence_view(const SegmentFeatures& item,
                                               FeatureKind kind) {
    if (kind == FeatureKind::Mfd) {
        // the fractogram unrolls into a sequence of scalar observations
        std::vector<std::vector<double>> seq;
        for (double v : item.rows.front()) seq.push_back({v});
        return seq;
    }
    return point_view(item, kind);
}

Standardizer Standardizer::fit(const FeatureTable& table) {
    if (table.items.empty()) throw TooFewPoints("empty feature table");
    const std::size_t dim = table.items.front().rows.front().size();

    Standardizer s;
    s.means.assign(dim, 0.0);
    s.stds.assign(dim, 0.0);
    std::size_t count = 0;
    for (const auto& item : table.items) {
        for (const auto& row : item.rows) {
            if (row.size() != dim) throw DimensionMismatch("ragged feature rows");
            for (std::size_t d = 0; d < dim; ++d) s.means[d] += row[d];
            ++count;
        }
    }
    for (double& m : s.means) m /= static_cast<double>(count);
    for (const auto& item : table.items) {
        for (const auto& row : item.rows) {
            for (std::size_t d = 0; d < dim; ++d) {
                const double dd = row[d] - s.means[d];
                s.stds[d] += dd * dd;
            }
        }
    }
    for (double& v : s.stds) {
        v = std::sqrt(v / static_cast<double>(count));
        if (v < 1e-12) v = 1.0;
    }

    std::size_t n_kurt = 0;
    double km = 0.0;
    for (const auto& item : table.items) {
        if (item.kurtosis_value) {
            km += *item.kurtosis_value;
            ++n_kurt;
        }
    }
    if (n_kurt > 0) {
        s.has_kurt = true;
        s.kurt_mean = km / static_cast<double>(n_kurt);
        double kv = 0.0;
        for (const auto& item : table.items) {
            if (item.kurtosis_value) {
                const double d = *item.kurtosis_value - s.kurt_mean;
                kv += d * d;
            }
        }
        s.kurt_std = std::sqrt(kv / static_cast<double>(n_kurt));
        if (s.kurt_std < 1e-12) s.kurt_std = 1.0;
    }
    return s;
}

SegmentFeatures Standardizer::apply(const SegmentFeatures& item) const {
    SegmentFeatures out = item;
    for (auto& row : out.rows) {
        if (row.size() != means.size())
            throw DimensionMismatch("feature dimension differs from statistics");
        for (std::size_t d = 0; d < row.size(); ++d)
            row[d] = (row[d] - means[d]) / stds[d];
    }
    if (out.kurtosis_value && has_kurt)
        out.kurtosis_value = (*out.kurtosis_value - kurt_mean) / kurt_std;
    return out;
}

FeatureTable Standardizer::apply(const FeatureTable& table) const {
    FeatureTable out;
    out.spec = table.spec;
    out.skipped = table.skipped;
    out.items.reserve(table.items.size());
    for (const auto& item : table.items) out.items.push_back(apply(item));
    return out;
}

std::string feature_table_csv(const FeatureTable& table) {
    std::string out;
    std::size_t width = 0;
    for (const auto& item : table.items)
        width = std::max(width, flat_view(item).size());
    out += "label";
    for (std::size_t i = 0; i < width; ++i) out += ",f" + std::to_string(i);
    out += "\n";
    char buf[40];
    for (const auto& item : table.items) {
        out += to_label(item.label);
        for (double v : flat_view(item)) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out += ",";
            out += buf;
        }
        out += "\n";
    }
    return out;
}

}  // namespace vibromon
