#include "vibromon/signal_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "vibromon/errors.hpp"

namespace vibromon {
namespace {

constexpr char kMagic[4] = {'V', 'S', 'I', 'G'};
constexpr std::uint8_t kVersion = 0x01;

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// "key = value" split; returns false for lines that are not pairs.
bool split_kv(const std::string& line, std::string& key, std::string& value) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) return false;
    key = trim(line.substr(0, eq));
    value = trim(line.substr(eq + 1));
    return !key.empty();
}

double parse_real(const std::string& token, const std::string& context) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(token, &used);
    } catch (const std::exception&) {
        throw MalformedRecord("bad numeric value '" + token + "' in " + context);
    }
    if (used != token.size() || !std::isfinite(v))
        throw MalformedRecord("bad numeric value '" + token + "' in " + context);
    return v;
}

std::uint32_t read_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) |
           (static_cast<std::uint32_t>(p[3]) << 24);
}

void write_u32_le(std::ostream& os, std::uint32_t v) {
    const unsigned char b[4] = {
        static_cast<unsigned char>(v & 0xff),
        static_cast<unsigned char>((v >> 8) & 0xff),
        static_cast<unsigned char>((v >> 16) & 0xff),
        static_cast<unsigned char>((v >> 24) & 0xff),
    };
    os.write(reinterpret_cast<const char*>(b), 4);
}

VibrationSignal load_binary(std::ifstream& in, const std::string& path,
                            const ManifestEntry& meta) {
    unsigned char header[9];
    in.read(reinterpret_cast<char*>(header), 9);
    if (in.gcount() != 9 || std::memcmp(header, kMagic, 4) != 0)
        throw MalformedRecord("truncated or invalid header: " + path);
    if (header[4] != kVersion)
        throw MalformedRecord("unsupported signal file version: " + path);
    const std::uint32_t count = read_u32_le(header + 5);
    if (count == 0) throw EmptySignal("no samples in " + path);

    std::vector<unsigned char> raw(static_cast<std::size_t>(count) * 4);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size()))
        throw MalformedRecord("truncated sample data: " + path);

    VibrationSignal s;
    s.samples.resize(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint32_t bits = read_u32_le(raw.data() + static_cast<std::size_t>(i) * 4);
        s.samples[i] = static_cast<double>(std::bit_cast<float>(bits));
    }
    s.sample_rate_hz = meta.sample_rate_hz;
    s.shaft_speed_rpm = meta.shaft_speed_rpm;
    s.label = meta.label;
    s.source_id = path;
    return s;
}

VibrationSignal load_csv(std::ifstream& in, const std::string& path,
                         const ManifestEntry& meta) {
    VibrationSignal s;
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        s.samples.push_back(parse_real(t, path));
    }
    if (s.samples.empty()) throw EmptySignal("no samples in " + path);
    s.sample_rate_hz = meta.sample_rate_hz;
    s.shaft_speed_rpm = meta.shaft_speed_rpm;
    s.label = meta.label;
    s.source_id = path;
    return s;
}

}  // namespace

void DatasetManifest::validate() const {
    std::set<std::string> seen;
    for (const auto& e : entries) {
        if (e.path.empty()) throw MalformedRecord("manifest entry without path");
        if (!seen.insert(e.path).second)
            throw MalformedRecord("duplicate manifest path: " + e.path);
        if (!(e.shaft_speed_rpm > 0.0) || !(e.sample_rate_hz > 0.0))
            throw MalformedRecord("manifest entry with nonpositive rpm/rate: " + e.path);
    }
}

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile("cannot open manifest: " + path);

    DatasetManifest m;
    ManifestEntry cur;
    bool open = false;
    int have = 0;  // bitmask: path|label|rpm|rate

    auto flush = [&]() {
        if (!open) return;
        if (have != 0xf)
            throw MalformedRecord("incomplete manifest entry: " + cur.path);
        m.entries.push_back(cur);
        cur = ManifestEntry{};
        have = 0;
        open = false;
    };

    std::string line, key, value;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!split_kv(t, key, value))
            throw MalformedRecord("bad manifest line: " + t);
        if (key == "path") {
            flush();
            cur.path = value;
            have |= 1;
            open = true;
        } else if (key == "label") {
            const auto c = fault_class_from_label(value);
            if (!c) throw MalformedRecord("unknown label: " + value);
            cur.label = *c;
            have |= 2;
        } else if (key == "rpm") {
            cur.shaft_speed_rpm = parse_real(value, path);
            have |= 4;
        } else if (key == "sample_rate_hz") {
            cur.sample_rate_hz = parse_real(value, path);
            have |= 8;
        } else {
            throw MalformedRecord("unknown manifest key: " + key);
        }
    }
    flush();
    m.validate();
    return m;
}

void save_manifest(const DatasetManifest& manifest, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot write manifest: " + path);
    out << "# vibration dataset manifest\n";
    for (const auto& e : manifest.entries) {
        char buf[64];
        out << "path = " << e.path << "\n";
        out << "label = " << to_label(e.label) << "\n";
        std::snprintf(buf, sizeof buf, "%.17g", e.shaft_speed_rpm);
        out << "rpm = " << buf << "\n";
        std::snprintf(buf, sizeof buf, "%.17g", e.sample_rate_hz);
        out << "sample_rate_hz = " << buf << "\n\n";
    }
    if (!out) throw IoFailure("write failed: " + path);
}

VibrationSignal load_signal(const std::string& path, const ManifestEntry& meta) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw MissingFile("cannot open signal file: " + path);

    char magic[4] = {0, 0, 0, 0};
    in.read(magic, 4);
    const bool is_binary = in.gcount() == 4 && std::memcmp(magic, kMagic, 4) == 0;
    in.clear();
    in.seekg(0);

    VibrationSignal s = is_binary ? load_binary(in, path, meta) : load_csv(in, path, meta);
    s.validate();
    return s;
}

void save_signal_csv(const VibrationSignal& signal, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot write " + path);
    out << "# samples, rate=" << signal.sample_rate_hz << "\n";
    char buf[40];
    for (double v : signal.samples) {
        std::snprintf(buf, sizeof buf, "%.9g", v);
        out << buf << "\n";
    }
    if (!out) throw IoFailure("write failed: " + path);
}

void save_signal_binary(const VibrationSignal& signal, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot write " + path);
    out.write(kMagic, 4);
    out.put(static_cast<char>(kVersion));
    write_u32_le(out, static_cast<std::uint32_t>(signal.samples.size()));
    for (double v : signal.samples) {
        const std::uint32_t bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
        write_u32_le(out, bits);
    }
    if (!out) throw IoFailure("write failed: " + path);
}

}  // namespace vibromon
