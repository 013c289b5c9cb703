#include "nbrk/trial_io.hpp"

#include "nbrk/common.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

namespace nbrk {
namespace {

class ByteWriter {
public:
    explicit ByteWriter(const std::string& path) : path_(path), out_(path, std::ios::binary) {
        require(out_.good(), "cannot open ", path, " for writing");
    }
    void raw(const void* p, size_t n) { out_.write(static_cast<const char*>(p), n); }
    void u32(uint32_t v) { raw(&v, 4); }
    void u64(uint64_t v) { raw(&v, 8); }
    void f32(float v) { raw(&v, 4); }
    void f64(double v) { raw(&v, 8); }
    void finish() {
        out_.flush();
        require(out_.good(), "write failure on ", path_);
    }

private:
    std::string path_;
    std::ofstream out_;
};

class ByteReader {
public:
    ByteReader(std::string path, std::vector<char> bytes)
        : path_(std::move(path)), bytes_(std::move(bytes)) {}

    size_t offset() const { return pos_; }

    void raw(void* p, size_t n, const char* field) {
        require(pos_ + n <= bytes_.size(), path_, ": truncated while reading ", field,
                " at byte ", pos_);
        std::memcpy(p, bytes_.data() + pos_, n);
        pos_ += n;
    }
    uint32_t u32(const char* field) {
        uint32_t v;
        raw(&v, 4, field);
        return v;
    }
    uint64_t u64(const char* field) {
        uint64_t v;
        raw(&v, 8, field);
        return v;
    }
    float f32(const char* field) {
        float v;
        raw(&v, 4, field);
        return v;
    }
    double f64(const char* field) {
        double v;
        raw(&v, 8, field);
        return v;
    }
    bool at_end() const { return pos_ == bytes_.size(); }
    size_t remaining() const { return bytes_.size() - pos_; }
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::vector<char> bytes_;
    size_t pos_ = 0;
};

std::vector<char> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open ", path);
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
    return bytes;
}

} // namespace

size_t TrialFormat::file_size(const std::vector<std::string>& channel_names,
                              size_t samples, size_t brake_samples, size_t onsets) {
    size_t sz = 4 + 4 + 8 + 8 + 4 + 4; // magic, version, fs, brake_norm, counts
    for (const auto& name : channel_names) sz += 4 + name.size();
    sz += channel_names.size() * 16;           // electrode_xy
    sz += channel_names.size() * samples * 4;  // EEG f32
    sz += 4 + brake_samples * 4;
    sz += 4 + onsets * 8;
    return sz;
}

void save_recording(const EegRecording& rec, const BrakeTrace& trace,
                    const std::string& path) {
    validate(rec);
    validate(trace);
    ByteWriter w(path);
    w.raw(TrialFormat::magic, 4);
    w.u32(TrialFormat::version);
    w.f64(rec.fs);
    w.f64(trace.norm_constant);
    w.u32(static_cast<uint32_t>(rec.channels()));
    w.u32(static_cast<uint32_t>(rec.samples()));
    for (const auto& name : rec.channel_names) {
        w.u32(static_cast<uint32_t>(name.size()));
        w.raw(name.data(), name.size());
    }
    for (const auto& p : rec.electrode_xy) {
        w.f64(p.x());
        w.f64(p.y());
    }
    for (Eigen::Index c = 0; c < rec.channels(); ++c)
        for (Eigen::Index s = 0; s < rec.samples(); ++s)
            w.f32(static_cast<float>(rec.data(c, s)));
    w.u32(static_cast<uint32_t>(trace.values.size()));
    for (const double v : trace.values) w.f32(static_cast<float>(v));
    w.u32(static_cast<uint32_t>(trace.onset_indices.size()));
    for (const uint64_t idx : trace.onset_indices) w.u64(idx);
    w.finish();
}

std::pair<EegRecording, BrakeTrace> load_recording(const std::string& path) {
    ByteReader r(path, slurp(path));

    char magic[4];
    r.raw(magic, 4, "magic");
    require(std::memcmp(magic, TrialFormat::magic, 4) == 0, path,
            ": malformed header: bad magic at byte 0");
    const uint32_t version = r.u32("version");
    require(version == TrialFormat::version, path, ": unsupported format version ",
            version, " at byte 4");
    EegRecording rec;
    BrakeTrace trace;
    rec.fs = r.f64("fs");
    require(rec.fs > 0.0 && std::isfinite(rec.fs), path,
            ": malformed header: fs must be positive at byte 8, got ", rec.fs);
    trace.fs = rec.fs;
    trace.norm_constant = r.f64("brake_norm");
    const uint32_t channels = r.u32("channel count");
    const size_t samples_offset = r.offset();
    const uint32_t samples = r.u32("sample count");

    for (uint32_t c = 0; c < channels; ++c) {
        const uint32_t len = r.u32("channel name length");
        require(len <= 256, path, ": channel name length ", len,
                " implausible at byte ", r.offset() - 4);
        std::string name(len, '\0');
        r.raw(name.data(), len, "channel name");
        rec.channel_names.push_back(std::move(name));
    }
    for (uint32_t c = 0; c < channels; ++c) {
        const size_t off = r.offset();
        const double x = r.f64("electrode x");
        const double y = r.f64("electrode y");
        require(std::isfinite(x) && std::isfinite(y) && x * x + y * y <= 1.0 + 1e-9,
                path, ": electrode_xy for channel ", rec.channel_names[c],
                " outside unit disk at byte ", off);
        rec.electrode_xy.emplace_back(x, y);
    }

    require(r.remaining() >= static_cast<size_t>(channels) * samples * 4 + 8, path,
            ": declared channel count ", channels, " x sample count ", samples,
            " exceeds the data present (mismatch detected at byte ", r.offset(), ")");
    rec.data.resize(channels, samples);
    for (uint32_t c = 0; c < channels; ++c) {
        for (uint32_t s = 0; s < samples; ++s) {
            const size_t off = r.offset();
            const float v = r.f32("EEG sample");
            if (!std::isfinite(v))
                fail(path, ": non-finite EEG sample for channel ", rec.channel_names[c],
                     " at byte ", off);
            rec.data(c, s) = static_cast<double>(v);
        }
    }

    const uint32_t brake_n = r.u32("brake sample count");
    trace.values.reserve(brake_n);
    for (uint32_t i = 0; i < brake_n; ++i) {
        const size_t off = r.offset();
        const float v = r.f32("brake sample");
        require(std::isfinite(v) && v >= -1e-6f && v <= 1.0f + 1e-6f, path,
                ": brake intensity ", v, " outside [0, 1] (unit mismatch?) at byte ", off);
        trace.values.push_back(std::min(1.0, std::max(0.0, static_cast<double>(v))));
    }
    const uint32_t onset_n = r.u32("onset count");
    for (uint32_t i = 0; i < onset_n; ++i)
        trace.onset_indices.push_back(r.u64("onset index"));

    require(r.at_end(), path, ": trailing bytes after onset table at byte ", r.offset(),
            " (channel count or sample count mismatch near byte ", samples_offset, ")");

    validate(rec);
    validate(trace);
    return {std::move(rec), std::move(trace)};
}

std::pair<EegRecording, BrakeTrace> load_recording_csv(const std::string& path, double fs,
                                                       const Montage* montage) {
    require(fs > 0.0, "csv ingest: fs must be positive");
    std::ifstream in(path);
    require(in.good(), "cannot open ", path);

    std::string line;
    require(static_cast<bool>(std::getline(in, line)), path, ": empty file, header row expected");
    std::vector<std::string> headers;
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' '))
                cell.pop_back();
            while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
            headers.push_back(cell);
        }
    }
    require(headers.size() >= 2, path, ": need at least one channel column plus brake");
    const size_t n_channels = headers.size() - 1;

    EegRecording rec;
    rec.fs = fs;
    rec.channel_names.assign(headers.begin(), headers.end() - 1);
    for (const auto& name : rec.channel_names) {
        std::optional<Eigen::Vector2d> p;
        if (montage) {
            for (size_t i = 0; i < montage->labels.size(); ++i)
                if (montage->labels[i] == name) p = montage->xy[i];
        }
        if (!p) p = lookup_standard_position(name);
        require(p.has_value(), path, ": unknown electrode label ", name,
                "; supply explicit coordinates via a montage");
        rec.electrode_xy.push_back(*p);
    }

    std::vector<std::vector<double>> columns(headers.size());
    size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        size_t col = 0;
        while (std::getline(ss, cell, ',')) {
            require(col < headers.size(), path, ": row ", row, " has too many columns");
            try {
                columns[col].push_back(std::stod(cell));
            } catch (const std::exception&) {
                fail(path, ": row ", row, " column ", headers[col], ": not a number: ", cell);
            }
            ++col;
        }
        require(col == headers.size(), path, ": row ", row, " has ", col,
                " columns, header declares ", headers.size());
    }
    const size_t n = columns[0].size();
    require(n > 0, path, ": no data rows");

    rec.data.resize(n_channels, n);
    for (size_t c = 0; c < n_channels; ++c)
        for (size_t s = 0; s < n; ++s) rec.data(c, s) = columns[c][s];

    BrakeTrace trace;
    trace.fs = fs;
    trace.values = columns[n_channels];
    for (double& v : trace.values) {
        require(std::isfinite(v), path, ": non-finite brake value");
        require(v >= -1e-9 && v <= 1.0 + 1e-9, path, ": brake intensity ", v,
                " outside [0, 1]; normalize before ingest");
        v = std::min(1.0, std::max(0.0, v));
    }
    // Onsets: rising crossings of the 0.05 intensity level.
    bool below = true;
    for (size_t i = 0; i < trace.values.size(); ++i) {
        if (below && trace.values[i] > 0.05) {
            trace.onset_indices.push_back(i);
            below = false;
        } else if (!below && trace.values[i] < 0.02) {
            below = true;
        }
    }
    validate(rec);
    validate(trace);
    return {std::move(rec), std::move(trace)};
}

} // namespace nbrk
