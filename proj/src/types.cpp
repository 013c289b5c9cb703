#include "nbrk/types.hpp"

#include "nbrk/common.hpp"

namespace nbrk {

void validate(const EegRecording& rec) {
    require(rec.fs > 0.0, "recording: fs must be positive, got ", rec.fs);
    require(static_cast<Eigen::Index>(rec.channel_names.size()) == rec.data.rows(),
            "recording: channel count ", rec.channel_names.size(),
            " does not match data rows ", rec.data.rows());
    require(rec.electrode_xy.size() == rec.channel_names.size(),
            "recording: electrode_xy size ", rec.electrode_xy.size(),
            " does not match channel count ", rec.channel_names.size());
    for (size_t i = 0; i < rec.electrode_xy.size(); ++i) {
        const auto& p = rec.electrode_xy[i];
        require(std::isfinite(p.x()) && std::isfinite(p.y()) &&
                    p.squaredNorm() <= 1.0 + 1e-9,
                "recording: electrode ", rec.channel_names[i],
                " lies outside the unit disk");
    }
    require(rec.data.allFinite(), "recording: non-finite sample values");
}

void validate(const BrakeTrace& trace) {
    require(trace.fs > 0.0, "brake trace: fs must be positive, got ", trace.fs);
    uint64_t prev = 0;
    bool first = true;
    for (const uint64_t idx : trace.onset_indices) {
        require(idx < trace.values.size(), "brake trace: onset index ", idx,
                " out of range (", trace.values.size(), " samples)");
        require(first || idx > prev, "brake trace: onset indices not strictly increasing");
        prev = idx;
        first = false;
    }
    for (const double v : trace.values) {
        require(std::isfinite(v) && v >= 0.0 && v <= 1.0,
                "brake trace: value ", v, " outside [0, 1]");
    }
}

void validate(const Epoch& epoch) {
    require(epoch.fs > 0.0, "epoch: fs must be positive");
    require(epoch.eeg.cols() == static_cast<Eigen::Index>(epoch.brake.size()),
            "epoch: eeg sample count ", epoch.eeg.cols(),
            " does not match brake sample count ", epoch.brake.size());
    require(epoch.t0_index >= 0 && epoch.t0_index < epoch.eeg.cols(),
            "epoch: t0_index ", epoch.t0_index, " out of range");
    require(epoch.eeg.allFinite(), "epoch: non-finite eeg values");
}

} // namespace nbrk
