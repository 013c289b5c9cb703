#pragma once

#include "nbrk/montage.hpp"
#include "nbrk/types.hpp"

#include <string>
#include <utility>

namespace nbrk {

/// Binary trial-file layout (little-endian), version 1:
///   magic "NBRK" | version u32 | fs f64 | brake_norm f64
///   | channel count u32 | sample count u32
///   | per channel: name length u32 + UTF-8 bytes
///   | electrode_xy: channel count x (f64, f64)
///   | EEG samples, channel-major f32
///   | brake sample count u32 | brake samples f32
///   | onset count u32 | onset indices u64
/// brake_norm is the pedal-unit value that maps to intensity 1.0.
struct TrialFormat {
    static constexpr uint32_t version = 1;
    static constexpr char magic[5] = "NBRK";

    /// Exact byte size of a file with the given shape (for size audits).
    static size_t file_size(const std::vector<std::string>& channel_names,
                            size_t samples, size_t brake_samples, size_t onsets);
};

void save_recording(const EegRecording& rec, const BrakeTrace& trace,
                    const std::string& path);

std::pair<EegRecording, BrakeTrace> load_recording(const std::string& path);

/// CSV ingest: header row of channel names with a final "brake" column, one
/// row per sample. Electrode positions come from the standard montage (or an
/// explicit montage for non-standard labels); onsets are rising crossings of
/// the 0.05 intensity level.
std::pair<EegRecording, BrakeTrace> load_recording_csv(const std::string& path, double fs,
                                                       const Montage* montage = nullptr);

} // namespace nbrk
