#pragma once

#include "nbrk/types.hpp"

#include <vector>

namespace nbrk {

struct PreprocessConfig {
    double lowpass_cutoff_hz = 45.0;
    double epoch_pre_ms = 1500.0;
    double epoch_post_ms = 1500.0;
    double baseline_from_ms = -1500.0; // relative to onset
    double baseline_to_ms = -1300.0;
    bool apply_car = true;
};

/// Zero-phase low-pass: even-order Hamming-sinc FIR applied forward-backward.
EegRecording lowpass_filter(const EegRecording& rec, double cutoff_hz);

/// Forward-backward FIR on a single signal (exposed for feature paths).
Eigen::VectorXd lowpass_signal(const Eigen::VectorXd& x, double fs, double cutoff_hz);

struct EpochingResult {
    std::vector<Epoch> epochs;
    int skipped_onsets = 0; // onsets without full pre/post margin
};

EpochingResult make_epochs(const EegRecording& rec, const BrakeTrace& trace,
                           const PreprocessConfig& cfg);

Epoch baseline_correct(const Epoch& epoch, double from_ms, double to_ms);

Epoch common_average_reference(const Epoch& epoch);

/// Full chain of the standard pipeline: filter -> epoch -> baseline -> CAR.
EpochingResult preprocess_pipeline(const EegRecording& rec, const BrakeTrace& trace,
                                   const PreprocessConfig& cfg);

} // namespace nbrk
