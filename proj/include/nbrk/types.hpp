#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace nbrk {

/// Multichannel EEG time series. data is channels x samples, microvolts.
/// electrode_xy holds unit-disk coordinates (azimuthal projection, +y = nose).
struct EegRecording {
    std::vector<std::string> channel_names;
    std::vector<Eigen::Vector2d> electrode_xy;
    double fs = 0.0;
    Eigen::MatrixXd data;

    Eigen::Index channels() const { return data.rows(); }
    Eigen::Index samples() const { return data.cols(); }
};

/// Braking intensity in [0,1] plus the sample indices of pedal activation.
struct BrakeTrace {
    double fs = 0.0;
    std::vector<double> values;
    std::vector<uint64_t> onset_indices;
    /// Original pedal units corresponding to intensity 1.0 (1.0 if the
    /// source was already normalized).
    double norm_constant = 1.0;
};

/// One +-window cut around a braking onset. eeg and brake share the sample
/// grid; t0_index is the onset sample within the epoch.
struct Epoch {
    Eigen::MatrixXd eeg;
    std::vector<double> brake;
    Eigen::Index t0_index = 0;
    double fs = 0.0;
};

/// Throw nbrk::Error if any structural invariant is violated.
void validate(const EegRecording& rec);
void validate(const BrakeTrace& trace);
void validate(const Epoch& epoch);

} // namespace nbrk
