#pragma once

#include "nbrk/types.hpp"

namespace nbrk {

/// Best rational approximation p/q of target_fs/fs with p, q <= 10000.
/// Throws if no such ratio reproduces the target rate to 1e-9 relative.
std::pair<int, int> rational_rate_ratio(double fs, double target_fs);

/// Rational-ratio resampling of one signal row: upsample by p, linear-phase
/// Hamming-sinc low-pass at 0.9 of the narrower Nyquist, decimate by q.
Eigen::VectorXd resample_signal(const Eigen::VectorXd& x, int p, int q);

EegRecording resample(const EegRecording& rec, double target_fs);
BrakeTrace resample(const BrakeTrace& trace, double target_fs);

} // namespace nbrk
