#pragma once

#include "nbrk/types.hpp"

#include <string>
#include <utility>
#include <vector>

namespace nbrk {

enum class Taper { Hamming, Boxcar };

struct WelchConfig {
    double segment_ms = 500.0;
    double overlap_fraction = 0.5;
    Taper window = Taper::Hamming;
};

/// One-sided power spectral density, uV^2/Hz; bin_width = fs / segment_samples.
struct Psd {
    std::vector<double> freqs;
    std::vector<double> power;
    double bin_width = 0.0;
};

using Band = std::pair<double, double>; // [low, high) Hz

/// Sliding-window band power: timestamps are window right edges in ms.
struct FeatureSeries {
    std::vector<double> timestamps_ms;
    std::vector<double> values;
    double window_ms = 0.0;
    double step_ms = 0.0;
    Band band{0.0, 0.0};
};

/// Baseline-normalized time-frequency map in dB; times are ms from onset.
struct TimeFreqMap {
    std::vector<double> times_ms;
    std::vector<double> freqs_hz;
    Eigen::MatrixXd values; // times x freqs
};

Psd welch_psd(const Eigen::VectorXd& signal, double fs, const WelchConfig& cfg);

double band_power(const Psd& psd, const Band& band);

FeatureSeries sliding_band_power(const Eigen::VectorXd& signal, double fs,
                                 double window_ms, double step_ms, const Band& band);

/// Grand-average ERSP for one channel across epochs: per (time, freq) cell,
/// 10*log10 of trial-mean short-time power over the baseline mean at that
/// frequency. baseline_ms is an interval relative to onset, pre-onset.
TimeFreqMap ersp(const std::vector<Epoch>& epochs, Eigen::Index channel,
                 const std::vector<double>& freqs_hz,
                 std::pair<double, double> baseline_ms, double window_ms = 500.0,
                 double step_ms = 50.0);

void save_feature_csv(const FeatureSeries& series, const std::string& path);
FeatureSeries load_feature_csv(const std::string& path);
void save_timefreq_csv(const TimeFreqMap& map, const std::string& path);

} // namespace nbrk
