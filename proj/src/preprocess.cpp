#include "nbrk/preprocess.hpp"

#include "nbrk/common.hpp"

#include <cmath>

namespace nbrk {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Even-order (type I) Hamming-windowed sinc, unit DC gain. The order follows
// 4 * fs / transition_width with the transition set to an eighth of the
// headroom between cutoff and the nearer band edge, which puts 50 Hz well
// into the stopband for the default 45 Hz @ 200 Hz configuration.
std::vector<double> design_lowpass(double fs, double cutoff_hz) {
    const double transition =
        std::max(1.0, std::min(cutoff_hz, fs / 2.0 - cutoff_hz) / 8.0);
    int order = static_cast<int>(std::ceil(4.0 * fs / transition));
    if (order % 2 != 0) ++order;
    const int n = order + 1;
    std::vector<double> h(n);
    const double fc = cutoff_hz / fs; // cycles per sample
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const int k = i - order / 2;
        const double sinc = k == 0 ? 1.0 : std::sin(2.0 * kPi * fc * k) / (kPi * k);
        const double w = 0.54 - 0.46 * std::cos(2.0 * kPi * i / (n - 1));
        h[i] = (k == 0 ? 2.0 * fc : sinc) * w;
        sum += h[i];
    }
    for (double& v : h) v /= sum;
    return h;
}

// Convolution with odd-symmetric edge extension (2*x[edge] - x[mirror]),
// which keeps constants and slow trends transient-free at the boundaries.
Eigen::VectorXd conv_reflect(const Eigen::VectorXd& x, const std::vector<double>& h) {
    const Eigen::Index n = x.size();
    const Eigen::Index half = static_cast<Eigen::Index>(h.size()) / 2;
    auto sample = [&](Eigen::Index i) -> double {
        if (i < 0) return 2.0 * x[0] - x[std::min(n - 1, -i)];
        if (i >= n) return 2.0 * x[n - 1] - x[std::max<Eigen::Index>(0, 2 * n - 2 - i)];
        return x[i];
    };
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double acc = 0.0;
        for (size_t j = 0; j < h.size(); ++j)
            acc += h[j] * sample(i + half - static_cast<Eigen::Index>(j));
        y[i] = acc;
    }
    return y;
}

} // namespace

Eigen::VectorXd lowpass_signal(const Eigen::VectorXd& x, double fs, double cutoff_hz) {
    require(cutoff_hz > 0.0 && cutoff_hz < fs / 2.0, "lowpass: cutoff ", cutoff_hz,
            " Hz out of range (0, ", fs / 2.0, ")");
    const auto h = design_lowpass(fs, cutoff_hz);
    // Forward-backward pass: zero net group delay, squared magnitude response.
    Eigen::VectorXd fwd = conv_reflect(x, h);
    Eigen::VectorXd rev = fwd.reverse();
    Eigen::VectorXd back = conv_reflect(rev, h);
    return back.reverse();
}

EegRecording lowpass_filter(const EegRecording& rec, double cutoff_hz) {
    validate(rec);
    require(cutoff_hz > 0.0 && cutoff_hz < rec.fs / 2.0, "lowpass: cutoff ", cutoff_hz,
            " Hz out of range (0, ", rec.fs / 2.0, ")");
    EegRecording out = rec;
    for (Eigen::Index c = 0; c < rec.channels(); ++c)
        out.data.row(c) =
            lowpass_signal(rec.data.row(c).transpose(), rec.fs, cutoff_hz).transpose();
    return out;
}

EpochingResult make_epochs(const EegRecording& rec, const BrakeTrace& trace,
                           const PreprocessConfig& cfg) {
    validate(rec);
    validate(trace);
    require(cfg.epoch_pre_ms > 0.0 && cfg.epoch_post_ms > 0.0,
            "epoching: pre/post margins must be positive");
    require(std::fabs(rec.fs - trace.fs) < 1e-9,
            "epoching: EEG fs ", rec.fs, " and brake fs ", trace.fs,
            " differ; resample first");
    const Eigen::Index n_pre =
        static_cast<Eigen::Index>(std::llround(cfg.epoch_pre_ms * rec.fs / 1000.0));
    const Eigen::Index n_post =
        static_cast<Eigen::Index>(std::llround(cfg.epoch_post_ms * rec.fs / 1000.0));
    const Eigen::Index len = n_pre + n_post;

    EpochingResult result;
    const Eigen::Index n = std::min<Eigen::Index>(rec.samples(), trace.values.size());
    for (const uint64_t onset : trace.onset_indices) {
        const Eigen::Index o = static_cast<Eigen::Index>(onset);
        if (o - n_pre < 0 || o + n_post > n) {
            ++result.skipped_onsets;
            continue;
        }
        Epoch e;
        e.fs = rec.fs;
        e.t0_index = n_pre;
        e.eeg = rec.data.middleCols(o - n_pre, len);
        e.brake.assign(trace.values.begin() + (o - n_pre),
                       trace.values.begin() + (o - n_pre) + len);
        result.epochs.push_back(std::move(e));
    }
    require(!result.epochs.empty(), "epoching: zero usable onsets (",
            result.skipped_onsets, " skipped for missing margin)");
    return result;
}

Epoch baseline_correct(const Epoch& epoch, double from_ms, double to_ms) {
    validate(epoch);
    require(from_ms < to_ms, "baseline: empty window [", from_ms, ", ", to_ms, "] ms");
    const Eigen::Index lo =
        epoch.t0_index + static_cast<Eigen::Index>(std::llround(from_ms * epoch.fs / 1000.0));
    const Eigen::Index hi =
        epoch.t0_index + static_cast<Eigen::Index>(std::llround(to_ms * epoch.fs / 1000.0));
    require(lo >= 0 && hi <= epoch.t0_index && hi > lo,
            "baseline: window [", from_ms, ", ", to_ms,
            "] ms falls outside the pre-onset part of the epoch");
    Epoch out = epoch;
    const Eigen::VectorXd means =
        epoch.eeg.middleCols(lo, hi - lo).rowwise().mean();
    out.eeg = epoch.eeg.colwise() - means;
    return out;
}

Epoch common_average_reference(const Epoch& epoch) {
    validate(epoch);
    require(epoch.eeg.rows() >= 2, "CAR: needs at least 2 channels, got ",
            epoch.eeg.rows());
    Epoch out = epoch;
    const Eigen::RowVectorXd col_means = epoch.eeg.colwise().mean();
    out.eeg = epoch.eeg.rowwise() - col_means;
    return out;
}

EpochingResult preprocess_pipeline(const EegRecording& rec, const BrakeTrace& trace,
                                   const PreprocessConfig& cfg) {
    const EegRecording filtered = lowpass_filter(rec, cfg.lowpass_cutoff_hz);
    EpochingResult result = make_epochs(filtered, trace, cfg);
    for (Epoch& e : result.epochs) {
        e = baseline_correct(e, cfg.baseline_from_ms, cfg.baseline_to_ms);
        if (cfg.apply_car) e = common_average_reference(e);
    }
    return result;
}

} // namespace nbrk
