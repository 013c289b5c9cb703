#include "nbrk/resample.hpp"

#include "nbrk/common.hpp"

#include <cmath>
#include <numeric>

namespace nbrk {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Windowed-sinc low-pass for the upsampled rate: cutoff as a fraction of the
// upsampled Nyquist, half-length half_len taps per side, Hamming taper, unit
// DC gain before the interpolation-gain factor.
std::vector<double> design_kernel(double cutoff_frac, int half_len, double gain) {
    const int n = 2 * half_len + 1;
    std::vector<double> h(n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const int k = i - half_len;
        const double x = kPi * cutoff_frac * k;
        const double sinc = k == 0 ? 1.0 : std::sin(x) / x;
        const double w = 0.54 - 0.46 * std::cos(2.0 * kPi * i / (n - 1));
        h[i] = cutoff_frac * sinc * w;
        sum += h[i];
    }
    for (double& v : h) v *= gain / sum;
    return h;
}

} // namespace

std::pair<int, int> rational_rate_ratio(double fs, double target_fs) {
    require(fs > 0.0 && target_fs > 0.0, "resample: rates must be positive");
    const double r = target_fs / fs;
    // Continued-fraction convergents of r, denominator capped at 10000.
    long best_p = 0, best_q = 1;
    double best_err = std::numeric_limits<double>::infinity();
    long p0 = 1, q0 = 0, p1 = 0, q1 = 1; // convergent recurrence state
    double x = r;
    for (int iter = 0; iter < 64; ++iter) {
        const double a = std::floor(x);
        const long p2 = static_cast<long>(a) * p0 + p1;
        const long q2 = static_cast<long>(a) * q0 + q1;
        if (p2 > 10000 || q2 > 10000 || p2 < 0 || q2 < 0) break;
        if (q2 > 0) {
            const double err = std::fabs(static_cast<double>(p2) / q2 - r);
            if (err < best_err) {
                best_err = err;
                best_p = p2;
                best_q = q2;
            }
        }
        p1 = p0; q1 = q0; p0 = p2; q0 = q2;
        const double frac = x - a;
        if (frac < 1e-15) break;
        x = 1.0 / frac;
    }
    require(best_p > 0 && best_err <= 1e-9 * r,
            "resample: ", fs, " Hz -> ", target_fs,
            " Hz is not a rational ratio p/q with p, q <= 10000");
    const long g = std::gcd(best_p, best_q);
    return {static_cast<int>(best_p / g), static_cast<int>(best_q / g)};
}

Eigen::VectorXd resample_signal(const Eigen::VectorXd& x, int p, int q) {
    require(p >= 1 && q >= 1, "resample: ratio must be positive");
    if (p == q) return x;
    const Eigen::Index n = x.size();
    require(n >= 2, "resample: signal too short");

    // Cutoff at 0.9 of the narrower Nyquist, expressed in the upsampled rate.
    const double cutoff_frac = 0.9 / std::max(p, q);
    const int half_len = 10 * std::max(p, q);
    const std::vector<double> h = design_kernel(cutoff_frac, half_len, static_cast<double>(p));

    const Eigen::Index out_n = (n * static_cast<Eigen::Index>(p) + q - 1) / q;
    Eigen::VectorXd y(out_n);
    // Output sample k sits at upsampled index k*q; convolve with the kernel
    // centered there. Only upsampled indices that are multiples of p carry
    // input samples, so iterate input-side.
    for (Eigen::Index k = 0; k < out_n; ++k) {
        const long center = static_cast<long>(k) * q;
        const long lo_up = center - half_len;
        const long hi_up = center + half_len;
        long i = lo_up >= 0 ? (lo_up + p - 1) / p : -((-lo_up) / p);
        double acc = 0.0;
        for (; i * static_cast<long>(p) <= hi_up; ++i) {
            if (i < 0 || i >= n) continue;
            const long tap = center - i * static_cast<long>(p) + half_len;
            acc += x[i] * h[static_cast<size_t>(tap)];
        }
        y[k] = acc;
    }
    return y;
}

EegRecording resample(const EegRecording& rec, double target_fs) {
    require(target_fs > 0.0, "resample: target_fs must be positive");
    validate(rec);
    const auto [p, q] = rational_rate_ratio(rec.fs, target_fs);
    if (p == q) {
        EegRecording out = rec;
        out.fs = target_fs;
        return out;
    }
    EegRecording out;
    out.channel_names = rec.channel_names;
    out.electrode_xy = rec.electrode_xy;
    out.fs = target_fs;
    const Eigen::VectorXd first = resample_signal(rec.data.row(0).transpose(), p, q);
    out.data.resize(rec.channels(), first.size());
    out.data.row(0) = first.transpose();
    for (Eigen::Index c = 1; c < rec.channels(); ++c)
        out.data.row(c) = resample_signal(rec.data.row(c).transpose(), p, q).transpose();
    return out;
}

BrakeTrace resample(const BrakeTrace& trace, double target_fs) {
    validate(trace);
    const auto [p, q] = rational_rate_ratio(trace.fs, target_fs);
    BrakeTrace out;
    out.fs = target_fs;
    out.norm_constant = trace.norm_constant;
    if (p == q) {
        out.values = trace.values;
        out.onset_indices = trace.onset_indices;
        return out;
    }
    Eigen::VectorXd x(trace.values.size());
    for (size_t i = 0; i < trace.values.size(); ++i) x[i] = trace.values[i];
    const Eigen::VectorXd y = resample_signal(x, p, q);
    out.values.resize(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i)
        out.values[i] = std::min(1.0, std::max(0.0, y[i]));
    for (const uint64_t idx : trace.onset_indices) {
        const uint64_t mapped = static_cast<uint64_t>(
            std::llround(static_cast<double>(idx) * p / q));
        if (mapped < out.values.size()) out.onset_indices.push_back(mapped);
    }
    return out;
}

} // namespace nbrk
