#include "nbrk/spectral.hpp"

#include "nbrk/common.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <fstream>

namespace nbrk {
namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> make_taper(Taper kind, int n) {
    std::vector<double> w(n, 1.0);
    if (kind == Taper::Hamming && n > 1) {
        for (int i = 0; i < n; ++i)
            w[i] = 0.54 - 0.46 * std::cos(2.0 * kPi * i / (n - 1));
    }
    return w;
}

// One-sided periodogram of a tapered segment, accumulated into acc.
// Normalization: power * bin_width integrates to the segment's mean square.
void accumulate_periodogram(const Eigen::VectorXd& seg, const std::vector<double>& w,
                            double w_sq_sum, double fs, std::vector<double>& acc) {
    const int n = static_cast<int>(seg.size());
    std::vector<double> windowed(n);
    for (int i = 0; i < n; ++i) windowed[i] = seg[i] * w[i];
    static thread_local Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spec;
    fft.fwd(spec, windowed);
    const int n_bins = n / 2 + 1;
    const double scale = 1.0 / (fs * w_sq_sum);
    for (int k = 0; k < n_bins; ++k) {
        double p = std::norm(spec[k]) * scale;
        if (k != 0 && !(n % 2 == 0 && k == n / 2)) p *= 2.0;
        acc[k] += p;
    }
}

} // namespace

Psd welch_psd(const Eigen::VectorXd& signal, double fs, const WelchConfig& cfg) {
    require(fs > 0.0, "welch: fs must be positive");
    require(cfg.overlap_fraction >= 0.0 && cfg.overlap_fraction < 1.0,
            "welch: overlap fraction must lie in [0, 1)");
    const int seg = static_cast<int>(std::llround(cfg.segment_ms * fs / 1000.0));
    require(seg >= 2, "welch: segment of ", cfg.segment_ms, " ms too short at fs ", fs);
    require(signal.size() >= seg, "welch: signal (", signal.size(),
            " samples) shorter than one segment (", seg, ")");
    int step = seg - static_cast<int>(std::llround(cfg.overlap_fraction * seg));
    if (step < 1) step = 1;

    const std::vector<double> w = make_taper(cfg.window, seg);
    double w_sq_sum = 0.0;
    for (const double v : w) w_sq_sum += v * v;

    const int n_bins = seg / 2 + 1;
    std::vector<double> acc(n_bins, 0.0);
    int count = 0;
    for (Eigen::Index start = 0; start + seg <= signal.size(); start += step) {
        accumulate_periodogram(signal.segment(start, seg), w, w_sq_sum, fs, acc);
        ++count;
    }
    Psd psd;
    psd.bin_width = fs / seg;
    psd.freqs.resize(n_bins);
    psd.power.resize(n_bins);
    for (int k = 0; k < n_bins; ++k) {
        psd.freqs[k] = k * psd.bin_width;
        psd.power[k] = acc[k] / count;
    }
    return psd;
}

double band_power(const Psd& psd, const Band& band) {
    require(band.first >= 0.0 && band.first < band.second, "band_power: bad band [",
            band.first, ", ", band.second, ")");
    double sum = 0.0;
    int hits = 0;
    for (size_t k = 0; k < psd.freqs.size(); ++k) {
        if (psd.freqs[k] >= band.first && psd.freqs[k] < band.second) {
            sum += psd.power[k];
            ++hits;
        }
    }
    require(hits > 0, "band_power: no PSD bins inside [", band.first, ", ",
            band.second, ") at resolution ", psd.bin_width, " Hz");
    return sum * psd.bin_width;
}

FeatureSeries sliding_band_power(const Eigen::VectorXd& signal, double fs,
                                 double window_ms, double step_ms, const Band& band) {
    const Eigen::Index win = static_cast<Eigen::Index>(std::llround(window_ms * fs / 1000.0));
    const Eigen::Index step = static_cast<Eigen::Index>(std::llround(step_ms * fs / 1000.0));
    require(win >= 2 && step >= 1, "sliding_band_power: degenerate window/step");
    require(signal.size() >= win, "sliding_band_power: signal (", signal.size(),
            " samples) shorter than one window (", win, ")");
    // Within one feature window Welch degenerates to a single periodogram.
    WelchConfig wc;
    wc.segment_ms = window_ms;
    wc.overlap_fraction = 0.0;
    FeatureSeries out;
    out.window_ms = window_ms;
    out.step_ms = step_ms;
    out.band = band;
    for (Eigen::Index start = 0; start + win <= signal.size(); start += step) {
        const Psd psd = welch_psd(signal.segment(start, win), fs, wc);
        out.values.push_back(band_power(psd, band));
        out.timestamps_ms.push_back(static_cast<double>(start + win) * 1000.0 / fs);
    }
    return out;
}

TimeFreqMap ersp(const std::vector<Epoch>& epochs, Eigen::Index channel,
                 const std::vector<double>& freqs_hz,
                 std::pair<double, double> baseline_ms, double window_ms,
                 double step_ms) {
    require(!epochs.empty(), "ersp: no epochs");
    require(baseline_ms.first < baseline_ms.second && baseline_ms.second <= 0.0,
            "ersp: baseline interval must be pre-onset");
    const double fs = epochs[0].fs;
    const Eigen::Index n = epochs[0].eeg.cols();
    const Eigen::Index t0 = epochs[0].t0_index;
    const Eigen::Index win = static_cast<Eigen::Index>(std::llround(window_ms * fs / 1000.0));
    const Eigen::Index step = static_cast<Eigen::Index>(std::llround(step_ms * fs / 1000.0));
    require(n >= win, "ersp: epoch shorter than analysis window");

    // Short-time Welch: half-window segments, 50% overlap (3 periodograms).
    WelchConfig wc;
    wc.segment_ms = window_ms / 2.0;
    wc.overlap_fraction = 0.5;

    TimeFreqMap map;
    map.freqs_hz = freqs_hz;
    std::vector<Eigen::Index> starts;
    for (Eigen::Index start = 0; start + win <= n; start += step) {
        starts.push_back(start);
        map.times_ms.push_back((start + win / 2.0 - t0) * 1000.0 / fs);
    }
    const size_t n_t = starts.size();
    const size_t n_f = freqs_hz.size();
    require(n_t > 0 && n_f > 0, "ersp: empty analysis grid");

    // Trial-averaged power per (time, freq) cell; freq maps to nearest bin.
    Eigen::MatrixXd mean_power = Eigen::MatrixXd::Zero(n_t, n_f);
    for (const Epoch& e : epochs) {
        require(e.eeg.cols() == n && e.t0_index == t0 && channel < e.eeg.rows(),
                "ersp: epochs must share shape; channel index must be valid");
        for (size_t ti = 0; ti < n_t; ++ti) {
            const Psd psd =
                welch_psd(e.eeg.row(channel).segment(starts[ti], win).transpose(), fs, wc);
            for (size_t fi = 0; fi < n_f; ++fi) {
                const auto bin = static_cast<size_t>(std::min<long long>(
                    static_cast<long long>(psd.freqs.size()) - 1,
                    std::llround(freqs_hz[fi] / psd.bin_width)));
                mean_power(ti, fi) += psd.power[bin];
            }
        }
    }
    mean_power /= static_cast<double>(epochs.size());

    // Baseline: mean over windows whose center lies in the baseline interval.
    Eigen::VectorXd baseline = Eigen::VectorXd::Zero(n_f);
    int n_base = 0;
    for (size_t ti = 0; ti < n_t; ++ti) {
        if (map.times_ms[ti] >= baseline_ms.first && map.times_ms[ti] <= baseline_ms.second) {
            baseline += mean_power.row(ti).transpose();
            ++n_base;
        }
    }
    require(n_base > 0, "ersp: no analysis windows inside the baseline interval [",
            baseline_ms.first, ", ", baseline_ms.second, "] ms");
    baseline /= n_base;
    for (size_t fi = 0; fi < n_f; ++fi)
        require(baseline[fi] > 0.0, "ersp: zero baseline power at ", freqs_hz[fi], " Hz");

    map.values.resize(n_t, n_f);
    for (size_t ti = 0; ti < n_t; ++ti)
        for (size_t fi = 0; fi < n_f; ++fi)
            map.values(ti, fi) = 10.0 * std::log10(mean_power(ti, fi) / baseline[fi]);
    return map;
}

void save_feature_csv(const FeatureSeries& series, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), "cannot open ", path, " for writing");
    out << "time_ms,value\n";
    out.precision(17);
    for (size_t i = 0; i < series.timestamps_ms.size(); ++i)
        out << series.timestamps_ms[i] << "," << series.values[i] << "\n";
    require(out.good(), "write failure on ", path);
}

FeatureSeries load_feature_csv(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open ", path);
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), path, ": empty feature CSV");
    FeatureSeries s;
    size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto comma = line.find(',');
        require(comma != std::string::npos, path, ": row ", row, ": expected time_ms,value");
        try {
            s.timestamps_ms.push_back(std::stod(line.substr(0, comma)));
            s.values.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            fail(path, ": row ", row, ": not numeric: ", line);
        }
    }
    require(s.timestamps_ms.size() >= 2, path, ": feature CSV needs at least 2 rows");
    s.step_ms = s.timestamps_ms[1] - s.timestamps_ms[0];
    return s;
}

void save_timefreq_csv(const TimeFreqMap& map, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), "cannot open ", path, " for writing");
    out << "time_ms";
    for (const double f : map.freqs_hz) out << ",f" << f;
    out << "\n";
    out.precision(17);
    for (Eigen::Index t = 0; t < map.values.rows(); ++t) {
        out << map.times_ms[t];
        for (Eigen::Index f = 0; f < map.values.cols(); ++f) out << "," << map.values(t, f);
        out << "\n";
    }
    require(out.good(), "write failure on ", path);
}

} // namespace nbrk
