#include "nbrk/ic_select.hpp"

#include "nbrk/common.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nbrk {

const char* to_string(IcLabel label) {
    switch (label) {
        case IcLabel::Brain: return "brain";
        case IcLabel::Ocular: return "ocular";
        case IcLabel::Muscular: return "muscular";
        case IcLabel::Cardiac: return "cardiac";
        case IcLabel::LineNoise: return "line-noise";
        case IcLabel::ChannelNoise: return "channel-noise";
        case IcLabel::Other: return "other";
    }
    return "other";
}

IcLabel ic_label_from_string(const std::string& s) {
    for (const IcLabel l : {IcLabel::Brain, IcLabel::Ocular, IcLabel::Muscular,
                            IcLabel::Cardiac, IcLabel::LineNoise, IcLabel::ChannelNoise,
                            IcLabel::Other}) {
        if (s == to_string(l)) return l;
    }
    fail("unknown IC label: ", s);
}

bool is_artifact(IcLabel label) {
    return label == IcLabel::Ocular || label == IcLabel::Muscular ||
           label == IcLabel::Cardiac || label == IcLabel::LineNoise ||
           label == IcLabel::ChannelNoise;
}

std::pair<std::vector<double>, std::vector<double>>
pair_delayed(const FeatureSeries& features, const BrakeTrace& brake, double delta_t_ms) {
    require(brake.fs > 0.0, "pair_delayed: brake trace has no sampling rate");
    std::vector<double> f, y;
    for (size_t i = 0; i < features.timestamps_ms.size(); ++i) {
        const double t = features.timestamps_ms[i];
        const auto idx = std::llround((t + delta_t_ms) * brake.fs / 1000.0);
        if (idx < 0 || idx >= static_cast<long long>(brake.values.size())) continue;
        f.push_back(features.values[i]);
        y.push_back(brake.values[static_cast<size_t>(idx)]);
    }
    require(f.size() >= 3, "pair_delayed: only ", f.size(),
            " (feature, delayed-brake) pairs; need at least 3");
    return {std::move(f), std::move(y)};
}

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
    require(x.size() == y.size(), "pearson: length mismatch ", x.size(), " vs ", y.size());
    const size_t n = x.size();
    require(n >= 3, "pearson: need at least 3 points, got ", n);
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    const double r = sxy / std::sqrt(sxx * syy);
    return std::min(1.0, std::max(-1.0, r));
}

IcScore nu_metric(const std::vector<std::optional<double>>& trial_rs, double threshold) {
    require(!trial_rs.empty(), "nu_metric: no trials");
    IcScore s;
    s.n_total = static_cast<int>(trial_rs.size());
    for (const auto& r : trial_rs)
        if (r.has_value() && *r > threshold) ++s.n_strong;
    s.nu = static_cast<double>(s.n_strong) / static_cast<double>(s.n_total);
    return s;
}

std::vector<IcContext> build_ic_contexts(const IcaDecomposition& decomp,
                                         const Eigen::MatrixXd& data, double fs,
                                         const Montage& montage) {
    require(static_cast<Eigen::Index>(montage.size()) == decomp.n_channels(),
            "ic context: montage size ", montage.size(), " vs ", decomp.n_channels(),
            " channels");
    const Eigen::MatrixXd s = sources(decomp, data);
    std::vector<IcContext> out;
    const Eigen::Index max_lag =
        std::min<Eigen::Index>(static_cast<Eigen::Index>(2.0 * fs), s.cols() / 2);
    for (Eigen::Index i = 0; i < decomp.n_components(); ++i) {
        IcContext ctx;
        ctx.scalp = decomp.mixing.col(i);
        ctx.fs = fs;
        ctx.montage = &montage;
        WelchConfig wc; // 500 ms Hamming segments, 50% overlap
        ctx.spectrum = welch_psd(s.row(i).transpose(), fs, wc);
        const Eigen::VectorXd x = s.row(i).transpose();
        const Eigen::VectorXd xc = x.array() - x.mean();
        const double denom = xc.squaredNorm();
        ctx.autocorr.resize(static_cast<size_t>(max_lag), 0.0);
        if (denom > 0.0) {
            for (Eigen::Index lag = 1; lag <= max_lag; ++lag)
                ctx.autocorr[static_cast<size_t>(lag - 1)] =
                    xc.head(xc.size() - lag).dot(xc.tail(xc.size() - lag)) / denom;
        }
        out.push_back(std::move(ctx));
    }
    return out;
}

IcLabel classify_artifact(const IcContext& ctx) {
    const Eigen::VectorXd energy = ctx.scalp.array().square();
    const double total_energy = energy.sum();
    require(total_energy > 0.0, "classify: zero scalp column");
    const double fs = ctx.fs;

    // Channel noise: one electrode carries nearly all projection energy.
    if (energy.maxCoeff() / total_energy >= 0.9) return IcLabel::ChannelNoise;

    const Psd& psd = ctx.spectrum;
    double total_power = 0.0;
    for (const double p : psd.power) total_power += p;
    total_power *= psd.bin_width;
    if (total_power <= 0.0) return IcLabel::Other;

    auto fraction = [&](double lo, double hi) {
        double acc = 0.0;
        for (size_t k = 0; k < psd.freqs.size(); ++k)
            if (psd.freqs[k] >= lo && psd.freqs[k] < hi) acc += psd.power[k];
        return acc * psd.bin_width / total_power;
    };

    // Line noise: concentration around 50 Hz.
    if (fs / 2.0 > 53.0 && fraction(47.0, 53.0) >= 0.5) return IcLabel::LineNoise;

    // Muscular: most power above 20 Hz.
    if (fraction(20.0, fs / 2.0) >= 0.6) return IcLabel::Muscular;

    // Ocular: energy on the two frontal-most electrodes plus delta dominance.
    {
        std::vector<Eigen::Index> by_y(static_cast<size_t>(ctx.scalp.size()));
        for (size_t i = 0; i < by_y.size(); ++i) by_y[i] = static_cast<Eigen::Index>(i);
        std::sort(by_y.begin(), by_y.end(), [&](Eigen::Index a, Eigen::Index b) {
            return ctx.montage->xy[a].y() > ctx.montage->xy[b].y();
        });
        if (by_y.size() >= 2) {
            const double frontal = energy[by_y[0]] + energy[by_y[1]];
            if (frontal / total_energy >= 0.7 && fraction(0.5, 4.0) >= 0.5)
                return IcLabel::Ocular;
        }
    }

    // Cardiac: sharp autocorrelation peak near 1 Hz pseudo-period.
    {
        const size_t lo = static_cast<size_t>(0.6 * fs);
        const size_t hi = std::min(ctx.autocorr.size(), static_cast<size_t>(1.4 * fs));
        if (hi > lo + 1) {
            double peak = -2.0, mean = 0.0;
            for (size_t lag = lo; lag < hi; ++lag) {
                peak = std::max(peak, ctx.autocorr[lag]);
                mean += ctx.autocorr[lag];
            }
            mean /= static_cast<double>(hi - lo);
            if (peak >= 0.4 && peak - mean >= 0.15) return IcLabel::Cardiac;
        }
    }

    // Brain vs other: 1/f character of the spectrum between 2 and 40 Hz.
    {
        std::vector<double> lf, lp;
        for (size_t k = 0; k < psd.freqs.size(); ++k) {
            if (psd.freqs[k] >= 2.0 && psd.freqs[k] <= 40.0 && psd.power[k] > 0.0) {
                lf.push_back(std::log10(psd.freqs[k]));
                lp.push_back(std::log10(psd.power[k]));
            }
        }
        if (lf.size() >= 3) {
            const auto r = pearson(lf, lp);
            if (r.has_value() && *r <= -0.5) return IcLabel::Brain;
        }
    }
    return IcLabel::Other;
}

std::vector<IcScore> score_ics(const std::vector<std::vector<FeatureSeries>>& features,
                               const std::vector<BrakeTrace>& trial_brakes,
                               double delta_t_ms, const std::vector<IcLabel>& labels,
                               double strong_threshold) {
    require(!features.empty(), "score_ics: no ICs");
    require(labels.size() == features.size(), "score_ics: labels size mismatch");
    std::vector<IcScore> scores;
    for (size_t ic = 0; ic < features.size(); ++ic) {
        require(features[ic].size() == trial_brakes.size(),
                "score_ics: IC ", ic, " has ", features[ic].size(), " trials, expected ",
                trial_brakes.size());
        std::vector<std::optional<double>> rs;
        for (size_t trial = 0; trial < trial_brakes.size(); ++trial) {
            const auto [f, y] =
                pair_delayed(features[ic][trial], trial_brakes[trial], delta_t_ms);
            rs.push_back(pearson(f, y));
        }
        IcScore s = nu_metric(rs, strong_threshold);
        s.ic_index = static_cast<int>(ic);
        s.label = labels[ic];
        scores.push_back(s);
    }
    return scores;
}

double nu_percentile(const std::vector<IcScore>& scores, double p) {
    require(!scores.empty(), "nu_percentile: empty score list");
    require(p > 0.0 && p <= 1.0, "nu_percentile: p out of (0, 1]");
    std::vector<double> nus;
    nus.reserve(scores.size());
    for (const auto& s : scores) nus.push_back(s.nu);
    std::sort(nus.begin(), nus.end());
    const size_t rank = static_cast<size_t>(
        std::ceil(p * static_cast<double>(nus.size())));
    return nus[std::max<size_t>(1, rank) - 1];
}

std::vector<int> select_braking_ics(std::vector<IcScore>& scores, double top_fraction) {
    require(!scores.empty(), "select: empty score list");
    require(top_fraction > 0.0 && top_fraction < 1.0, "select: top fraction out of (0, 1)");
    std::vector<IcScore> retained;
    for (auto& s : scores) {
        s.selected = false;
        if (!is_artifact(s.label)) retained.push_back(s);
    }
    if (retained.empty()) return {}; // all ICs artifact-labeled
    const double nu95 = nu_percentile(retained, 1.0 - top_fraction);
    std::vector<int> selected;
    for (auto& s : scores) {
        if (!is_artifact(s.label) && s.nu > nu95) {
            s.selected = true;
            selected.push_back(s.ic_index);
        }
    }
    return selected;
}

void save_scores_csv(const std::vector<IcScore>& scores, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), "cannot open ", path, " for writing");
    out << "ic_index,nu,n_strong,n_total,label,selected\n";
    out.precision(17);
    for (const auto& s : scores)
        out << s.ic_index << "," << s.nu << "," << s.n_strong << "," << s.n_total << ","
            << to_string(s.label) << "," << (s.selected ? 1 : 0) << "\n";
    require(out.good(), "write failure on ", path);
}

std::vector<IcScore> load_scores_csv(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open ", path);
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), path, ": empty scores CSV");
    std::vector<IcScore> scores;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        require(cells.size() == 6, path, ": expected 6 columns, got ", cells.size());
        IcScore s;
        s.ic_index = std::stoi(cells[0]);
        s.nu = std::stod(cells[1]);
        s.n_strong = std::stoi(cells[2]);
        s.n_total = std::stoi(cells[3]);
        s.label = ic_label_from_string(cells[4]);
        s.selected = cells[5] == "1";
        scores.push_back(s);
    }
    return scores;
}

} // namespace nbrk
