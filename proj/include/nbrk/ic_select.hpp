#pragma once

#include "nbrk/ica.hpp"
#include "nbrk/montage.hpp"
#include "nbrk/spectral.hpp"
#include "nbrk/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace nbrk {

enum class IcLabel { Brain, Ocular, Muscular, Cardiac, LineNoise, ChannelNoise, Other };

const char* to_string(IcLabel label);
IcLabel ic_label_from_string(const std::string& s);

/// True if the label is one of the five definitive artifact categories
/// (Brain and Other are retained for selection).
bool is_artifact(IcLabel label);

struct TrialCorrelation {
    int ic_index = 0;
    int trial_index = 0;
    double delta_t_ms = 0.0;
    std::optional<double> r; // nullopt: undefined (zero variance)
    int n_pairs = 0;
};

struct IcScore {
    int ic_index = 0;
    double nu = 0.0;
    int n_strong = 0;
    int n_total = 0;
    IcLabel label = IcLabel::Brain;
    bool selected = false;
};

/// (feature(t), brake(t + delta_t)) pairs in timestamp order.
std::pair<std::vector<double>, std::vector<double>>
pair_delayed(const FeatureSeries& features, const BrakeTrace& brake, double delta_t_ms);

/// Product-moment correlation; nullopt when either side has zero variance.
std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y);

/// nu = n_strong / n_total with r > threshold strictly; undefined correlations
/// count toward n_total only.
IcScore nu_metric(const std::vector<std::optional<double>>& trial_rs,
                  double threshold = 0.6);

/// Evidence handed to the heuristic classifier for one IC.
struct IcContext {
    Eigen::VectorXd scalp;          // mixing column, one weight per channel
    Psd spectrum;                   // Welch PSD of the source waveform
    std::vector<double> autocorr;   // normalized autocorrelation, lag 1..max
    double fs = 0.0;
    const Montage* montage = nullptr;
};

std::vector<IcContext> build_ic_contexts(const IcaDecomposition& decomp,
                                         const Eigen::MatrixXd& data, double fs,
                                         const Montage& montage);

/// Deterministic heuristic with ICLabel's seven-label contract. Rules, in
/// order: single-channel dominance -> channel-noise; ~50 Hz concentration ->
/// line-noise; >=60% power above 20 Hz -> muscular; >=70% scalp energy on the
/// two frontal-most channels with a delta-dominant spectrum -> ocular;
/// sharp ~1 Hz autocorrelation peak -> cardiac; otherwise a log-log 1/f fit
/// separates brain from other.
IcLabel classify_artifact(const IcContext& ctx);

/// Per-IC trial correlations at one horizon; features[ic][trial].
std::vector<IcScore> score_ics(const std::vector<std::vector<FeatureSeries>>& features,
                               const std::vector<BrakeTrace>& trial_brakes,
                               double delta_t_ms, const std::vector<IcLabel>& labels,
                               double strong_threshold = 0.6);

/// Top-5% selection among non-artifact ICs: nearest-rank 95th percentile of
/// nu, strict inequality. Marks `selected` in place and returns the indices.
std::vector<int> select_braking_ics(std::vector<IcScore>& scores,
                                    double top_fraction = 0.05);

/// Nearest-rank percentile (p in (0,1]) of the nu values of the given scores.
double nu_percentile(const std::vector<IcScore>& scores, double p);

void save_scores_csv(const std::vector<IcScore>& scores, const std::string& path);
std::vector<IcScore> load_scores_csv(const std::string& path);

} // namespace nbrk
