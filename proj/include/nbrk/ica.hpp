#pragma once

#include "nbrk/types.hpp"

#include <cstdint>
#include <vector>

namespace nbrk {

/// Whitening map: y = matrix * (x - mean) has identity covariance on the
/// fitting data. inverse maps whitened coordinates back (pseudo-inverse when
/// rank-reduced).
struct SpheringTransform {
    Eigen::VectorXd mean;
    Eigen::MatrixXd matrix;  // k x m
    Eigen::MatrixXd inverse; // m x k
};

/// Composed decomposition: sources = unmixing * (X - mean). mixing recovers
/// the channel-space projection of each source (scalp columns).
struct IcaDecomposition {
    Eigen::MatrixXd unmixing; // k x m
    Eigen::MatrixXd mixing;   // m x k
    Eigen::VectorXd mean;     // m
    bool converged = false;
    int iterations = 0;
    double final_entropy_delta = 0.0;
    std::vector<double> entropy_log; // joint-entropy surrogate per epoch

    Eigen::Index n_components() const { return unmixing.rows(); }
    Eigen::Index n_channels() const { return unmixing.cols(); }
};

struct InfomaxConfig {
    uint64_t seed = 0;
    double learning_rate = 0.0; // 0: auto, 1e-3 / ln(channels + 1)
    int batch_size = 256;
    double anneal_factor = 0.9;
    double anneal_angle_deg = 60.0;
    double tolerance = 1e-6; // relative weight change per epoch
    int max_epochs = 512;
};

/// Number of covariance eigenvalues above tol * largest.
Eigen::Index effective_rank(const Eigen::MatrixXd& data, double rel_tol = 1e-10);

/// PCA whitening. rank == 0 demands full rank and throws (naming the
/// deficient rank) otherwise; rank k < channels projects onto the top-k
/// principal subspace before scaling.
std::pair<Eigen::MatrixXd, SpheringTransform> whiten(const Eigen::MatrixXd& data,
                                                     Eigen::Index rank = 0);

/// Natural-gradient infomax (logistic nonlinearity) on whitened data.
/// The sphering transform is composed into the returned decomposition, and
/// the result is canonicalized: unit-variance sources, scalp columns absorb
/// the scale, sign fixed so each column's largest-|.| entry is positive.
IcaDecomposition fit_infomax(const Eigen::MatrixXd& whitened, const InfomaxConfig& cfg,
                             const SpheringTransform& sphering);

/// Convenience: center + whiten (optionally rank-reduced) + fit.
IcaDecomposition fit_ica(const Eigen::MatrixXd& data, const InfomaxConfig& cfg,
                         Eigen::Index rank = 0);

/// S = W * (data - mean); row i is source waveform i.
Eigen::MatrixXd sources(const IcaDecomposition& decomp, const Eigen::MatrixXd& data);

/// Column i of the mixing matrix: per-channel projection weights of source i.
Eigen::VectorXd scalp_column(const IcaDecomposition& decomp, Eigen::Index i);

/// Versioned binary payload (f64, row-major) for the model archive.
std::vector<char> serialize_decomposition(const IcaDecomposition& decomp);
IcaDecomposition deserialize_decomposition(const std::vector<char>& bytes);

} // namespace nbrk
