#include "nbrk/ica.hpp"

#include "nbrk/common.hpp"
#include "nbrk/rng.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <cstring>

namespace nbrk {
namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::MatrixXd covariance(const Eigen::MatrixXd& centered) {
    return centered * centered.transpose() / static_cast<double>(centered.cols() - 1);
}

// Joint-entropy surrogate of Eq. H(s) = E[ln |det J|] - E[ln f_x(x)]: the
// data term is constant in W, so we track ln|det W| + mean_t sum_i ln g'(u_i)
// with g the logistic.
double entropy_surrogate(const Eigen::MatrixXd& w, const Eigen::VectorXd& bias,
                         const Eigen::MatrixXd& x) {
    const double logdet = w.partialPivLu().matrixLU().diagonal().array().abs().log().sum();
    double acc = 0.0;
    const Eigen::Index n = x.cols();
    const Eigen::Index block = 4096;
    for (Eigen::Index start = 0; start < n; start += block) {
        const Eigen::Index len = std::min(block, n - start);
        const Eigen::MatrixXd u =
            (w * x.middleCols(start, len)).colwise() + bias;
        // ln g'(u) = ln(y(1-y)) = -u - 2 ln(1 + e^{-u}) evaluated stably.
        acc += (-u.array() - 2.0 * (1.0 + (-u.array()).exp()).log()).sum();
    }
    return logdet + acc / static_cast<double>(n);
}

} // namespace

Eigen::Index effective_rank(const Eigen::MatrixXd& data, double rel_tol) {
    const Eigen::MatrixXd centered = data.colwise() - data.rowwise().mean();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(covariance(centered));
    const Eigen::VectorXd evals = es.eigenvalues();
    const double top = evals.maxCoeff();
    if (top <= 0.0) return 0;
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < evals.size(); ++i)
        if (evals[i] > rel_tol * top) ++rank;
    return rank;
}

std::pair<Eigen::MatrixXd, SpheringTransform> whiten(const Eigen::MatrixXd& data,
                                                     Eigen::Index rank) {
    const Eigen::Index m = data.rows();
    require(data.cols() > m, "whiten: need more samples (", data.cols(),
            ") than channels (", m, ")");
    require(rank >= 0 && rank <= m, "whiten: requested rank ", rank, " out of range");

    SpheringTransform t;
    t.mean = data.rowwise().mean();
    const Eigen::MatrixXd centered = data.colwise() - t.mean;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(covariance(centered));
    require(es.info() == Eigen::Success, "whiten: eigendecomposition failed");
    const Eigen::VectorXd evals = es.eigenvalues(); // ascending
    const Eigen::MatrixXd evecs = es.eigenvectors();
    const double top = evals[m - 1];
    require(top > 0.0, "whiten: zero covariance");

    Eigen::Index full_rank = 0;
    for (Eigen::Index i = 0; i < m; ++i)
        if (evals[i] > 1e-10 * top) ++full_rank;
    if (rank == 0) {
        require(full_rank == m, "whiten: rank-deficient covariance (rank ", full_rank,
                " of ", m, "); drop a channel or request rank-reduced whitening");
        rank = m;
    } else {
        require(rank <= full_rank, "whiten: requested rank ", rank,
                " exceeds covariance rank ", full_rank);
    }

    // Top `rank` eigenpairs, descending.
    t.matrix.resize(rank, m);
    t.inverse.resize(m, rank);
    for (Eigen::Index i = 0; i < rank; ++i) {
        const Eigen::Index src = m - 1 - i;
        const double scale = std::sqrt(evals[src]);
        t.matrix.row(i) = evecs.col(src).transpose() / scale;
        t.inverse.col(i) = evecs.col(src) * scale;
    }
    return {t.matrix * centered, t};
}

IcaDecomposition fit_infomax(const Eigen::MatrixXd& whitened, const InfomaxConfig& cfg,
                             const SpheringTransform& sphering) {
    const Eigen::Index k = whitened.rows();
    const Eigen::Index n = whitened.cols();
    require(k >= 1 && n > k, "infomax: bad data shape ", k, "x", n);
    require(cfg.batch_size >= 8, "infomax: batch size too small");
    require(sphering.matrix.rows() == k, "infomax: sphering rank mismatch");

    const double lr0 =
        cfg.learning_rate > 0.0 ? cfg.learning_rate : 1e-3 / std::log(static_cast<double>(k) + 1.0);
    double lr = lr0;

    Eigen::MatrixXd w = Eigen::MatrixXd::Identity(k, k);
    Eigen::VectorXd bias = Eigen::VectorXd::Zero(k);
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(k, k);

    Rng rng(cfg.seed);
    std::vector<Eigen::Index> order(n);
    for (Eigen::Index i = 0; i < n; ++i) order[i] = i;

    IcaDecomposition d;
    Eigen::MatrixXd prev_delta;
    double prev_entropy = 0.0;
    bool have_prev_entropy = false;
    Eigen::MatrixXd batch(k, cfg.batch_size);

    int epoch = 0;
    for (; epoch < cfg.max_epochs; ++epoch) {
        rng.shuffle(order);
        const Eigen::MatrixXd w_start = w;
        for (Eigen::Index pos = 0; pos < n; pos += cfg.batch_size) {
            const Eigen::Index len = std::min<Eigen::Index>(cfg.batch_size, n - pos);
            batch.resize(k, len);
            for (Eigen::Index j = 0; j < len; ++j) batch.col(j) = whitened.col(order[pos + j]);

            const Eigen::MatrixXd u = (w * batch).colwise() + bias;
            // y = g(u) with logistic g; natural-gradient ascent on H(s):
            //   dW = lr * (I + (1 - 2y) u^T / B) W,  db = lr * mean(1 - 2y).
            const Eigen::ArrayXXd one_minus_2y =
                1.0 - 2.0 / (1.0 + (-u.array()).exp());
            const Eigen::MatrixXd grad =
                eye + (one_minus_2y.matrix() * u.transpose()) / static_cast<double>(len);
            w += lr * grad * w;
            bias += lr * one_minus_2y.rowwise().mean().matrix();

            const double norm = w.norm();
            if (!std::isfinite(norm) || norm > 1e9)
                fail("infomax: weights diverged at epoch ", epoch,
                     "; retry with a smaller learning rate");
        }

        const Eigen::MatrixXd delta = w - w_start;
        const double change = delta.norm() / std::max(1e-300, w_start.norm());
        if (prev_delta.size() > 0) {
            const double dot = (delta.array() * prev_delta.array()).sum();
            const double cosang = dot / std::max(1e-300, delta.norm() * prev_delta.norm());
            if (cosang < std::cos(cfg.anneal_angle_deg * kPi / 180.0)) lr *= cfg.anneal_factor;
        }
        prev_delta = delta;

        const double h = entropy_surrogate(w, bias, whitened);
        d.entropy_log.push_back(h);
        if (have_prev_entropy) d.final_entropy_delta = h - prev_entropy;
        prev_entropy = h;
        have_prev_entropy = true;

        if (change < cfg.tolerance) {
            d.converged = true;
            ++epoch;
            break;
        }
    }
    d.iterations = epoch;

    // Compose with sphering, then canonicalize scale and sign.
    d.mean = sphering.mean;
    d.unmixing = w * sphering.matrix; // k x m
    Eigen::MatrixXd a = sphering.inverse * w.inverse(); // m x k
    // Source variances on the fitting data: rows of (w * whitened).
    const Eigen::MatrixXd s_fit = w * whitened;
    for (Eigen::Index i = 0; i < k; ++i) {
        const double var = s_fit.row(i).squaredNorm() / static_cast<double>(n) -
                           std::pow(s_fit.row(i).mean(), 2);
        const double sd = std::sqrt(std::max(var, 1e-300));
        d.unmixing.row(i) /= sd;
        a.col(i) *= sd;
        Eigen::Index argmax = 0;
        a.col(i).cwiseAbs().maxCoeff(&argmax);
        if (a(argmax, i) < 0.0) {
            a.col(i) = -a.col(i);
            d.unmixing.row(i) = -d.unmixing.row(i);
        }
    }
    d.mixing = a;
    return d;
}

IcaDecomposition fit_ica(const Eigen::MatrixXd& data, const InfomaxConfig& cfg,
                         Eigen::Index rank) {
    auto [whitened, sphering] = whiten(data, rank);
    return fit_infomax(whitened, cfg, sphering);
}

Eigen::MatrixXd sources(const IcaDecomposition& decomp, const Eigen::MatrixXd& data) {
    require(data.rows() == decomp.n_channels(), "sources: data has ", data.rows(),
            " channels, decomposition expects ", decomp.n_channels());
    return decomp.unmixing * (data.colwise() - decomp.mean);
}

Eigen::VectorXd scalp_column(const IcaDecomposition& decomp, Eigen::Index i) {
    require(i >= 0 && i < decomp.n_components(), "scalp_column: IC index ", i,
            " out of range [0, ", decomp.n_components(), ")");
    return decomp.mixing.col(i);
}

namespace {

void put_matrix(std::vector<char>& out, const Eigen::MatrixXd& m) {
    const uint32_t rows = static_cast<uint32_t>(m.rows());
    const uint32_t cols = static_cast<uint32_t>(m.cols());
    const size_t base = out.size();
    out.resize(base + 8 + rows * cols * 8);
    std::memcpy(out.data() + base, &rows, 4);
    std::memcpy(out.data() + base + 4, &cols, 4);
    size_t off = base + 8;
    for (uint32_t r = 0; r < rows; ++r)
        for (uint32_t c = 0; c < cols; ++c, off += 8) {
            const double v = m(r, c);
            std::memcpy(out.data() + off, &v, 8);
        }
}

Eigen::MatrixXd get_matrix(const std::vector<char>& in, size_t& pos) {
    require(pos + 8 <= in.size(), "decomposition payload truncated");
    uint32_t rows, cols;
    std::memcpy(&rows, in.data() + pos, 4);
    std::memcpy(&cols, in.data() + pos + 4, 4);
    pos += 8;
    require(pos + static_cast<size_t>(rows) * cols * 8 <= in.size(),
            "decomposition payload truncated");
    Eigen::MatrixXd m(rows, cols);
    for (uint32_t r = 0; r < rows; ++r)
        for (uint32_t c = 0; c < cols; ++c, pos += 8) {
            double v;
            std::memcpy(&v, in.data() + pos, 8);
            m(r, c) = v;
        }
    return m;
}

} // namespace

std::vector<char> serialize_decomposition(const IcaDecomposition& d) {
    std::vector<char> out;
    const uint32_t version = 1;
    out.resize(4);
    std::memcpy(out.data(), &version, 4);
    put_matrix(out, d.unmixing);
    put_matrix(out, d.mixing);
    put_matrix(out, d.mean);
    const uint8_t conv = d.converged ? 1 : 0;
    out.push_back(static_cast<char>(conv));
    const uint32_t iters = static_cast<uint32_t>(d.iterations);
    const size_t base = out.size();
    out.resize(base + 4 + 8);
    std::memcpy(out.data() + base, &iters, 4);
    std::memcpy(out.data() + base + 4, &d.final_entropy_delta, 8);
    return out;
}

IcaDecomposition deserialize_decomposition(const std::vector<char>& bytes) {
    size_t pos = 0;
    require(bytes.size() >= 4, "decomposition payload truncated");
    uint32_t version;
    std::memcpy(&version, bytes.data(), 4);
    require(version == 1, "decomposition payload: unsupported version ", version);
    pos = 4;
    IcaDecomposition d;
    d.unmixing = get_matrix(bytes, pos);
    d.mixing = get_matrix(bytes, pos);
    d.mean = get_matrix(bytes, pos);
    require(pos + 1 + 4 + 8 <= bytes.size(), "decomposition payload truncated");
    d.converged = bytes[pos] != 0;
    ++pos;
    uint32_t iters;
    std::memcpy(&iters, bytes.data() + pos, 4);
    d.iterations = static_cast<int>(iters);
    pos += 4;
    std::memcpy(&d.final_entropy_delta, bytes.data() + pos, 8);
    return d;
}

} // namespace nbrk
