#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace nbrk {

struct PcaResult {
    Eigen::MatrixXd scores; // n x k
    Eigen::MatrixXd basis;  // d x k, orthonormal columns
    Eigen::VectorXd mean;   // d
    double explained = 0.0; // cumulative variance fraction of the kept axes
};

/// Smallest k whose cumulative explained variance reaches variance_fraction.
PcaResult pca_reduce(const Eigen::MatrixXd& vectors, double variance_fraction = 0.95);

double cosine_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

Eigen::MatrixXd cosine_distance_matrix(const std::vector<Eigen::VectorXd>& vectors);

struct Merge {
    int a = 0;        // cluster ids; leaves are 0..n-1, merges n, n+1, ...
    int b = 0;
    double distance = 0.0;
    int new_size = 0;
};

struct Dendrogram {
    int leaf_count = 0;
    std::vector<Merge> merges; // exactly leaf_count - 1 entries
};

/// Size-weighted average-linkage agglomeration with deterministic
/// lowest-index-pair tie-breaking.
Dendrogram upgma(const Eigen::MatrixXd& dist);

/// Cluster assignment (0..K-1, ordered by first appearance) after applying
/// the first leaf_count - K merges. Cuts are nested across K.
std::vector<int> cut_dendrogram(const Dendrogram& dendro, int k);

/// Within-cluster sum of squares in score space for K = 1..k_max.
std::vector<double> wss_elbow(const Eigen::MatrixXd& scores, const Dendrogram& dendro,
                              int k_max = 15);

void save_merge_table(const Dendrogram& dendro, const std::string& path);

} // namespace nbrk
