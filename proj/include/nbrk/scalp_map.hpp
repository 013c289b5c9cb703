#pragma once

#include "nbrk/montage.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace nbrk {

/// 67x67 head-disk raster of an IC's projection weights. Cells outside the
/// unit disk are masked out; the standard mask holds 3409 valid cells.
struct ScalpMap {
    static constexpr int grid_n = 67;
    Eigen::MatrixXd grid;               // grid_n x grid_n, 0 where masked
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask;
    int source_subject = -1;
    int source_ic = -1;

    int valid_cells() const;
};

/// Inverse-distance-weighted interpolation (power 2, 4 nearest electrodes),
/// exact at each electrode's grid cell.
ScalpMap render_scalp_map(const Eigen::VectorXd& weights, const Montage& montage);

/// Masked cells dropped, row-major order; length = valid_cells().
Eigen::VectorXd vectorize(const ScalpMap& map);

/// Sign-align a set of vectorized maps: the first map's largest-|.| cell is
/// made positive, then each map is flipped, if needed, toward the running
/// mean of the already-aligned maps. Returns the applied signs.
std::vector<double> align_polarity(std::vector<Eigen::VectorXd>& maps);

void save_scalp_map_csv(const ScalpMap& map, const std::string& path);

} // namespace nbrk
