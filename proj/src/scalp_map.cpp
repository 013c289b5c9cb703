#include "nbrk/scalp_map.hpp"

#include "nbrk/common.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace nbrk {
namespace {

double cell_coord(int idx) {
    return -1.0 + 2.0 * idx / (ScalpMap::grid_n - 1);
}

int nearest_cell(double coord) {
    return static_cast<int>(std::llround((coord + 1.0) * (ScalpMap::grid_n - 1) / 2.0));
}

} // namespace

int ScalpMap::valid_cells() const {
    int n = 0;
    for (Eigen::Index r = 0; r < mask.rows(); ++r)
        for (Eigen::Index c = 0; c < mask.cols(); ++c)
            if (mask(r, c)) ++n;
    return n;
}

ScalpMap render_scalp_map(const Eigen::VectorXd& weights, const Montage& montage) {
    require(static_cast<size_t>(weights.size()) == montage.size(),
            "scalp map: ", weights.size(), " weights vs ", montage.size(), " electrodes");
    require(montage.size() >= 4, "scalp map: need at least 4 electrodes");

    const int n = ScalpMap::grid_n;
    ScalpMap map;
    map.grid = Eigen::MatrixXd::Zero(n, n);
    map.mask.resize(n, n);

    const size_t k_neighbors = 4;
    std::vector<size_t> idx(montage.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;

    for (int r = 0; r < n; ++r) {
        const double y = cell_coord(r);
        for (int c = 0; c < n; ++c) {
            const double x = cell_coord(c);
            const bool inside = x * x + y * y <= 1.0;
            map.mask(r, c) = inside;
            if (!inside) continue;
            std::partial_sort(idx.begin(), idx.begin() + k_neighbors, idx.end(),
                              [&](size_t a, size_t b) {
                                  const double da = (montage.xy[a] - Eigen::Vector2d(x, y)).squaredNorm();
                                  const double db = (montage.xy[b] - Eigen::Vector2d(x, y)).squaredNorm();
                                  return da < db;
                              });
            double wsum = 0.0, vsum = 0.0;
            for (size_t j = 0; j < k_neighbors; ++j) {
                const double d2 = (montage.xy[idx[j]] - Eigen::Vector2d(x, y)).squaredNorm();
                const double w = 1.0 / (d2 + 1e-12);
                wsum += w;
                vsum += w * weights[static_cast<Eigen::Index>(idx[j])];
            }
            map.grid(r, c) = vsum / wsum;
        }
    }
    // Exact values at each electrode's grid cell.
    for (size_t e = 0; e < montage.size(); ++e) {
        const int r = nearest_cell(montage.xy[e].y());
        const int c = nearest_cell(montage.xy[e].x());
        if (r >= 0 && r < n && c >= 0 && c < n && map.mask(r, c))
            map.grid(r, c) = weights[static_cast<Eigen::Index>(e)];
    }
    return map;
}

Eigen::VectorXd vectorize(const ScalpMap& map) {
    Eigen::VectorXd v(map.valid_cells());
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < map.grid.rows(); ++r)
        for (Eigen::Index c = 0; c < map.grid.cols(); ++c)
            if (map.mask(r, c)) v[k++] = map.grid(r, c);
    return v;
}

std::vector<double> align_polarity(std::vector<Eigen::VectorXd>& maps) {
    require(!maps.empty(), "align_polarity: empty map list");
    std::vector<double> signs(maps.size(), 1.0);
    for (const auto& m : maps)
        require(m.norm() > 0.0, "align_polarity: zero map");

    // First map: largest-|.| cell positive.
    Eigen::Index argmax = 0;
    maps[0].cwiseAbs().maxCoeff(&argmax);
    if (maps[0][argmax] < 0.0) {
        maps[0] = -maps[0];
        signs[0] = -1.0;
    }
    Eigen::VectorXd mean = maps[0];
    for (size_t i = 1; i < maps.size(); ++i) {
        if (maps[i].dot(mean) < 0.0) {
            maps[i] = -maps[i];
            signs[i] = -1.0;
        }
        mean = (mean * static_cast<double>(i) + maps[i]) / static_cast<double>(i + 1);
    }
    return signs;
}

void save_scalp_map_csv(const ScalpMap& map, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), "cannot open ", path, " for writing");
    out << "row,col,value,mask\n";
    out.precision(17);
    for (Eigen::Index r = 0; r < map.grid.rows(); ++r)
        for (Eigen::Index c = 0; c < map.grid.cols(); ++c)
            out << r << "," << c << "," << map.grid(r, c) << ","
                << (map.mask(r, c) ? 1 : 0) << "\n";
    require(out.good(), "write failure on ", path);
}

} // namespace nbrk
