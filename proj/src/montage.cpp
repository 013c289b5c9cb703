#include "nbrk/montage.hpp"

#include "nbrk/common.hpp"

#include <cmath>
#include <map>

namespace nbrk {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Electrodes live on a sphere: inclination alpha from the vertex (Cz) and
// azimuth phi measured counterclockwise from the right ear (+x), nose at 90.
// The disk projection is azimuthal equidistant, scaled so the outermost
// standard ring (alpha = 72 deg) lands at radius 0.72.
Eigen::Vector3d sphere_point(double alpha_deg, double phi_deg) {
    const double a = alpha_deg * kPi / 180.0;
    const double p = phi_deg * kPi / 180.0;
    return {std::sin(a) * std::cos(p), std::sin(a) * std::sin(p), std::cos(a)};
}

Eigen::Vector2d project(const Eigen::Vector3d& v) {
    const double alpha = std::acos(std::min(1.0, std::max(-1.0, v.z())));
    const double r = (alpha * 180.0 / kPi) / 90.0 * 0.9;
    const double norm_xy = std::hypot(v.x(), v.y());
    if (norm_xy < 1e-12) return {0.0, 0.0};
    return {r * v.x() / norm_xy, r * v.y() / norm_xy};
}

// Great-circle interpolation between two sphere points.
Eigen::Vector3d slerp(const Eigen::Vector3d& a, const Eigen::Vector3d& b, double t) {
    const double omega = std::acos(std::min(1.0, std::max(-1.0, a.dot(b))));
    if (omega < 1e-12) return a;
    return (std::sin((1.0 - t) * omega) * a + std::sin(t * omega) * b) / std::sin(omega);
}

struct Builder {
    std::map<std::string, Eigen::Vector2d> pos;
    std::vector<std::pair<std::string, Eigen::Vector3d>> sphere;

    void add(const std::string& label, double alpha_deg, double phi_deg) {
        const auto v = sphere_point(alpha_deg, phi_deg);
        sphere.emplace_back(label, v);
        pos[label] = project(v);
    }

    Eigen::Vector3d at(const std::string& label) const {
        for (const auto& [l, v] : sphere)
            if (l == label) return v;
        fail("montage: internal label ", label, " missing");
    }

    // Fill a coronal row by interpolating the arc midline -> outer-ring end.
    void arc(const std::string& mid, const std::string& outer,
             const std::vector<std::string>& labels) {
        const auto a = at(mid);
        const auto b = at(outer);
        const double n = static_cast<double>(labels.size()) + 1.0;
        for (size_t i = 0; i < labels.size(); ++i) {
            const auto v = slerp(a, b, (i + 1.0) / n);
            sphere.emplace_back(labels[i], v);
            pos[labels[i]] = project(v);
        }
    }
};

const std::map<std::string, Eigen::Vector2d>& position_table() {
    static const auto table = [] {
        Builder b;
        // Midline, nasion-inion arc sampled every 18 degrees.
        b.add("Fpz", 72, 90);
        b.add("AFz", 54, 90);
        b.add("Fz", 36, 90);
        b.add("FCz", 18, 90);
        b.add("Cz", 0, 90);
        b.add("CPz", 18, 270);
        b.add("Pz", 36, 270);
        b.add("POz", 54, 270);
        b.add("Oz", 72, 270);
        // Outer ring at inclination 72, every 18 degrees of azimuth.
        const char* ring[] = {"Fp2", "AF8", "F8",  "FT8", "T8",  "TP8", "P8",
                              "PO8", "O2",  "O1",  "PO7", "P7",  "TP7", "T7",
                              "FT7", "F7",  "AF7", "Fp1"};
        double phi = 72.0;
        for (int i = 0; i < 9; ++i, phi -= 18.0) b.add(ring[i], 72, phi);
        phi = 252.0;
        for (int i = 9; i < 18; ++i, phi -= 18.0) b.add(ring[i], 72, phi);
        // Interior rows.
        b.arc("Fz", "F7", {"F1", "F3", "F5"});
        b.arc("Fz", "F8", {"F2", "F4", "F6"});
        b.arc("FCz", "FT7", {"FC1", "FC3", "FC5"});
        b.arc("FCz", "FT8", {"FC2", "FC4", "FC6"});
        b.arc("Cz", "T7", {"C1", "C3", "C5"});
        b.arc("Cz", "T8", {"C2", "C4", "C6"});
        b.arc("CPz", "TP7", {"CP1", "CP3", "CP5"});
        b.arc("CPz", "TP8", {"CP2", "CP4", "CP6"});
        b.arc("Pz", "P7", {"P1", "P3", "P5"});
        b.arc("Pz", "P8", {"P2", "P4", "P6"});
        b.arc("AFz", "AF7", {"AF3"});
        b.arc("AFz", "AF8", {"AF4"});
        b.arc("POz", "PO7", {"PO3"});
        b.arc("POz", "PO8", {"PO4"});
        return b.pos;
    }();
    return table;
}

const std::vector<std::string>& standard_order() {
    static const std::vector<std::string> order = {
        "Fp1", "Fpz", "Fp2",
        "AF7", "AF3", "AFz", "AF4", "AF8",
        "F7",  "F5",  "F3",  "F1",  "Fz",  "F2",  "F4",  "F6",  "F8",
        "FT7", "FC5", "FC3", "FC1", "FCz", "FC2", "FC4", "FC6", "FT8",
        "T7",  "C5",  "C3",  "C1",  "Cz",  "C2",  "C4",  "C6",  "T8",
        "TP7", "CP5", "CP3", "CP1", "CPz", "CP2", "CP4", "CP6", "TP8",
        "P7",  "P5",  "P3",  "P1",  "Pz",  "P2",  "P4",  "P6",  "P8",
        "PO7", "PO3", "POz", "PO4", "PO8",
        "O1",  "Oz",  "O2"};
    return order;
}

} // namespace

std::optional<Eigen::Vector2d> lookup_standard_position(const std::string& label) {
    const auto& table = position_table();
    const auto it = table.find(label);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

const Montage& standard_montage() {
    static const Montage m = [] {
        Montage out;
        for (const auto& label : standard_order()) {
            out.labels.push_back(label);
            out.xy.push_back(*lookup_standard_position(label));
        }
        return out;
    }();
    return m;
}

Montage standard_montage(size_t n_channels) {
    const Montage& full = standard_montage();
    require(n_channels >= 1 && n_channels <= full.size(), "montage: requested ",
            n_channels, " channels, standard set holds ", full.size());
    Montage out;
    const double stride = static_cast<double>(full.size()) / static_cast<double>(n_channels);
    for (size_t i = 0; i < n_channels; ++i) {
        const size_t idx = static_cast<size_t>(std::floor(i * stride));
        out.labels.push_back(full.labels[idx]);
        out.xy.push_back(full.xy[idx]);
    }
    return out;
}

} // namespace nbrk
