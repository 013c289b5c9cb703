#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

namespace nbrk {

/// Electrode layout: labels plus unit-disk coordinates (+y toward the nose).
struct Montage {
    std::vector<std::string> labels;
    std::vector<Eigen::Vector2d> xy;

    size_t size() const { return labels.size(); }
};

/// Coordinates of one standard 10-10 label, or nullopt if unknown.
std::optional<Eigen::Vector2d> lookup_standard_position(const std::string& label);

/// Full 61-label standard 10-10 montage in front-to-back order.
const Montage& standard_montage();

/// A montage of n channels drawn evenly from the standard set (n <= 61).
Montage standard_montage(size_t n_channels);

} // namespace nbrk
