#pragma once

#include <cstdint>
#include <vector>

#include "drop/grid.hpp"

namespace drop {

/// Connected-component labeling of a boolean grid with wrap-around
/// (torus) adjacency, 2n-neighborhood, labels assigned in first-scan order.
struct LabelResult {
    GridSpec grid;
    std::vector<int> labels;  // 0 = background, components numbered from 1
    int count = 0;
};

struct ComponentMetrics {
    int id = 0;
    std::size_t pixel_count = 0;
    double area = 0.0;
    std::vector<double> centroid;      // torus-unwrapped, mapped into [-T/2, T/2)
    double perimeter = 0.0;            // h * boundary edge count (n = 2)
    double isoperimetric_ratio = 0.0;  // P^2 / (4 pi area), n = 2
    double sym_diff_to_best_ball = 0.0;
    double hausdorff_to_best_ball = 0.0;
};

struct ShapeReport {
    double threshold = 0.5;
    std::vector<ComponentMetrics> components;
    double total_area = 0.0;
    double aggregate_sym_diff = 0.0;       // sum over components
    double aggregate_hausdorff = 0.0;      // max over components
};

std::vector<std::uint8_t> threshold_set(const Field& field, double level);

LabelResult connected_components(const std::vector<std::uint8_t>& bw, const GridSpec& grid);

/// Distance of one labeled component to its equal-area disk centered at the
/// component centroid: (symmetric difference area, boundary Hausdorff gap).
std::pair<double, double> ball_distance(const LabelResult& labels, int id);

ShapeReport analyze_shape(const Field& field, double level = 0.5);

}  // namespace drop
