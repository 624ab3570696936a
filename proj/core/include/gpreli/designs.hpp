#pragma once

#include <gpreli/error.hpp>

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>

namespace gpreli {

enum class DesignKind { Grid, Halton, UniformRandom };

// A set of n distinct measurement locations in [0,1]^d, one point per row.
struct Design {
    Eigen::MatrixXd points; // n x d
    DesignKind kind = DesignKind::Grid;
    std::uint64_t seed = 0; // generation seed for UniformRandom

    int n() const { return static_cast<int>(points.rows()); }
    int dim() const { return static_cast<int>(points.cols()); }
};

// Equispaced lattice including both endpoints; d=1 points are k/(n-1).
// For d > 1, n must be a perfect d-th power (m points per axis, n = m^d).
Design grid_design(int n, int d);

// First n points of the Halton sequence, 1-indexed, prime bases 2 (then 3).
Eigen::MatrixXd halton_points(int n, int d);
Design halton_design(int n, int d);

// i.i.d. uniform coordinates from a seeded stream; exact floating-point
// duplicate points are rejection-resampled to keep the design distinct.
Design uniform_random_design(int n, int d, std::uint64_t seed);

// Fill distance h = sup_{x in [0,1]^d} min_j |x - x_j|.
// d=1: exact via sorted gaps (boundary gaps plus half interior gaps).
// d>=2: max over a candidate lattice of lattice_per_axis^d points — a lower
// bound of the true supremum; tighten by raising lattice_per_axis.
double fill_distance(const Design& design, int lattice_per_axis = 200);

// Half the minimum pairwise distance (exact, O(n^2)).
double separation_radius(const Design& design);

// h / q; equals 1 for 1-d grids.
double quasi_uniformity_ratio(const Design& design);

// CSV with header "x1[,x2,...]", one point per row, deterministic formatting.
void write_design_csv(const Design& design, const std::filesystem::path& path);

} // namespace gpreli
