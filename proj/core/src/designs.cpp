#include <gpreli/designs.hpp>

#include <gpreli/csv.hpp>
#include <gpreli/rng.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace gpreli {

namespace {

void require_shape(int n, int d, const char* who) {
    if (d < 1) {
        throw parameter_error(std::string(who) + ": dim must be >= 1, got " + std::to_string(d));
    }
    if (n < 1) {
        throw parameter_error(std::string(who) + ": n must be >= 1, got " + std::to_string(n));
    }
}

constexpr int kHaltonBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29};

// Radical inverse of index i (1-based) in base b.
double radical_inverse(std::uint64_t i, int base) {
    double value = 0.0;
    double inv_base = 1.0 / base;
    double scale = inv_base;
    while (i > 0) {
        value += static_cast<double>(i % base) * scale;
        i /= base;
        scale *= inv_base;
    }
    return value;
}

} // namespace

Design grid_design(int n, int d) {
    require_shape(n, d, "grid_design");
    if (n < 2) {
        throw parameter_error("grid_design: n must be >= 2 to include both endpoints, got " +
                              std::to_string(n));
    }
    int per_axis = n;
    if (d > 1) {
        per_axis = static_cast<int>(std::llround(std::pow(static_cast<double>(n), 1.0 / d)));
        // llround can land one off for large n; settle it exactly.
        auto ipow = [](long long base, int exp) {
            long long r = 1;
            for (int i = 0; i < exp; ++i) r *= base;
            return r;
        };
        while (ipow(per_axis, d) > n) --per_axis;
        while (ipow(per_axis + 1, d) <= n) ++per_axis;
        if (per_axis < 2 || ipow(per_axis, d) != n) {
            throw shape_error("grid_design: n=" + std::to_string(n) +
                              " is not a perfect " + std::to_string(d) +
                              "-th power of an axis count >= 2");
        }
    }
    Design design;
    design.kind = DesignKind::Grid;
    design.points.resize(n, d);
    const double step = 1.0 / (per_axis - 1);
    for (int i = 0; i < n; ++i) {
        int rest = i;
        for (int j = d - 1; j >= 0; --j) {
            design.points(i, j) = (rest % per_axis) * step;
            rest /= per_axis;
        }
    }
    return design;
}

Eigen::MatrixXd halton_points(int n, int d) {
    require_shape(n, d, "halton_points");
    constexpr int max_dim = static_cast<int>(sizeof(kHaltonBases) / sizeof(int));
    if (d > max_dim) {
        throw parameter_error("halton_points: dim must be <= " + std::to_string(max_dim) +
                              ", got " + std::to_string(d));
    }
    Eigen::MatrixXd pts(n, d);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < d; ++j) {
            pts(i, j) = radical_inverse(static_cast<std::uint64_t>(i) + 1, kHaltonBases[j]);
        }
    }
    return pts;
}

Design halton_design(int n, int d) {
    Design design;
    design.kind = DesignKind::Halton;
    design.points = halton_points(n, d);
    return design;
}

Design uniform_random_design(int n, int d, std::uint64_t seed) {
    require_shape(n, d, "uniform_random_design");
    Design design;
    design.kind = DesignKind::UniformRandom;
    design.seed = seed;
    design.points.resize(n, d);
    Rng rng(seed);
    for (int i = 0; i < n; ++i) {
        bool fresh = false;
        while (!fresh) {
            for (int j = 0; j < d; ++j) design.points(i, j) = rng.uniform01();
            fresh = true;
            for (int k = 0; k < i && fresh; ++k) {
                if ((design.points.row(k).array() == design.points.row(i).array()).all()) {
                    fresh = false;
                }
            }
        }
    }
    return design;
}

double fill_distance(const Design& design, int lattice_per_axis) {
    const int n = design.n();
    const int d = design.dim();
    if (n < 1) throw domain_error("fill_distance: design must contain at least one point");
    if (d == 1) {
        std::vector<double> xs(design.points.data(), design.points.data() + n);
        std::sort(xs.begin(), xs.end());
        double h = std::max(xs.front() - 0.0, 1.0 - xs.back());
        for (int i = 0; i + 1 < n; ++i) {
            h = std::max(h, 0.5 * (xs[i + 1] - xs[i]));
        }
        return h;
    }
    if (lattice_per_axis < 2) {
        throw parameter_error("fill_distance: lattice_per_axis must be >= 2, got " +
                              std::to_string(lattice_per_axis));
    }
    const int m = lattice_per_axis;
    long long total = 1;
    for (int j = 0; j < d; ++j) total *= m;
    const double step = 1.0 / (m - 1);
    Eigen::VectorXd candidate(d);
    double h = 0.0;
    for (long long idx = 0; idx < total; ++idx) {
        long long rest = idx;
        for (int j = 0; j < d; ++j) {
            candidate(j) = (rest % m) * step;
            rest /= m;
        }
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            const double dist = (design.points.row(i).transpose() - candidate).norm();
            best = std::min(best, dist);
        }
        h = std::max(h, best);
    }
    return h;
}

double separation_radius(const Design& design) {
    const int n = design.n();
    if (n < 2) {
        throw domain_error("separation_radius: needs at least two points, got " +
                           std::to_string(n));
    }
    double min_dist = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dist = (design.points.row(i) - design.points.row(j)).norm();
            min_dist = std::min(min_dist, dist);
        }
    }
    return 0.5 * min_dist;
}

double quasi_uniformity_ratio(const Design& design) {
    return fill_distance(design) / separation_radius(design);
}

void write_design_csv(const Design& design, const std::filesystem::path& path) {
    const int d = design.dim();
    std::vector<std::string> header;
    header.reserve(d);
    for (int j = 0; j < d; ++j) header.push_back("x" + std::to_string(j + 1));
    std::vector<std::vector<std::string>> rows;
    rows.reserve(design.n());
    for (int i = 0; i < design.n(); ++i) {
        std::vector<std::string> row;
        row.reserve(d);
        for (int j = 0; j < d; ++j) row.push_back(format_double(design.points(i, j)));
        rows.push_back(std::move(row));
    }
    write_csv(path, header, rows);
}

} // namespace gpreli
