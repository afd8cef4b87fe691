#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace gpeq {

using Point = Eigen::VectorXd;

enum class GeometryKind { Euclidean, Sphere };

/// Ambient space of a design. For spheres, `dim` is the ambient dimension d of S^{d-1}.
struct Geometry {
    GeometryKind kind = GeometryKind::Euclidean;
    int dim = 1;

    static Geometry euclidean(int d) { return {GeometryKind::Euclidean, d}; }
    static Geometry sphere(int d) { return {GeometryKind::Sphere, d}; }

    friend bool operator==(const Geometry&, const Geometry&) = default;
};

inline constexpr double kUnitNormTolerance = 1e-12;

/// Ordered, pairwise-distinct evaluation points. Row i of `points()` is t_{i+1}.
class Design {
public:
    Design(Geometry geometry, Eigen::MatrixXd points);

    /// Scalar points on the real line.
    static Design on_line(const std::vector<double>& values);

    [[nodiscard]] const Geometry& geometry() const noexcept { return geometry_; }
    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(points_.rows()); }
    [[nodiscard]] const Eigen::MatrixXd& points() const noexcept { return points_; }
    [[nodiscard]] Point point(std::size_t i) const { return points_.row(static_cast<Eigen::Index>(i)).transpose(); }

    /// First m points, same geometry.
    [[nodiscard]] Design prefix(std::size_t m) const;

    /// True if this design equals the first size() points of `other`.
    [[nodiscard]] bool is_prefix_of(const Design& other) const;

private:
    Geometry geometry_;
    Eigen::MatrixXd points_;
};

/// Great-circle distance on the unit sphere, arccos of the clamped dot product.
[[nodiscard]] double great_circle_distance(const Point& s, const Point& t);

/// n equispaced points lower + (upper - lower) * i / (n - 1), i = 0..n-1 (n >= 2).
[[nodiscard]] Design interval_grid(std::size_t n, double lower = 0.0, double upper = 1.0);

/// Nested dyadic designs of (lower, upper] with sizes 2, 4, ..., max_n. Each
/// level appends the new midpoints, so every design is a prefix of the next.
[[nodiscard]] std::vector<Design> dyadic_designs(std::size_t max_n, double lower = 0.0, double upper = 1.0);

/// First n points of the incremental golden-angle sphere lattice on S^{d-1}
/// (d = 3 only): longitude advances by the golden angle, height follows the
/// base-2 van der Corput sequence, so prefixes stay quasi-uniform.
[[nodiscard]] Design fibonacci_sphere(std::size_t n, int d = 3);

/// Prefixes of one fibonacci_sphere sequence at the requested (increasing) sizes.
[[nodiscard]] std::vector<Design> fibonacci_sphere_designs(const std::vector<std::size_t>& sizes, int d = 3);

}  // namespace gpeq
