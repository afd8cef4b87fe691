#include "gpeq/design.hpp"

#include "gpeq/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace gpeq {

Design::Design(Geometry geometry, Eigen::MatrixXd points)
    : geometry_(geometry), points_(std::move(points)) {
    if (geometry_.dim < 1) throw ContractError("design: dimension must be positive");
    if (geometry_.kind == GeometryKind::Sphere && geometry_.dim < 3)
        throw ContractError("design: sphere designs need ambient dimension d >= 3");
    if (points_.rows() > 0 && points_.cols() != geometry_.dim)
        throw ContractError("design: point dimension " + std::to_string(points_.cols()) +
                            " does not match geometry dimension " + std::to_string(geometry_.dim));
    if (!points_.allFinite()) throw ContractError("design: non-finite coordinates");

    if (geometry_.kind == GeometryKind::Sphere) {
        for (Eigen::Index i = 0; i < points_.rows(); ++i) {
            if (std::abs(points_.row(i).norm() - 1.0) > kUnitNormTolerance)
                throw ContractError("design: sphere point " + std::to_string(i) + " is not unit norm");
        }
    }
    for (Eigen::Index i = 0; i < points_.rows(); ++i) {
        for (Eigen::Index j = 0; j < i; ++j) {
            if (points_.row(i) == points_.row(j))
                throw ContractError("design: duplicate points at indices " + std::to_string(j) + " and " +
                                    std::to_string(i));
        }
    }
}

Design Design::on_line(const std::vector<double>& values) {
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(values.size()), 1);
    for (std::size_t i = 0; i < values.size(); ++i) pts(static_cast<Eigen::Index>(i), 0) = values[i];
    return Design(Geometry::euclidean(1), std::move(pts));
}

Design Design::prefix(std::size_t m) const {
    if (m > size()) throw ContractError("design: prefix longer than design");
    return Design(geometry_, points_.topRows(static_cast<Eigen::Index>(m)));
}

bool Design::is_prefix_of(const Design& other) const {
    if (!(geometry_ == other.geometry_) || size() > other.size()) return false;
    return points_ == other.points_.topRows(points_.rows());
}

double great_circle_distance(const Point& s, const Point& t) {
    return std::acos(std::clamp(s.dot(t), -1.0, 1.0));
}

Design interval_grid(std::size_t n, double lower, double upper) {
    if (n < 2) throw ContractError("interval_grid: need at least two points");
    if (!(lower < upper)) throw ContractError("interval_grid: empty interval");
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i)
        values[i] = lower + (upper - lower) * static_cast<double>(i) / static_cast<double>(n - 1);
    return Design::on_line(values);
}

std::vector<Design> dyadic_designs(std::size_t max_n, double lower, double upper) {
    if (max_n < 2 || (max_n & (max_n - 1)) != 0)
        throw ContractError("dyadic_designs: max_n must be a power of two >= 2");
    if (!(lower < upper)) throw ContractError("dyadic_designs: empty interval");

    std::vector<double> values;
    std::vector<Design> designs;
    const double width = upper - lower;
    // level with n points: lower + width * i / n, i = 1..n; new points have odd i
    for (std::size_t n = 2; n <= max_n; n *= 2) {
        for (std::size_t i = 1; i <= n; ++i) {
            if (n == 2 || i % 2 == 1)
                values.push_back(lower + width * static_cast<double>(i) / static_cast<double>(n));
        }
        designs.push_back(Design::on_line(values));
    }
    return designs;
}

namespace {

double van_der_corput(std::size_t i) {
    double value = 0.0;
    double denom = 1.0;
    while (i != 0) {
        denom *= 2.0;
        value += static_cast<double>(i & 1U) / denom;
        i >>= 1U;
    }
    return value;
}

}  // namespace

Design fibonacci_sphere(std::size_t n, int d) {
    if (d != 3) throw ContractError("fibonacci_sphere: only S^2 (d = 3) is supported");
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(n), 3);
    for (std::size_t i = 0; i < n; ++i) {
        const double z = 1.0 - 2.0 * van_der_corput(i + 1);
        const double frac = std::fmod(static_cast<double>(i) * golden, 1.0);
        const double phi = 2.0 * std::numbers::pi * frac;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        Eigen::Vector3d p(r * std::cos(phi), r * std::sin(phi), z);
        pts.row(static_cast<Eigen::Index>(i)) = p.normalized().transpose();
    }
    return Design(Geometry::sphere(3), std::move(pts));
}

std::vector<Design> fibonacci_sphere_designs(const std::vector<std::size_t>& sizes, int d) {
    if (sizes.empty()) return {};
    if (!std::is_sorted(sizes.begin(), sizes.end()) ||
        std::adjacent_find(sizes.begin(), sizes.end()) != sizes.end())
        throw ContractError("fibonacci_sphere_designs: sizes must be strictly increasing");
    const Design full = fibonacci_sphere(sizes.back(), d);
    std::vector<Design> designs;
    designs.reserve(sizes.size());
    for (auto n : sizes) designs.push_back(full.prefix(n));
    return designs;
}

}  // namespace gpeq
