#ifndef POLYQ_POLYGON_HPP
#define POLYQ_POLYGON_HPP

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "polyq/common.hpp"
#include "polyq/errors.hpp"

namespace polyq {

// Reduced fraction p/q certifying an interior angle of (p/q)*pi.
struct Fraction {
    long long p = 0;
    long long q = 1;

    Fraction() = default;
    Fraction(long long p_, long long q_) : p(p_), q(q_) {
        if (q <= 0 || p <= 0) throw Error("Fraction: require p > 0 and q > 0");
        if (std::gcd(p, q) != 1)
            throw Error("Fraction: " + std::to_string(p) + "/" + std::to_string(q) +
                        " is not in lowest terms");
    }

    double value() const { return static_cast<double>(p) / static_cast<double>(q); }
    double radians() const { return value() * kPi; }
};

namespace detail {

// Orientation of c relative to segment a->b (sign of the cross product).
inline double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
    return cross(b - a, c - a);
}

inline bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p, double tol) {
    return point_segment_distance(p, a, b) <= tol;
}

// Proper or touching intersection of closed segments [a,b] and [c,d].
inline bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const double d1 = orient(c, d, a);
    const double d2 = orient(c, d, b);
    const double d3 = orient(a, b, c);
    const double d4 = orient(a, b, d);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    const double tol = 1e-14;
    if (std::abs(d1) <= tol && on_segment(c, d, a, tol)) return true;
    if (std::abs(d2) <= tol && on_segment(c, d, b, tol)) return true;
    if (std::abs(d3) <= tol && on_segment(a, b, c, tol)) return true;
    if (std::abs(d4) <= tol && on_segment(a, b, d, tol)) return true;
    return false;
}

}  // namespace detail

// Shoelace signed area; positive for counterclockwise rings.
inline double signed_area(const std::vector<Vec2>& vertices) {
    double twice = 0.0;
    const std::size_t k = vertices.size();
    for (std::size_t i = 0; i < k; ++i) {
        const Vec2& a = vertices[i];
        const Vec2& b = vertices[(i + 1) % k];
        twice += cross(a, b);
    }
    return 0.5 * twice;
}

// Interior angle at vertex i of a ccw ring, in (0, 2*pi).
inline double interior_angle(const std::vector<Vec2>& vertices, std::size_t i) {
    const std::size_t k = vertices.size();
    const Vec2& prev = vertices[(i + k - 1) % k];
    const Vec2& cur = vertices[i];
    const Vec2& next = vertices[(i + 1) % k];
    const Vec2 u = prev - cur;
    const Vec2 w = next - cur;
    double angle = std::atan2(cross(w, u), dot(w, u));
    if (angle <= 0.0) angle += 2.0 * kPi;
    return angle;
}

// Closed point-in-polygon: true on the boundary (within tol) and inside.
inline bool point_in_polygon(const std::vector<Vec2>& vertices, const Vec2& p,
                             double boundary_tol = 1e-12) {
    const std::size_t k = vertices.size();
    for (std::size_t i = 0; i < k; ++i) {
        if (detail::on_segment(vertices[i], vertices[(i + 1) % k], p, boundary_tol)) return true;
    }
    // Crossing number: count edges straddling the horizontal ray from p.
    bool inside = false;
    for (std::size_t i = 0, j = k - 1; i < k; j = i++) {
        const Vec2& a = vertices[i];
        const Vec2& b = vertices[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_int = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if (p.x < x_int) inside = !inside;
        }
    }
    return inside;
}

// Clip a ring by the half-plane {x : dot(n, x) <= c} (Sutherland-Hodgman).
inline std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& ring, const Vec2& n, double c) {
    std::vector<Vec2> out;
    const std::size_t k = ring.size();
    for (std::size_t i = 0; i < k; ++i) {
        const Vec2& a = ring[i];
        const Vec2& b = ring[(i + 1) % k];
        const double da = dot(n, a) - c;
        const double db = dot(n, b) - c;
        if (da <= 0.0) {
            out.push_back(a);
            if (db > 0.0) out.push_back(a + (b - a) * (da / (da - db)));
        } else if (db <= 0.0) {
            out.push_back(a + (b - a) * (da / (da - db)));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// RationalPolygon
// ---------------------------------------------------------------------------

// Simple polygon with per-vertex certificates that the interior angles are
// rational multiples of pi. The caller certifies, the constructor verifies:
// rationality detection from floating-point vertices would be ill-posed.
class RationalPolygon {
  public:
    static constexpr double kAngleTol = 1e-9;

    RationalPolygon(std::vector<Vec2> vertices, std::vector<Fraction> certificates,
                    std::string name = {})
        : vertices_(std::move(vertices)), certificates_(std::move(certificates)),
          name_(std::move(name)) {
        validate();
        const std::size_t k = vertices_.size();
        sides_.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            Side s;
            s.a = vertices_[i];
            s.b = vertices_[(i + 1) % k];
            s.direction = (s.b - s.a).normalized();
            s.outward_normal = Vec2{s.direction.y, -s.direction.x};  // ccw ring
            s.length = distance(s.a, s.b);
            sides_.push_back(s);
        }
        area_ = signed_area(vertices_);
        for (const Vec2& v : vertices_) {
            bbox_min_.x = std::min(bbox_min_.x, v.x);
            bbox_min_.y = std::min(bbox_min_.y, v.y);
            bbox_max_.x = std::max(bbox_max_.x, v.x);
            bbox_max_.y = std::max(bbox_max_.y, v.y);
        }
    }

    struct Side {
        Vec2 a, b;
        Vec2 direction;       // unit, a -> b
        Vec2 outward_normal;  // unit
        double length = 0.0;
    };

    const std::vector<Vec2>& vertices() const { return vertices_; }
    const std::vector<Fraction>& certificates() const { return certificates_; }
    const std::vector<Side>& sides() const { return sides_; }
    const std::string& name() const { return name_; }
    double area() const { return area_; }
    std::size_t size() const { return vertices_.size(); }

    Vec2 bbox_min() const { return bbox_min_; }
    Vec2 bbox_max() const { return bbox_max_; }
    double diameter() const { return distance(bbox_min_, bbox_max_); }

    bool contains(const Vec2& p, double boundary_tol = 1e-12) const {
        return point_in_polygon(vertices_, p, boundary_tol);
    }

    double boundary_distance(const Vec2& p) const {
        double d = std::numeric_limits<double>::infinity();
        for (const Side& s : sides_) d = std::min(d, point_segment_distance(p, s.a, s.b));
        return d;
    }

    double perimeter() const {
        double total = 0.0;
        for (const Side& s : sides_) total += s.length;
        return total;
    }

  private:
    void validate() const {
        const std::size_t k = vertices_.size();
        if (k < 3) throw NotClosed("need at least 3 vertices");
        if (certificates_.size() != k)
            throw Error("certificate count " + std::to_string(certificates_.size()) +
                        " does not match vertex count " + std::to_string(k));

        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) {
                if (distance(vertices_[i], vertices_[j]) < 1e-12)
                    throw NotClosed("repeated vertex at indices " + std::to_string(i) + ", " +
                                    std::to_string(j));
            }
        }

        for (std::size_t i = 0; i < k; ++i) {
            const Vec2& a = vertices_[(i + k - 1) % k];
            const Vec2& b = vertices_[i];
            const Vec2& c = vertices_[(i + 1) % k];
            if (std::abs(detail::orient(a, b, c)) <
                1e-12 * std::max(1.0, distance(a, b) * distance(b, c)))
                throw NotClosed("three consecutive collinear vertices at index " +
                                std::to_string(i));
        }

        // Non-adjacent side pairs must not touch.
        for (std::size_t i = 0; i < k; ++i) {
            const Vec2& a = vertices_[i];
            const Vec2& b = vertices_[(i + 1) % k];
            for (std::size_t j = i + 1; j < k; ++j) {
                if (j == i || (j + 1) % k == i || (i + 1) % k == j) continue;
                const Vec2& c = vertices_[j];
                const Vec2& d = vertices_[(j + 1) % k];
                if (detail::segments_intersect(a, b, c, d))
                    throw SelfIntersecting("sides " + std::to_string(i) + " and " +
                                           std::to_string(j) + " intersect");
            }
        }

        if (signed_area(vertices_) <= 0.0)
            throw Error("vertices must be counterclockwise with positive area");

        for (std::size_t i = 0; i < k; ++i) {
            const double p_over_q = certificates_[i].value();
            if (p_over_q >= 2.0)
                throw Error("certificate at vertex " + std::to_string(i) +
                            " must satisfy 0 < p/q < 2");
            const double certified = certificates_[i].radians();
            const double measured = interior_angle(vertices_, i);
            if (std::abs(certified - measured) > kAngleTol)
                throw AngleCertificateMismatch(i, certified, measured);
        }

        double total = 0.0;
        for (std::size_t i = 0; i < k; ++i) total += interior_angle(vertices_, i);
        if (std::abs(total - (static_cast<double>(k) - 2.0) * kPi) > kAngleTol * static_cast<double>(k))
            throw Error("interior angles sum to " + std::to_string(total) +
                        ", expected (k-2)*pi");
    }

    std::vector<Vec2> vertices_;
    std::vector<Fraction> certificates_;
    std::string name_;
    std::vector<Side> sides_;
    double area_ = 0.0;
    Vec2 bbox_min_{std::numeric_limits<double>::infinity(),
                   std::numeric_limits<double>::infinity()};
    Vec2 bbox_max_{-std::numeric_limits<double>::infinity(),
                   -std::numeric_limits<double>::infinity()};
};

inline RationalPolygon build_polygon(std::vector<Vec2> vertices, std::vector<Fraction> certificates,
                                     std::string name = {}) {
    return RationalPolygon(std::move(vertices), std::move(certificates), std::move(name));
}

inline double polygon_area(const RationalPolygon& poly) { return poly.area(); }

// ---------------------------------------------------------------------------
// Built-in polygons
// ---------------------------------------------------------------------------

namespace builtin {

inline RationalPolygon unit_square() {
    return {{{0, 0}, {1, 0}, {1, 1}, {0, 1}},
            {{1, 2}, {1, 2}, {1, 2}, {1, 2}},
            "square"};
}

inline RationalPolygon rectangle(double a, double b) {
    if (a <= 0 || b <= 0) throw Error("rectangle: sides must be positive");
    return {{{0, 0}, {a, 0}, {a, b}, {0, b}},
            {{1, 2}, {1, 2}, {1, 2}, {1, 2}},
            "rectangle"};
}

// Right isoceles triangle with both legs of the given length.
inline RationalPolygon right_isoceles(double leg = 1.0) {
    return {{{0, 0}, {leg, 0}, {0, leg}},
            {{1, 2}, {1, 4}, {1, 4}},
            "right-isoceles"};
}

// Right triangle with angles (pi/2, 3pi/8, pi/8): pseudo-integrable dynamics.
inline RationalPolygon triangle_pi8() {
    const double b = std::tan(3.0 * kPi / 8.0);
    return {{{0, 0}, {1, 0}, {0, b}},
            {{1, 2}, {3, 8}, {1, 8}},
            "triangle-pi8"};
}

inline RationalPolygon equilateral() {
    return {{{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2.0}},
            {{1, 3}, {1, 3}, {1, 3}},
            "equilateral"};
}

// 2x2 square minus the top-right 1x1 block; one reflex corner at (1,1).
inline RationalPolygon l_shape() {
    return {{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}},
            {{1, 2}, {1, 2}, {1, 2}, {3, 2}, {1, 2}, {1, 2}},
            "l-shape"};
}

}  // namespace builtin

// Builtin lookup by CLI name; empty optional if unknown.
inline std::optional<RationalPolygon> builtin_polygon(const std::string& name) {
    if (name == "square" || name == "unit-square") return builtin::unit_square();
    if (name == "rectangle" || name == "rectangle-2x1") return builtin::rectangle(2.0, 1.0);
    if (name == "right-isoceles") return builtin::right_isoceles(1.0);
    if (name == "right-isoceles-pi") return builtin::right_isoceles(kPi);
    if (name == "triangle-pi8") return builtin::triangle_pi8();
    if (name == "equilateral") return builtin::equilateral();
    if (name == "l-shape") return builtin::l_shape();
    return std::nullopt;
}

}  // namespace polyq

#endif  // POLYQ_POLYGON_HPP
