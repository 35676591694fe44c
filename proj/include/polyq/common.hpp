#ifndef POLYQ_COMMON_HPP
#define POLYQ_COMMON_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <numbers>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace polyq {

inline constexpr const char* kVersion = "0.1.0";

inline constexpr double kPi = std::numbers::pi;

// ---------------------------------------------------------------------------
// Planar vectors / points
// ---------------------------------------------------------------------------

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

    constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }

    double norm() const { return std::hypot(x, y); }
    constexpr double squared_norm() const { return x * x + y * y; }
    Vec2 normalized() const { const double n = norm(); return {x / n, y / n}; }
    // Rotate by +90 degrees.
    constexpr Vec2 perp() const { return {-y, x}; }
};

inline constexpr Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// Distance from point p to segment [a,b].
inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squared_norm();
    if (len2 == 0.0) return distance(p, a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, a + t * ab);
}

// ---------------------------------------------------------------------------
// 2x2 matrices (reflection-group elements)
// ---------------------------------------------------------------------------

struct Mat2 {
    // Row-major: [[a, b], [c, d]].
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    // Linear part of the reflection across the line through the origin with
    // unit normal n: R = I - 2 n n^T.
    static Mat2 reflection(const Vec2& n) {
        return {1.0 - 2.0 * n.x * n.x, -2.0 * n.x * n.y,
                -2.0 * n.x * n.y, 1.0 - 2.0 * n.y * n.y};
    }

    constexpr Vec2 apply(const Vec2& v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }

    constexpr Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }

    constexpr Mat2 transpose() const { return {a, c, b, d}; }
    constexpr double det() const { return a * d - b * c; }
};

inline double frobenius_distance(const Mat2& m, const Mat2& n) {
    const double da = m.a - n.a, db = m.b - n.b, dc = m.c - n.c, dd = m.d - n.d;
    return std::sqrt(da * da + db * db + dc * dc + dd * dd);
}

// Max entrywise deviation of M^T M from the identity.
inline double orthogonality_defect(const Mat2& m) {
    const Mat2 g = m.transpose() * m;
    return std::max({std::abs(g.a - 1.0), std::abs(g.b), std::abs(g.c), std::abs(g.d - 1.0)});
}

// ---------------------------------------------------------------------------
// Deterministic parallel-for
// ---------------------------------------------------------------------------

// Thread count: min(hardware, POLYQ_THREADS if set). Work is partitioned by
// index, so results never depend on the partitioning.
inline unsigned thread_budget() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("POLYQ_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
}

template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
    const unsigned threads = count < 2 ? 1 : std::min<unsigned>(thread_budget(),
                                                                static_cast<unsigned>(count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::vector<std::exception_ptr> errors(threads);
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn, &err = errors[t]] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                err = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
}

// FNV-1a over bytes; used for content-addressed stage caching.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 14695981039346656037ull) {
    std::uint64_t h = seed;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

}  // namespace polyq

#endif  // POLYQ_COMMON_HPP
