#ifndef POLYQ_OBSERVABLE_HPP
#define POLYQ_OBSERVABLE_HPP

#include <cmath>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "polyq/common.hpp"
#include "polyq/errors.hpp"
#include "polyq/polygon.hpp"
#include "polyq/quadrature.hpp"
#include "polyq/region.hpp"

namespace polyq {

// One term amp * cos(2*pi*(kx*x + ky*y) + phase).
struct TrigTerm {
    double amp = 1.0;
    double kx = 0.0;
    double ky = 0.0;
    double phase = 0.0;
};

namespace detail {

// Mean of sin over a unit parameter interval: (1/1) * int_0^1 sin(a + t*delta) dt.
inline double sin_segment_mean(double a, double delta) {
    const double half = 0.5 * delta;
    const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
    return std::sin(a + half) * sinc;
}

inline double cos_segment_mean(double a, double delta) {
    const double half = 0.5 * delta;
    const double sinc = std::abs(half) < 1e-8 ? 1.0 - half * half / 6.0 : std::sin(half) / half;
    return std::cos(a + half) * sinc;
}

}  // namespace detail

// Exact integral of cos(alpha*x + beta*y + phase) over a polygon, by the
// divergence theorem (the integrand has a closed-form antiderivative flux).
inline double polygon_cos_integral(const std::vector<Vec2>& ring, double alpha, double beta,
                                   double phase) {
    const std::size_t k = ring.size();
    if (alpha == 0.0 && beta == 0.0) return std::cos(phase) * signed_area(ring);
    double total = 0.0;
    if (std::abs(alpha) >= std::abs(beta)) {
        // F = (sin(theta)/alpha, 0), div F = cos(theta); flux through ccw boundary.
        for (std::size_t i = 0; i < k; ++i) {
            const Vec2& a = ring[i];
            const Vec2& b = ring[(i + 1) % k];
            const double theta_a = alpha * a.x + beta * a.y + phase;
            const double delta = alpha * (b.x - a.x) + beta * (b.y - a.y);
            total += (b.y - a.y) * detail::sin_segment_mean(theta_a, delta);
        }
        return total / alpha;
    }
    for (std::size_t i = 0; i < k; ++i) {
        const Vec2& a = ring[i];
        const Vec2& b = ring[(i + 1) % k];
        const double theta_a = alpha * a.x + beta * a.y + phase;
        const double delta = alpha * (b.x - a.x) + beta * (b.y - a.y);
        total -= (b.x - a.x) * detail::sin_segment_mean(theta_a, delta);
    }
    return total / beta;
}

// ---------------------------------------------------------------------------
// IsotropicObservable: a(x, omega) = a0(x)
// ---------------------------------------------------------------------------

// Position-only observable on a polygon domain. Four kinds: constant,
// trigonometric polynomial, smooth radial bump supported in the interior, and
// region indicator. The configuration-space mean a0_bar = (1/area D) int a0 is
// cached at construction; for isotropic observables it equals the phase-space
// average.
class Observable {
  public:
    struct Constant {
        double value;
    };
    struct Trig {
        std::vector<TrigTerm> terms;
    };
    // C-infinity radial plateau: 1 on [0, r_in], smooth monotone decay to 0 at
    // r_out, scaled by amp. r_in = 0 gives the classic mollifier-style bump.
    struct Bump {
        Vec2 center;
        double r_in;
        double r_out;
        double amp;
    };
    struct Indicator {
        std::shared_ptr<const Region> region;
    };

    using Kind = std::variant<Constant, Trig, Bump, Indicator>;

    static Observable constant(const RationalPolygon& domain, double value,
                               std::string name = {}) {
        Observable o(domain, Constant{value},
                     name.empty() ? "const" : std::move(name));
        o.mean_ = value;
        return o;
    }

    static Observable trig(const RationalPolygon& domain, std::vector<TrigTerm> terms,
                           std::string name = {}) {
        Observable o(domain, Trig{std::move(terms)}, name.empty() ? "trig" : std::move(name));
        double integral = 0.0;
        for (const TrigTerm& t : std::get<Trig>(o.kind_).terms)
            integral += t.amp * polygon_cos_integral(domain.vertices(), 2.0 * kPi * t.kx,
                                                     2.0 * kPi * t.ky, t.phase);
        o.mean_ = integral / domain.area();
        return o;
    }

    static Observable bump(const RationalPolygon& domain, Vec2 center, double r_in,
                           double r_out, double amp = 1.0, std::string name = {}) {
        if (!(0.0 <= r_in && r_in < r_out))
            throw Error("Observable: bump radii must satisfy 0 <= r_in < r_out");
        if (!domain.contains(center) || domain.boundary_distance(center) <= r_out)
            throw Error("Observable: bump support must lie strictly inside the domain");
        Observable o(domain, Bump{center, r_in, r_out, amp},
                     name.empty() ? "bump" : std::move(name));
        // Radial integral; the transition profile has no elementary antiderivative.
        const auto& b = std::get<Bump>(o.kind_);
        const double integral =
            2.0 * kPi *
            adaptive_simpson([&b](double r) { return bump_profile(b, r) * r; }, 0.0, r_out,
                             1e-13) *
            amp;
        o.mean_ = integral / domain.area();
        return o;
    }

    static Observable indicator(const Region& region, std::string name = {}) {
        Observable o(region.domain(), Indicator{std::make_shared<Region>(region)},
                     name.empty() ? "1_" + region.name() : std::move(name));
        o.mean_ = region.area_fraction();
        return o;
    }

    double operator()(const Vec2& p) const { return eval(p); }

    double eval(const Vec2& p) const {
        if (const auto* c = std::get_if<Constant>(&kind_)) return c->value;
        if (const auto* t = std::get_if<Trig>(&kind_)) {
            double v = 0.0;
            for (const TrigTerm& term : t->terms)
                v += term.amp *
                     std::cos(2.0 * kPi * (term.kx * p.x + term.ky * p.y) + term.phase);
            return v;
        }
        if (const auto* b = std::get_if<Bump>(&kind_))
            return b->amp * bump_profile(*b, distance(p, b->center));
        const auto& ind = std::get<Indicator>(kind_);
        return ind.region->contains(p) ? 1.0 : 0.0;
    }

    // int_0^len a0(start + t*dir) dt along a unit-speed segment. Closed form
    // for constant/trig, exact crossing decomposition for indicators, adaptive
    // Simpson restricted to the support disk for bumps.
    double segment_integral(const Vec2& start, const Vec2& dir, double len,
                            double tol = 1e-10) const {
        if (len <= 0.0) return 0.0;
        if (const auto* c = std::get_if<Constant>(&kind_)) return c->value * len;
        if (const auto* t = std::get_if<Trig>(&kind_)) {
            double total = 0.0;
            for (const TrigTerm& term : t->terms) {
                const double alpha = 2.0 * kPi * term.kx;
                const double beta = 2.0 * kPi * term.ky;
                const double theta0 = alpha * start.x + beta * start.y + term.phase;
                const double omega = alpha * dir.x + beta * dir.y;
                total += term.amp * len * detail::cos_segment_mean(theta0, omega * len);
            }
            return total;
        }
        if (const auto* b = std::get_if<Bump>(&kind_)) {
            double t0, t1;
            if (!segment_disk_overlap(start, dir, len, b->center, b->r_out, t0, t1)) return 0.0;
            const Vec2 c = b->center;
            const double amp = b->amp;
            const Bump bump = *b;
            return adaptive_simpson(
                [&](double t) {
                    return amp * bump_profile(bump, distance(start + t * dir, c));
                },
                t0, t1, tol);
        }
        return indicator_segment_integral(start, dir, len);
    }

    double mean() const { return mean_; }
    // Phase-space average; for isotropic observables this reduces to the
    // configuration-space mean.
    double abar() const { return mean_; }

    const Kind& kind() const { return kind_; }
    const RationalPolygon& domain() const { return *domain_; }
    const std::string& name() const { return name_; }
    bool is_constant() const { return std::holds_alternative<Constant>(kind_); }
    bool is_indicator() const { return std::holds_alternative<Indicator>(kind_); }
    const Region* region() const {
        const auto* ind = std::get_if<Indicator>(&kind_);
        return ind ? ind->region.get() : nullptr;
    }

    // Smooth in the interior of the support annulus; exact 1 / exact 0 outside.
    static double bump_profile(const Bump& b, double r) {
        if (r <= b.r_in) return 1.0;
        if (r >= b.r_out) return 0.0;
        const double s = (r - b.r_in) / (b.r_out - b.r_in);
        const double e0 = std::exp(-1.0 / (1.0 - s));
        const double e1 = std::exp(-1.0 / s);
        return e0 / (e0 + e1);
    }

  private:
    Observable(const RationalPolygon& domain, Kind kind, std::string name)
        : domain_(std::make_shared<RationalPolygon>(domain)), kind_(std::move(kind)),
          name_(std::move(name)) {}

    static bool segment_disk_overlap(const Vec2& start, const Vec2& dir, double len,
                                     const Vec2& center, double radius, double& t0,
                                     double& t1) {
        const Vec2 rel = start - center;
        const double b = dot(rel, dir);
        const double c = rel.squared_norm() - radius * radius;
        const double disc = b * b - c;  // |dir| = 1
        if (disc <= 0.0) return false;
        const double sq = std::sqrt(disc);
        t0 = std::max(0.0, -b - sq);
        t1 = std::min(len, -b + sq);
        return t0 < t1;
    }

    double indicator_segment_integral(const Vec2& start, const Vec2& dir, double len) const {
        const Region& region = *std::get<Indicator>(kind_).region;
        std::vector<double> cuts;
        cuts.push_back(0.0);
        cuts.push_back(len);
        if (const auto* hp = std::get_if<Region::HalfPlane>(&region.shape())) {
            const double denom = dot(hp->normal, dir);
            if (std::abs(denom) > 1e-15) {
                const double t = (hp->offset - dot(hp->normal, start)) / denom;
                if (t > 0.0 && t < len) cuts.push_back(t);
            }
        } else if (const auto* disk = std::get_if<Region::Disk>(&region.shape())) {
            double t0, t1;
            if (segment_disk_overlap(start, dir, len, disk->center, disk->radius, t0, t1)) {
                if (t0 > 0.0) cuts.push_back(t0);
                if (t1 < len) cuts.push_back(t1);
            }
        } else {
            const auto& ring = std::get<Region::SubPolygon>(region.shape()).vertices;
            for (std::size_t i = 0; i < ring.size(); ++i) {
                const Vec2& a = ring[i];
                const Vec2& b = ring[(i + 1) % ring.size()];
                const Vec2 e = b - a;
                const double denom = cross(dir, e);
                if (std::abs(denom) < 1e-15) continue;
                const double t = cross(a - start, e) / denom;
                const double s = cross(a - start, dir) / denom;
                if (t > 0.0 && t < len && s >= 0.0 && s <= 1.0) cuts.push_back(t);
            }
        }
        std::sort(cuts.begin(), cuts.end());
        double inside_len = 0.0;
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
            if (region.contains(start + mid * dir)) inside_len += cuts[i + 1] - cuts[i];
        }
        return inside_len;
    }

    std::shared_ptr<const RationalPolygon> domain_;
    Kind kind_;
    std::string name_;
    double mean_ = 0.0;
};

}  // namespace polyq

#endif  // POLYQ_OBSERVABLE_HPP
