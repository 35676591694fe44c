#ifndef POLYQ_REGION_HPP
#define POLYQ_REGION_HPP

#include <cmath>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "polyq/common.hpp"
#include "polyq/errors.hpp"
#include "polyq/polygon.hpp"

namespace polyq {

// Measurable subset A of the closed polygon D with piecewise-smooth (hence
// measure-zero) boundary. Three shapes: half-plane cut of D, disk, sub-polygon.
// Containment of points within ~1e-12 of the region boundary is indeterminate.
class Region {
  public:
    struct HalfPlane {
        Vec2 normal;   // unit
        double offset;  // region = {x : dot(normal, x) <= offset} intersected with D
    };
    struct Disk {
        Vec2 center;
        double radius;
    };
    struct SubPolygon {
        std::vector<Vec2> vertices;  // ccw simple ring
    };

    using Shape = std::variant<HalfPlane, Disk, SubPolygon>;

    Region(const RationalPolygon& domain, HalfPlane hp, std::string name = {})
        : domain_(std::make_shared<RationalPolygon>(domain)),
          shape_(HalfPlane{hp.normal.normalized(), hp.offset / hp.normal.norm()}),
          name_(std::move(name)) {
        hp = std::get<HalfPlane>(shape_);
        const auto clipped = clip_halfplane(domain.vertices(), hp.normal, hp.offset);
        if (clipped.size() < 3) throw RegionOutsideDomain("half-plane cut of D is empty");
        area_ = signed_area(clipped);
        if (area_ <= 0.0) throw RegionOutsideDomain("half-plane cut of D has zero area");
        if (name_.empty()) name_ = "halfplane";
    }

    Region(const RationalPolygon& domain, Disk disk, std::string name = {})
        : domain_(std::make_shared<RationalPolygon>(domain)), shape_(disk),
          name_(std::move(name)) {
        if (disk.radius <= 0.0) throw Error("Region: disk radius must be positive");
        if (!domain.contains(disk.center))
            throw RegionOutsideDomain("disk center outside D");
        // Center containment plus clearance to every side keeps the disk inside
        // D (D need not be convex, so both checks are needed).
        if (domain.boundary_distance(disk.center) < disk.radius - 1e-12)
            throw RegionOutsideDomain("disk reaches outside D");
        for (int i = 0; i < 16; ++i) {
            const double phi = 2.0 * kPi * i / 16.0;
            const Vec2 probe = disk.center + disk.radius * Vec2{std::cos(phi), std::sin(phi)};
            if (!domain.contains(probe, 1e-9))
                throw RegionOutsideDomain("disk rim sample outside D");
        }
        area_ = kPi * disk.radius * disk.radius;
        if (name_.empty()) name_ = "disk";
    }

    Region(const RationalPolygon& domain, SubPolygon sub, std::string name = {})
        : domain_(std::make_shared<RationalPolygon>(domain)), shape_(std::move(sub)),
          name_(std::move(name)) {
        const auto& ring = std::get<SubPolygon>(shape_).vertices;
        if (ring.size() < 3) throw Error("Region: sub-polygon needs at least 3 vertices");
        if (signed_area(ring) <= 0.0) throw Error("Region: sub-polygon must be ccw");
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const Vec2 mid = (ring[i] + ring[(i + 1) % ring.size()]) * 0.5;
            if (!domain.contains(ring[i], 1e-9) || !domain.contains(mid, 1e-9))
                throw RegionOutsideDomain("sub-polygon vertex or edge midpoint outside D");
        }
        area_ = signed_area(ring);
        if (name_.empty()) name_ = "subpolygon";
    }

    const Shape& shape() const { return shape_; }
    const RationalPolygon& domain() const { return *domain_; }
    const std::string& name() const { return name_; }

    double area() const { return area_; }
    double area_fraction() const { return area_ / domain_->area(); }

    bool contains(const Vec2& p) const {
        if (const auto* hp = std::get_if<HalfPlane>(&shape_))
            return dot(hp->normal, p) <= hp->offset && domain_->contains(p);
        if (const auto* disk = std::get_if<Disk>(&shape_))
            return distance(p, disk->center) <= disk->radius;
        const auto& ring = std::get<SubPolygon>(shape_).vertices;
        return point_in_polygon(ring, p);
    }

    // Signed distance proxy to the region boundary: negative inside, positive
    // outside; exact for half-plane and disk, conservative for sub-polygons.
    double boundary_margin(const Vec2& p) const {
        if (const auto* hp = std::get_if<HalfPlane>(&shape_))
            return dot(hp->normal, p) - hp->offset;
        if (const auto* disk = std::get_if<Disk>(&shape_))
            return distance(p, disk->center) - disk->radius;
        const auto& ring = std::get<SubPolygon>(shape_).vertices;
        double d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < ring.size(); ++i)
            d = std::min(d, point_segment_distance(p, ring[i], ring[(i + 1) % ring.size()]));
        return point_in_polygon(ring, p) ? -d : d;
    }

  private:
    std::shared_ptr<const RationalPolygon> domain_;
    Shape shape_;
    std::string name_;
    double area_ = 0.0;
};

inline bool region_contains(const Region& region, const Vec2& point) {
    return region.contains(point);
}

}  // namespace polyq

#endif  // POLYQ_REGION_HPP
