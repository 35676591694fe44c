#ifndef POLYQ_REFLECTION_GROUP_HPP
#define POLYQ_REFLECTION_GROUP_HPP

#include <vector>

#include "polyq/common.hpp"
#include "polyq/errors.hpp"
#include "polyq/polygon.hpp"

namespace polyq {

// Finite group generated by the linear parts of the side reflections of a
// rational polygon. Dihedral: N rotations and N reflections.
class ReflectionGroup {
  public:
    static constexpr double kDedupeTol = 1e-9;
    static constexpr std::size_t kDefaultCap = 10000;

    const std::vector<Mat2>& elements() const { return elements_; }
    const std::vector<Vec2>& generator_normals() const { return generator_normals_; }
    std::size_t order() const { return elements_.size(); }

    // Closure under products, fixed-point iteration with Frobenius-metric
    // deduplication. A blown cap signals a non-rational polygon (or a bad
    // certificate that slipped past the angle tolerance).
    static ReflectionGroup generate(const RationalPolygon& poly,
                                    std::size_t cap = kDefaultCap) {
        ReflectionGroup g;
        for (const auto& side : poly.sides())
            g.generator_normals_.push_back(side.outward_normal);

        std::vector<Mat2> gens;
        gens.reserve(g.generator_normals_.size());
        for (const Vec2& n : g.generator_normals_) gens.push_back(Mat2::reflection(n));

        g.elements_.push_back(Mat2::identity());
        std::size_t frontier_begin = 0;
        while (frontier_begin < g.elements_.size()) {
            const std::size_t frontier_end = g.elements_.size();
            for (std::size_t i = frontier_begin; i < frontier_end; ++i) {
                for (const Mat2& r : gens) {
                    const Mat2 candidate = r * g.elements_[i];
                    if (!g.contains(candidate)) {
                        g.elements_.push_back(candidate);
                        if (g.elements_.size() > cap) throw GroupNotFinite(cap);
                    }
                }
            }
            frontier_begin = frontier_end;
        }
        return g;
    }

    bool contains(const Mat2& m, double tol = kDedupeTol) const {
        return find(m, tol) >= 0;
    }

    // Index of the element closest to m within tol, or -1.
    int find(const Mat2& m, double tol = kDedupeTol) const {
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            if (frobenius_distance(elements_[i], m) <= tol) return static_cast<int>(i);
        }
        return -1;
    }

  private:
    std::vector<Mat2> elements_;
    std::vector<Vec2> generator_normals_;
};

inline ReflectionGroup reflection_group(const RationalPolygon& poly,
                                        std::size_t cap = ReflectionGroup::kDefaultCap) {
    return ReflectionGroup::generate(poly, cap);
}

// Orbit {g.theta : g in Gamma}, deduplicated. Its size divides the group order.
inline std::vector<Vec2> direction_orbit(const ReflectionGroup& group, const Vec2& theta,
                                         double tol = 1e-9) {
    std::vector<Vec2> orbit;
    for (const Mat2& g : group.elements()) {
        const Vec2 dir = g.apply(theta);
        bool seen = false;
        for (const Vec2& d : orbit) {
            if (distance(d, dir) <= tol) {
                seen = true;
                break;
            }
        }
        if (!seen) orbit.push_back(dir);
    }
    return orbit;
}

inline bool in_direction_orbit(const std::vector<Vec2>& orbit, const Vec2& dir,
                               double tol = 1e-9) {
    for (const Vec2& d : orbit) {
        if (distance(d, dir) <= tol) return true;
    }
    return false;
}

}  // namespace polyq

#endif  // POLYQ_REFLECTION_GROUP_HPP
