#ifndef POLYQ_BILLIARD_HPP
#define POLYQ_BILLIARD_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "polyq/common.hpp"
#include "polyq/errors.hpp"
#include "polyq/polygon.hpp"

namespace polyq {

// Point of S*D = D x S^1: position in the closed polygon, unit direction.
struct PhasePoint {
    Vec2 position;
    Vec2 direction;

    static PhasePoint from_angle(const Vec2& pos, double phi) {
        return {pos, {std::cos(2.0 * kPi * phi), std::sin(2.0 * kPi * phi)}};
    }
};

struct TrajectorySegment {
    Vec2 start;
    Vec2 end;
    Vec2 direction;  // unit
    int side_hit;    // side index reached at `end`; -1 for a mid-flight final segment
    double length;
};

struct Trajectory {
    std::vector<TrajectorySegment> segments;
    double total_time = 0.0;
};

struct FlowOptions {
    double vertex_radius = 1e-9;
    std::size_t max_bounces = 10'000'000;
};

// A trajectory that lands within vertex_radius of a polygon vertex. The
// reflection law there is genuinely arbitrary, so the event is surfaced
// instead of resolved; sampling callers resample.
class VertexEncounter : public Error {
  public:
    VertexEncounter(std::size_t vertex, double elapsed_, Trajectory partial_)
        : Error("VertexEncounter: vertex " + std::to_string(vertex) + " after time " +
                std::to_string(elapsed_)),
          vertex_index(vertex), elapsed(elapsed_), partial(std::move(partial_)) {}

    std::size_t vertex_index;
    double elapsed;
    Trajectory partial;  // empty unless the caller recorded segments
};

// Specular reflection of a unit direction off a side with unit normal.
inline Vec2 reflect(const Vec2& direction, const Vec2& side_normal) {
    const Vec2 r = direction - 2.0 * dot(direction, side_normal) * side_normal;
    return r.normalized();
}

// First boundary intersection along the ray from p; a hit within
// vertex_radius of a polygon vertex is reported as a vertex event.
struct NextHit {
    bool is_vertex = false;
    Vec2 point;
    int side = -1;             // valid when !is_vertex
    std::size_t vertex = 0;    // valid when is_vertex
    double time = 0.0;
};

inline NextHit next_hit(const RationalPolygon& poly, const PhasePoint& p,
                        const FlowOptions& opts = {}, int exclude_side = -1) {
    const auto& sides = poly.sides();
    const double t_min = 1e-12 * std::max(1.0, poly.diameter());
    double best_t = std::numeric_limits<double>::infinity();
    int best_side = -1;
    double best_s = 0.0;
    for (std::size_t i = 0; i < sides.size(); ++i) {
        if (static_cast<int>(i) == exclude_side) continue;
        const auto& side = sides[i];
        const Vec2 e = side.b - side.a;
        const double denom = cross(p.direction, e);
        if (std::abs(denom) < 1e-15) continue;  // parallel; endpoints caught via neighbors
        const double t = cross(side.a - p.position, e) / denom;
        const double s = cross(side.a - p.position, p.direction) / denom;
        const double s_tol = 1e-12;
        if (t > t_min && s >= -s_tol && s <= 1.0 + s_tol && t < best_t) {
            best_t = t;
            best_side = static_cast<int>(i);
            best_s = s;
        }
    }
    if (best_side < 0)
        throw StuckAtBoundary("no forward boundary intersection (tangent start?)");

    const auto& side = sides[static_cast<std::size_t>(best_side)];
    // Evaluate the point on the side, not along the ray: re-anchoring to the
    // boundary each bounce stops positional drift.
    const double s_clamped = std::clamp(best_s, 0.0, 1.0);
    const Vec2 q = side.a + s_clamped * (side.b - side.a);

    NextHit hit;
    hit.time = best_t;
    hit.point = q;
    const std::size_t k = poly.size();
    const std::size_t va = static_cast<std::size_t>(best_side);
    const std::size_t vb = (va + 1) % k;
    const double da = distance(q, poly.vertices()[va]);
    const double db = distance(q, poly.vertices()[vb]);
    if (std::min(da, db) <= opts.vertex_radius) {
        hit.is_vertex = true;
        hit.vertex = da <= db ? va : vb;
        hit.point = poly.vertices()[hit.vertex];
        return hit;
    }
    hit.side = best_side;
    return hit;
}

struct FlowOutcome {
    PhasePoint end;
    double elapsed = 0.0;
    std::size_t bounces = 0;
    std::optional<std::size_t> vertex;  // set when the flow stopped at a vertex
};

// Unit-speed specular flow for duration T, invoking visit(segment) for every
// straight piece. Stops early at a vertex encounter (reported in the outcome,
// with the partial segment already visited).
template <typename Visitor>
FlowOutcome flow(const RationalPolygon& poly, const PhasePoint& start, double duration,
                 const FlowOptions& opts, Visitor&& visit) {
    if (duration < 0.0) throw Error("flow: negative duration");
    if (std::abs(start.direction.norm() - 1.0) > 1e-12)
        throw Error("flow: direction must be a unit vector");
    if (!poly.contains(start.position, 1e-9))
        throw Error("flow: start position outside the polygon");

    FlowOutcome out;
    out.end.position = start.position;
    out.end.direction = start.direction.normalized();
    double remaining = duration;
    int prev_side = -1;

    while (remaining > 0.0) {
        const NextHit hit = next_hit(poly, out.end, opts, prev_side);
        if (hit.time >= remaining) {
            const Vec2 end_pos = out.end.position + remaining * out.end.direction;
            visit(TrajectorySegment{out.end.position, end_pos, out.end.direction, -1,
                                    remaining});
            out.end.position = end_pos;
            out.elapsed += remaining;
            remaining = 0.0;
            break;
        }
        visit(TrajectorySegment{out.end.position, hit.point, out.end.direction,
                                hit.is_vertex ? -1 : hit.side, hit.time});
        out.elapsed += hit.time;
        remaining -= hit.time;
        out.end.position = hit.point;
        if (hit.is_vertex) {
            out.vertex = hit.vertex;
            return out;
        }
        out.end.direction =
            reflect(out.end.direction, poly.sides()[static_cast<std::size_t>(hit.side)].outward_normal);
        prev_side = hit.side;
        if (++out.bounces > opts.max_bounces) throw MaxBouncesExceeded(opts.max_bounces);
    }
    return out;
}

// Flow with full trajectory recording. Vertex encounters are thrown, carrying
// the partial trajectory; callers that sample initial conditions should catch
// and resample.
inline std::pair<PhasePoint, Trajectory> evolve(const RationalPolygon& poly,
                                                const PhasePoint& start, double duration,
                                                const FlowOptions& opts = {}) {
    Trajectory traj;
    const FlowOutcome out = flow(poly, start, duration, opts, [&](const TrajectorySegment& s) {
        traj.segments.push_back(s);
        traj.total_time += s.length;
    });
    if (out.vertex)
        throw VertexEncounter(*out.vertex, out.elapsed, std::move(traj));
    return {out.end, std::move(traj)};
}

}  // namespace polyq

#endif  // POLYQ_BILLIARD_HPP
