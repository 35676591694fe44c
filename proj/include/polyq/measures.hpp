#ifndef POLYQ_MEASURES_HPP
#define POLYQ_MEASURES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "polyq/common.hpp"
#include "polyq/eigensolver.hpp"
#include "polyq/errors.hpp"
#include "polyq/fem.hpp"
#include "polyq/observable.hpp"
#include "polyq/region.hpp"

namespace polyq {

namespace measdetail {

// Exact integral of the product of two linear fields over a triangle.
inline double linear_product_integral(double area, const double u[3], const double v[3]) {
    return area / 12.0 *
           (u[0] * (2 * v[0] + v[1] + v[2]) + u[1] * (v[0] + 2 * v[1] + v[2]) +
            u[2] * (v[0] + v[1] + 2 * v[2]));
}

enum class Side { Inside, Outside, Straddle };

inline Side classify(const Region& region, const Vec2& p0, const Vec2& p1, const Vec2& p2) {
    if (const auto* hp = std::get_if<Region::HalfPlane>(&region.shape())) {
        const double s0 = dot(hp->normal, p0) - hp->offset;
        const double s1 = dot(hp->normal, p1) - hp->offset;
        const double s2 = dot(hp->normal, p2) - hp->offset;
        if (s0 <= 0 && s1 <= 0 && s2 <= 0) return Side::Inside;
        if (s0 >= 0 && s1 >= 0 && s2 >= 0) return Side::Outside;
        return Side::Straddle;
    }
    if (const auto* disk = std::get_if<Region::Disk>(&region.shape())) {
        const double d0 = distance(p0, disk->center);
        const double d1 = distance(p1, disk->center);
        const double d2 = distance(p2, disk->center);
        if (d0 <= disk->radius && d1 <= disk->radius && d2 <= disk->radius)
            return Side::Inside;  // the disk is convex
        // Outside only if the whole triangle is at distance >= r from the center.
        const bool center_inside = detail::orient(p0, p1, disk->center) >= 0 &&
                                   detail::orient(p1, p2, disk->center) >= 0 &&
                                   detail::orient(p2, p0, disk->center) >= 0;
        if (!center_inside) {
            const double edge_dist = std::min({point_segment_distance(disk->center, p0, p1),
                                               point_segment_distance(disk->center, p1, p2),
                                               point_segment_distance(disk->center, p2, p0)});
            if (edge_dist >= disk->radius) return Side::Outside;
        }
        return Side::Straddle;
    }
    const auto& ring = std::get<Region::SubPolygon>(region.shape()).vertices;
    const Vec2 tri[3] = {p0, p1, p2};
    for (std::size_t i = 0; i < ring.size(); ++i) {
        const Vec2& a = ring[i];
        const Vec2& b = ring[(i + 1) % ring.size()];
        for (int e = 0; e < 3; ++e) {
            if (detail::segments_intersect(a, b, tri[e], tri[(e + 1) % 3]))
                return Side::Straddle;
        }
    }
    const Vec2 centroid = (p0 + p1 + p2) / 3.0;
    return point_in_polygon(ring, centroid) ? Side::Inside : Side::Outside;
}

struct RegionQuadResult {
    double value = 0.0;
    double uncertainty = 0.0;  // bound on the misclassified-sliver contribution
};

// Recursive 4-fold subdivision of straddling triangles; the linear fields
// restrict exactly to sub-triangles, so only the boundary strip contributes
// quadrature error, O(area of the uncertainty strip).
inline void region_integral_rec(const Region& region, const Vec2& p0, const Vec2& p1,
                                const Vec2& p2, const double u[3], const double v[3],
                                int depth, RegionQuadResult& out) {
    const Side side = classify(region, p0, p1, p2);
    if (side == Side::Outside) return;
    const double area = 0.5 * cross(p1 - p0, p2 - p0);
    if (side == Side::Inside) {
        out.value += linear_product_integral(area, u, v);
        return;
    }
    if (depth >= 6) {
        const Vec2 centroid = (p0 + p1 + p2) / 3.0;
        if (region.contains(centroid)) out.value += linear_product_integral(area, u, v);
        double max_uv = 0.0;
        for (int i = 0; i < 3; ++i) max_uv = std::max(max_uv, std::abs(u[i] * v[i]));
        out.uncertainty += area * max_uv;
        return;
    }
    const Vec2 m01 = (p0 + p1) * 0.5, m12 = (p1 + p2) * 0.5, m20 = (p2 + p0) * 0.5;
    const double u01 = 0.5 * (u[0] + u[1]), u12 = 0.5 * (u[1] + u[2]), u20 = 0.5 * (u[2] + u[0]);
    const double v01 = 0.5 * (v[0] + v[1]), v12 = 0.5 * (v[1] + v[2]), v20 = 0.5 * (v[2] + v[0]);
    {
        const double cu[3] = {u[0], u01, u20}, cv[3] = {v[0], v01, v20};
        region_integral_rec(region, p0, m01, m20, cu, cv, depth + 1, out);
    }
    {
        const double cu[3] = {u01, u[1], u12}, cv[3] = {v01, v[1], v12};
        region_integral_rec(region, m01, p1, m12, cu, cv, depth + 1, out);
    }
    {
        const double cu[3] = {u20, u12, u[2]}, cv[3] = {v20, v12, v[2]};
        region_integral_rec(region, m20, m12, p2, cu, cv, depth + 1, out);
    }
    {
        const double cu[3] = {u01, u12, u20}, cv[3] = {v01, v12, v20};
        region_integral_rec(region, m01, m12, m20, cu, cv, depth + 1, out);
    }
}

inline RegionQuadResult region_weighted_product(const TriangleMesh& mesh, const Region& region,
                                                const Eigen::VectorXd& u,
                                                const Eigen::VectorXd& v) {
    RegionQuadResult out;
    for (const auto& tri : mesh.triangles) {
        const double cu[3] = {u[tri[0]], u[tri[1]], u[tri[2]]};
        const double cv[3] = {v[tri[0]], v[tri[1]], v[tri[2]]};
        region_integral_rec(region, mesh.nodes[tri[0]], mesh.nodes[tri[1]],
                            mesh.nodes[tri[2]], cu, cv, 0, out);
    }
    return out;
}

inline void require_same_domain(const Spectrum& spectrum, const RationalPolygon& domain) {
    const auto& mesh_poly = *spectrum.mesh->polygon;
    if (mesh_poly.size() != domain.size())
        throw RegionOutsideDomain("observable domain does not match the spectrum's polygon");
    for (std::size_t i = 0; i < domain.size(); ++i) {
        if (distance(mesh_poly.vertices()[i], domain.vertices()[i]) > 1e-12)
            throw RegionOutsideDomain("observable domain does not match the spectrum's polygon");
    }
}

}  // namespace measdetail

// <a0 psi_i, psi_j>: off-diagonal matrix element of the multiplication
// operator. Smooth kinds go through the degree-4 rule; indicators through the
// subdividing region quadrature.
inline double matrix_element(const Spectrum& spectrum, const Observable& obs, std::size_t i,
                             std::size_t j) {
    if (i >= spectrum.size() || j >= spectrum.size())
        throw Error("matrix_element: mode index out of range");
    measdetail::require_same_domain(spectrum, obs.domain());
    const auto& mesh = *spectrum.mesh;
    if (const Region* region = obs.region())
        return measdetail::region_weighted_product(mesh, *region, spectrum.vectors[i],
                                                   spectrum.vectors[j])
            .value;
    return fe_weighted_product(mesh, spectrum.vectors[i], spectrum.vectors[j],
                               [&obs](const Vec2& x) { return obs.eval(x); });
}

// mu_n for observables, int_A |psi_n|^2 for regions.
inline double matrix_element(const Spectrum& spectrum, const Observable& obs, std::size_t n) {
    return matrix_element(spectrum, obs, n, n);
}

inline double matrix_element(const Spectrum& spectrum, const Region& region, std::size_t n) {
    return matrix_element(spectrum, Observable::indicator(region), n, n);
}

// ---------------------------------------------------------------------------
// Series and statistics
// ---------------------------------------------------------------------------

// mu_n = <a0 psi_n, psi_n> for every computed mode, with the equidistribution
// target: area(A)/area(D) for regions, abar for observables.
struct MeasureSeries {
    std::vector<double> values;
    std::vector<double> energies;
    double target = 0.0;
    std::string observable_name;
    double quad_uncertainty = 0.0;  // max per-mode quadrature-error estimate
};

inline MeasureSeries measure_series(const Spectrum& spectrum, const Observable& obs) {
    measdetail::require_same_domain(spectrum, obs.domain());
    MeasureSeries series;
    series.energies = spectrum.eigenvalues;
    series.target = obs.abar();
    series.observable_name = obs.name();
    series.values.resize(spectrum.size());
    std::vector<double> uncertainty(spectrum.size(), 0.0);

    const auto& mesh = *spectrum.mesh;
    const Region* region = obs.region();
    parallel_for(spectrum.size(), [&](std::size_t n) {
        if (region) {
            const auto r = measdetail::region_weighted_product(mesh, *region,
                                                               spectrum.vectors[n],
                                                               spectrum.vectors[n]);
            series.values[n] = r.value;
            uncertainty[n] = r.uncertainty;
        } else {
            series.values[n] =
                fe_weighted_product(mesh, spectrum.vectors[n], spectrum.vectors[n],
                                    [&obs](const Vec2& x) { return obs.eval(x); });
        }
    });
    for (double u : uncertainty) series.quad_uncertainty = std::max(series.quad_uncertainty, u);

    if (region) {
        for (std::size_t n = 0; n < series.values.size(); ++n) {
            if (series.values[n] < -1e-6 || series.values[n] > 1.0 + 1e-6)
                throw Error("measure_series: mu_" + std::to_string(n + 1) +
                            " escaped [0, 1] beyond quadrature slack");
        }
    }
    return series;
}

// Quantum variance V(A, E) = (1/N(E)) sum_{E_n <= E} |mu_n - target|^2.
struct VarianceCurve {
    std::vector<double> cutoffs;
    std::vector<double> variance;
    std::vector<std::size_t> counts;
    double target = 0.0;
};

inline VarianceCurve quantum_variance(const MeasureSeries& series,
                                      const std::vector<double>& cutoffs) {
    VarianceCurve curve;
    curve.target = series.target;
    const double e_max = series.energies.empty() ? 0.0 : series.energies.back();
    for (double cutoff : cutoffs) {
        if (cutoff > e_max * (1.0 + 1e-12))
            throw Error("quantum_variance: cutoff " + std::to_string(cutoff) +
                        " beyond the computed spectral range");
        std::size_t count = 0;
        double sum = 0.0;
        for (std::size_t n = 0; n < series.values.size(); ++n) {
            if (series.energies[n] <= cutoff) {
                ++count;
                const double d = series.values[n] - series.target;
                sum += d * d;
            }
        }
        if (count == 0) throw EmptyWindow(cutoff);
        curve.cutoffs.push_back(cutoff);
        curve.counts.push_back(count);
        curve.variance.push_back(sum / static_cast<double>(count));
    }
    return curve;
}

// Local Weyl law diagnostic: running means (1/N(E)) sum <a psi_n, psi_n> -> abar.
inline std::vector<double> local_weyl_average(const MeasureSeries& series,
                                              const std::vector<double>& cutoffs) {
    std::vector<double> means;
    const double e_max = series.energies.empty() ? 0.0 : series.energies.back();
    for (double cutoff : cutoffs) {
        if (cutoff > e_max * (1.0 + 1e-12))
            throw Error("local_weyl_average: cutoff beyond the computed spectral range");
        std::size_t count = 0;
        double sum = 0.0;
        for (std::size_t n = 0; n < series.values.size(); ++n) {
            if (series.energies[n] <= cutoff) {
                ++count;
                sum += series.values[n];
            }
        }
        if (count == 0) throw EmptyWindow(cutoff);
        means.push_back(sum / static_cast<double>(count));
    }
    return means;
}

// Density-one subsequence extraction: indices with |mu_n - target| <= epsilon,
// plus the empirical density profile and the Chebyshev cross-check against the
// variance curve.
struct TypicalSubsequence {
    std::vector<std::size_t> indices;  // 1-based mode indices, increasing
    double epsilon = 0.0;
    std::vector<std::pair<std::size_t, double>> density_profile;  // (N, density(N))
    // max over N of (1 - density(N)) - V(E_N)/eps^2; Chebyshev makes this <= 0
    // up to rounding.
    double chebyshev_max_violation = -std::numeric_limits<double>::infinity();
};

inline TypicalSubsequence extract_typical(const MeasureSeries& series, double epsilon) {
    if (!(epsilon > 0.0)) throw Error("extract_typical: epsilon must be positive");
    TypicalSubsequence out;
    out.epsilon = epsilon;
    const std::size_t total = series.values.size();
    for (std::size_t n = 0; n < total; ++n) {
        if (std::abs(series.values[n] - series.target) <= epsilon)
            out.indices.push_back(n + 1);
    }
    // Density profile at tie-free N (E_N strictly below E_{N+1} as floats), so
    // "count up to E_N" is unambiguously N and the Chebyshev comparison with
    // V(A, E_N) is exact.
    std::size_t included = 0;
    std::size_t next = 0;
    double cumulative = 0.0;
    for (std::size_t n = 1; n <= total; ++n) {
        while (next < out.indices.size() && out.indices[next] <= n) {
            ++included;
            ++next;
        }
        const double d = series.values[n - 1] - series.target;
        cumulative += d * d;
        const bool tie_free = n == total || series.energies[n] > series.energies[n - 1];
        if (!tie_free) continue;
        const double density = static_cast<double>(included) / static_cast<double>(n);
        out.density_profile.emplace_back(n, density);
        const double variance = cumulative / static_cast<double>(n);
        out.chebyshev_max_violation = std::max(
            out.chebyshev_max_violation, (1.0 - density) - variance / (epsilon * epsilon));
    }
    return out;
}

// Index-based cutoff grid: energies at (roughly) evenly spaced mode counts,
// shifted down to tie-free positions.
inline std::vector<double> auto_cutoffs(const MeasureSeries& series, std::size_t how_many = 10) {
    const std::size_t total = series.energies.size();
    if (total == 0) throw Error("auto_cutoffs: empty series");
    std::vector<double> cutoffs;
    for (std::size_t j = 1; j <= how_many; ++j) {
        std::size_t n = std::max<std::size_t>(1, total * j / how_many);
        while (n > 1 && n < total && series.energies[n] <= series.energies[n - 1])
            --n;  // step off ties
        const double cutoff = series.energies[n - 1];
        if (cutoffs.empty() || cutoff > cutoffs.back()) cutoffs.push_back(cutoff);
    }
    return cutoffs;
}

}  // namespace polyq

#endif  // POLYQ_MEASURES_HPP
