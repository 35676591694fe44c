#ifndef POLYQ_SPECTRAL_CHECKS_HPP
#define POLYQ_SPECTRAL_CHECKS_HPP

#include <cmath>
#include <vector>

#include "polyq/eigensolver.hpp"
#include "polyq/mesh.hpp"
#include "polyq/polygon.hpp"

namespace polyq {

// Two-term Weyl counting used as a solver sanity oracle:
// N(E) ~ area*E/(4 pi) - perimeter*sqrt(E)/(4 pi). Counting stops at 80% of
// the computed range, where discretization has not yet polluted the counts.
struct WeylCheck {
    double E_max = 0.0;
    double cutoff = 0.0;
    std::size_t counted = 0;
    double predicted = 0.0;
    double rel_gap = 0.0;
};

inline WeylCheck weyl_check(const Spectrum& spectrum, const RationalPolygon& poly) {
    if (spectrum.size() == 0) throw Error("weyl_check: empty spectrum");
    WeylCheck w;
    w.E_max = spectrum.eigenvalues.back();
    w.cutoff = 0.8 * w.E_max;
    for (double e : spectrum.eigenvalues) {
        if (e <= w.cutoff) ++w.counted;
    }
    w.predicted = poly.area() * w.cutoff / (4.0 * kPi) -
                  poly.perimeter() * std::sqrt(w.cutoff) / (4.0 * kPi);
    w.rel_gap = (static_cast<double>(w.counted) - w.predicted) / w.predicted;
    return w;
}

struct ConvergenceRow {
    int level = 0;
    double h = 0.0;
    std::vector<double> eigenvalues;
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    // Empirical convergence orders for each mode, from the last three levels:
    // log2( (E(h) - E(h/2)) / (E(h/2) - E(h/4)) ). Near 2 for linear elements.
    std::vector<double> orders;
};

// Richardson extrapolation for second-order-convergent eigenvalues.
inline double richardson(double e_coarse, double e_fine) {
    return e_fine + (e_fine - e_coarse) / 3.0;
}

inline ConvergenceStudy convergence_study(const RationalPolygon& poly, std::size_t k,
                                          std::size_t levels, double h0 = 0.0,
                                          const SolveOptions& opts = {}) {
    if (k < 1) throw Error("convergence_study: k must be at least 1");
    if (levels < 2) throw Error("convergence_study: need at least 2 levels");
    if (h0 <= 0.0) h0 = poly.diameter() / 8.0;

    ConvergenceStudy study;
    TriangleMesh mesh = triangulate(poly, h0);
    for (std::size_t level = 0; level < levels; ++level) {
        if (level > 0) mesh = refine(mesh);
        const auto spec = solve_lowest(assemble(mesh), k, opts);
        study.rows.push_back({mesh.level, mesh.h, spec.eigenvalues});
    }
    if (levels >= 3) {
        const auto& a = study.rows[levels - 3].eigenvalues;
        const auto& b = study.rows[levels - 2].eigenvalues;
        const auto& c = study.rows[levels - 1].eigenvalues;
        for (std::size_t n = 0; n < k; ++n) {
            const double num = a[n] - b[n];
            const double den = b[n] - c[n];
            study.orders.push_back(den != 0.0 ? std::log2(num / den) : 0.0);
        }
    }
    return study;
}

}  // namespace polyq

#endif  // POLYQ_SPECTRAL_CHECKS_HPP
