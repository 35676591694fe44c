#ifndef POLYQ_QUADRATURE_HPP
#define POLYQ_QUADRATURE_HPP

#include <array>
#include <cmath>

#include "polyq/common.hpp"

namespace polyq {

// Six-point symmetric triangle rule, exact through degree 4 (Dunavant).
// Weights are normalized to sum to 1; multiply by the triangle area.
struct TriQuadPoint {
    double l1, l2, l3;  // barycentric coordinates
    double w;
};

inline const std::array<TriQuadPoint, 6>& tri_rule_degree4() {
    static const std::array<TriQuadPoint, 6> rule = [] {
        const double a1 = 0.816847572980459, b1 = 0.091576213509771, w1 = 0.109951743655322;
        const double a2 = 0.108103018168070, b2 = 0.445948490915965, w2 = 0.223381589678011;
        return std::array<TriQuadPoint, 6>{{{a1, b1, b1, w1},
                                            {b1, a1, b1, w1},
                                            {b1, b1, a1, w1},
                                            {a2, b2, b2, w2},
                                            {b2, a2, b2, w2},
                                            {b2, b2, a2, w2}}};
    }();
    return rule;
}

namespace detail {

template <typename Fn>
double simpson(Fn&& f, double a, double fa, double m, double fm, double b, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename Fn>
double adaptive_simpson_rec(Fn&& f, double a, double fa, double b, double fb, double m,
                            double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, fa, lm, flm, m, fm);
    const double right = simpson(f, m, fm, rm, frm, b, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson on [a, b] with absolute tolerance.
template <typename Fn>
double adaptive_simpson(Fn&& f, double a, double b, double tol, int max_depth = 40) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = detail::simpson(f, a, fa, m, fm, b, fb);
    return detail::adaptive_simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

}  // namespace polyq

#endif  // POLYQ_QUADRATURE_HPP
