#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "polyq/observable.hpp"
#include "polyq/sampling.hpp"

using namespace polyq;

TEST_CASE("constant observable") {
    const auto square = builtin::unit_square();
    const auto c = Observable::constant(square, 2.5);
    CHECK(c.eval({0.3, 0.7}) == 2.5);
    CHECK(c.mean() == 2.5);
    CHECK(c.segment_integral({0, 0.5}, {1, 0}, 0.8) == Catch::Approx(2.0));
}

TEST_CASE("cos(2 pi x) has zero mean on square and L-shape") {
    for (const char* name : {"square", "l-shape"}) {
        const auto poly = *builtin_polygon(name);
        const auto obs = Observable::trig(poly, {{1.0, 1.0, 0.0, 0.0}});
        CHECK_THAT(obs.mean(), Catch::Matchers::WithinAbs(0.0, 1e-13));
        CHECK(obs.eval({0.0, 0.3}) == Catch::Approx(1.0));
        CHECK(obs.eval({0.25, 0.9}) == Catch::Approx(0.0).margin(1e-15));
        CHECK(obs.eval({0.5, 0.1}) == Catch::Approx(-1.0));
    }
}

TEST_CASE("exact polygon integral of a trig term matches closed forms") {
    // Rectangle [0,1]^2, integrand cos(alpha x): integral = sin(alpha)/alpha.
    const auto square = builtin::unit_square();
    for (double kx : {0.3, 1.0, 2.7}) {
        const double alpha = 2 * kPi * kx;
        const double expected = std::sin(alpha) / alpha;
        const double got = polygon_cos_integral(square.vertices(), alpha, 0.0, 0.0);
        CHECK_THAT(got, Catch::Matchers::WithinAbs(expected, 1e-12));
    }
    // Reference triangle, integrand cos(alpha x): integral = (1 - cos(alpha)) / alpha^2.
    const std::vector<Vec2> tri = {{0, 0}, {1, 0}, {0, 1}};
    for (double alpha : {0.7, 3.0, 11.0}) {
        const double expected = (1.0 - std::cos(alpha)) / (alpha * alpha);
        CHECK_THAT(polygon_cos_integral(tri, alpha, 0.0, 0.0),
                   Catch::Matchers::WithinAbs(expected, 1e-12));
    }
    // Pure-y integrand exercises the beta-dominant branch.
    for (double beta : {0.9, 4.0}) {
        const double expected = (1.0 - std::cos(beta)) / (beta * beta);
        const std::vector<Vec2> tri_y = {{0, 0}, {1, 0}, {0, 1}};
        CHECK_THAT(polygon_cos_integral(tri_y, 0.0, beta, 0.0),
                   Catch::Matchers::WithinAbs(expected, 1e-12));
    }
    // Mixed-frequency term on the square against the separable closed form.
    const double a = 2 * kPi * 1.0, b = 2 * kPi * 2.0, phase = 0.4;
    // int cos(a x + b y + phase) over [0,1]^2 via product-to-sum:
    double expected = 0.0;
    {
        // Integrate in x then y analytically.
        auto inner = [&](double y) {
            return (std::sin(a + b * y + phase) - std::sin(b * y + phase)) / a;
        };
        expected = (-std::cos(a + b + phase) + std::cos(a + phase) + std::cos(b + phase) -
                    std::cos(phase)) /
                   (a * b);
        (void)inner;
    }
    CHECK_THAT(polygon_cos_integral(square.vertices(), a, b, phase),
               Catch::Matchers::WithinAbs(expected, 1e-12));
}

TEST_CASE("trig segment integral matches adaptive quadrature") {
    const auto square = builtin::unit_square();
    const auto obs = Observable::trig(square, {{0.7, 1.0, 0.0, 0.2}, {0.3, 2.0, 3.0, 1.1}});
    auto engine = engine_for(31, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const Vec2 start{unit_double(engine), unit_double(engine)};
        const double phi = 2 * kPi * unit_double(engine);
        const Vec2 dir{std::cos(phi), std::sin(phi)};
        const double len = 0.1 + unit_double(engine);
        const double exact = obs.segment_integral(start, dir, len);
        const double quad = adaptive_simpson(
            [&](double t) { return obs.eval(start + t * dir); }, 0.0, len, 1e-12);
        CHECK_THAT(exact, Catch::Matchers::WithinAbs(quad, 1e-9));
    }
}

TEST_CASE("bump profile and mean") {
    const auto square = builtin::unit_square();
    const auto obs = Observable::bump(square, {0.5, 0.5}, 0.1, 0.3, 2.0);
    CHECK(obs.eval({0.5, 0.5}) == 2.0);
    CHECK(obs.eval({0.55, 0.5}) == 2.0);                 // inside the plateau
    CHECK(obs.eval({0.5, 0.85}) == 0.0);                 // outside the support
    CHECK(obs.eval({0.5 + 0.2, 0.5}) == Catch::Approx(1.0));  // transition midpoint
    const double v = obs.eval({0.5, 0.5 + 0.25});
    CHECK(v > 0.0);
    CHECK(v < 2.0);

    // 2-D tensor-Simpson oracle over the support square.
    const int n = 400;
    const double lo = 0.2, hi = 0.8, step = (hi - lo) / n;
    double integral = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double wx = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        for (int j = 0; j <= n; ++j) {
            const double wy = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
            integral += wx * wy * obs.eval({lo + i * step, lo + j * step});
        }
    }
    integral *= step * step / 9.0;
    CHECK_THAT(obs.mean(), Catch::Matchers::WithinAbs(integral / square.area(), 1e-8));
}

TEST_CASE("bump support must stay inside the interior") {
    const auto square = builtin::unit_square();
    CHECK_THROWS_AS(Observable::bump(square, {0.5, 0.5}, 0.0, 0.6), Error);
    CHECK_THROWS_AS(Observable::bump(square, {0.9, 0.9}, 0.0, 0.2), Error);
    CHECK_THROWS_AS(Observable::bump(square, {0.5, 0.5}, 0.3, 0.2), Error);
    CHECK_NOTHROW(Observable::bump(square, {0.5, 0.5}, 0.0, 0.49));
}

TEST_CASE("bump segment integral agrees with quadrature of eval") {
    const auto square = builtin::unit_square();
    const auto obs = Observable::bump(square, {0.4, 0.6}, 0.05, 0.25);
    auto engine = engine_for(77, 1);
    for (int trial = 0; trial < 10; ++trial) {
        const Vec2 start{unit_double(engine), unit_double(engine)};
        const double phi = 2 * kPi * unit_double(engine);
        const Vec2 dir{std::cos(phi), std::sin(phi)};
        const double len = 0.2 + unit_double(engine) * 0.7;
        const double got = obs.segment_integral(start, dir, len);
        const double quad = adaptive_simpson(
            [&](double t) { return obs.eval(start + t * dir); }, 0.0, len, 1e-12, 48);
        CHECK_THAT(got, Catch::Matchers::WithinAbs(quad, 1e-8));
    }
    // A segment missing the support contributes exactly zero.
    CHECK(obs.segment_integral({0.0, 0.05}, {1, 0}, 1.0) == 0.0);
}

TEST_CASE("indicator observable: exact chord lengths") {
    const auto square = builtin::unit_square();
    const Region left(square, Region::HalfPlane{{1, 0}, 0.5}, "left-half");
    const auto ind = Observable::indicator(left);
    CHECK(ind.mean() == Catch::Approx(0.5));
    CHECK(ind.segment_integral({0.1, 0.5}, {1, 0}, 0.8) == Catch::Approx(0.4).margin(1e-12));
    CHECK(ind.segment_integral({0.6, 0.1}, {0, 1}, 0.7) == Catch::Approx(0.0).margin(1e-12));
    CHECK(ind.segment_integral({0.2, 0.1}, {0, 1}, 0.7) == Catch::Approx(0.7).margin(1e-12));

    const Region disk(square, Region::Disk{{0.5, 0.5}, 0.25});
    const auto ind_disk = Observable::indicator(disk);
    // Horizontal chord through the center has length 2r.
    CHECK(ind_disk.segment_integral({0.0, 0.5}, {1, 0}, 1.0) == Catch::Approx(0.5).margin(1e-12));
    // Chord at height offset 0.15: half-length sqrt(r^2 - 0.15^2).
    const double half = std::sqrt(0.25 * 0.25 - 0.15 * 0.15);
    CHECK(ind_disk.segment_integral({0.0, 0.65}, {1, 0}, 1.0) ==
          Catch::Approx(2 * half).margin(1e-12));

    const Region tri(square, Region::SubPolygon{{{0.2, 0.2}, {0.8, 0.2}, {0.2, 0.8}}});
    const auto ind_tri = Observable::indicator(tri);
    // Horizontal line y = 0.4 crosses the triangle from x=0.2 to x=0.6.
    CHECK(ind_tri.segment_integral({0.0, 0.4}, {1, 0}, 1.0) == Catch::Approx(0.4).margin(1e-10));
}
