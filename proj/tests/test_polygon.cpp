#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "polyq/polygon.hpp"

using namespace polyq;

namespace {

std::vector<Vec2> square_vertices() { return {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; }
std::vector<Fraction> square_certs() { return {{1, 2}, {1, 2}, {1, 2}, {1, 2}}; }

std::vector<Vec2> l_vertices() { return {{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}; }
std::vector<Fraction> l_certs() { return {{1, 2}, {1, 2}, {1, 2}, {3, 2}, {1, 2}, {1, 2}}; }

}  // namespace

TEST_CASE("unit square builds and validates") {
    const auto poly = build_polygon(square_vertices(), square_certs());
    CHECK(poly.size() == 4);
    CHECK(polygon_area(poly) == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("L-shape builds with one reflex angle") {
    const auto poly = build_polygon(l_vertices(), l_certs());
    CHECK(poly.size() == 6);
    CHECK(polygon_area(poly) == Catch::Approx(3.0).margin(1e-15));
    CHECK(interior_angle(poly.vertices(), 3) == Catch::Approx(3.0 * kPi / 2.0).margin(1e-12));
}

TEST_CASE("wrong certificate is rejected with vertex diagnostics") {
    auto certs = square_certs();
    certs[0] = Fraction{1, 3};
    try {
        build_polygon(square_vertices(), certs);
        FAIL("expected AngleCertificateMismatch");
    } catch (const AngleCertificateMismatch& e) {
        CHECK(e.vertex_index == 0);
        CHECK(e.certified_angle == Catch::Approx(kPi / 3.0));
        CHECK(e.measured_angle == Catch::Approx(kPi / 2.0));
    }
}

TEST_CASE("self-intersecting ring is rejected") {
    // Bowtie: certificates are irrelevant, the crossing is detected first.
    std::vector<Vec2> bowtie = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
    CHECK_THROWS_AS(build_polygon(bowtie, square_certs()), SelfIntersecting);
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(build_polygon({{0, 0}, {1, 0}}, {{1, 2}, {1, 2}}), NotClosed);
    CHECK_THROWS_AS(build_polygon({{0, 0}, {1, 0}, {1, 0}, {0, 1}}, square_certs()), NotClosed);
    // Three consecutive collinear vertices.
    CHECK_THROWS_AS(
        build_polygon({{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}},
                      {{1, 2}, {1, 1}, {1, 2}, {1, 2}, {1, 2}}),
        NotClosed);
    // Clockwise ring.
    CHECK_THROWS_AS(build_polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}, square_certs()), Error);
}

TEST_CASE("fractions must be reduced and positive") {
    CHECK_THROWS_AS(Fraction(2, 4), Error);
    CHECK_THROWS_AS(Fraction(0, 1), Error);
    CHECK_THROWS_AS(Fraction(1, 0), Error);
    CHECK(Fraction(3, 2).value() == Catch::Approx(1.5));
}

TEST_CASE("triangle area") {
    const auto tri = build_polygon({{0, 0}, {1, 0}, {0, 1}}, {{1, 2}, {1, 4}, {1, 4}});
    CHECK(polygon_area(tri) == Catch::Approx(0.5).margin(1e-15));
}

TEST_CASE("builtin polygons validate and have expected areas") {
    CHECK(builtin::unit_square().area() == Catch::Approx(1.0));
    CHECK(builtin::rectangle(2, 1).area() == Catch::Approx(2.0));
    CHECK(builtin::right_isoceles(1.0).area() == Catch::Approx(0.5));
    CHECK(builtin::right_isoceles(kPi).area() == Catch::Approx(kPi * kPi / 2.0));
    CHECK(builtin::triangle_pi8().area() == Catch::Approx(0.5 * std::tan(3 * kPi / 8)));
    CHECK(builtin::equilateral().area() == Catch::Approx(std::sqrt(3.0) / 4.0));
    CHECK(builtin::l_shape().area() == Catch::Approx(3.0));
    CHECK(builtin_polygon("square").has_value());
    CHECK(builtin_polygon("l-shape").has_value());
    CHECK_FALSE(builtin_polygon("dodecagon").has_value());
}

TEST_CASE("exterior turning angles sum to 2*pi") {
    for (const char* name : {"square", "l-shape", "triangle-pi8", "equilateral"}) {
        const auto poly = *builtin_polygon(name);
        double turning = 0.0;
        for (std::size_t i = 0; i < poly.size(); ++i)
            turning += kPi - interior_angle(poly.vertices(), i);
        CHECK_THAT(turning, Catch::Matchers::WithinAbs(2.0 * kPi, 1e-9 * static_cast<double>(poly.size())));
    }
}

TEST_CASE("area is positive and invariant under cyclic relabeling") {
    const auto base_v = l_vertices();
    const auto base_c = l_certs();
    const double ref = build_polygon(base_v, base_c).area();
    for (std::size_t shift = 1; shift < base_v.size(); ++shift) {
        std::vector<Vec2> v;
        std::vector<Fraction> c;
        for (std::size_t i = 0; i < base_v.size(); ++i) {
            v.push_back(base_v[(i + shift) % base_v.size()]);
            c.push_back(base_c[(i + shift) % base_c.size()]);
        }
        const auto poly = build_polygon(v, c);
        CHECK(poly.area() > 0.0);
        CHECK(poly.area() == Catch::Approx(ref).margin(1e-13));
    }
}

TEST_CASE("point-in-polygon handles the reflex corner") {
    const auto poly = builtin::l_shape();
    CHECK(poly.contains({0.5, 0.5}));
    CHECK(poly.contains({1.5, 0.5}));
    CHECK(poly.contains({0.5, 1.5}));
    CHECK_FALSE(poly.contains({1.5, 1.5}));  // removed quadrant
    CHECK(poly.contains({1.0, 1.0}));        // reflex corner is on the boundary
    CHECK_FALSE(poly.contains({2.5, 0.5}));
}

TEST_CASE("halfplane clip recovers areas") {
    const auto ring = square_vertices();
    const auto left = clip_halfplane(ring, {1, 0}, 0.5);
    CHECK(signed_area(left) == Catch::Approx(0.5));
    const auto l_ring = l_vertices();
    const auto l_left = clip_halfplane(l_ring, {1, 0}, 1.0);
    CHECK(signed_area(l_left) == Catch::Approx(2.0));
}
