#include <catch2/catch_amalgamated.hpp>

#include "polyq/fem.hpp"
#include "polyq/sampling.hpp"

using namespace polyq;

TEST_CASE("element stiffness on the reference triangle") {
    const auto e = femdetail::element_matrices({0, 0}, {1, 0}, {0, 1});
    CHECK(e.area == Catch::Approx(0.5));
    const double expected[3][3] = {{1.0, -0.5, -0.5}, {-0.5, 0.5, 0.0}, {-0.5, 0.0, 0.5}};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            CHECK_THAT(e.k[i][j], Catch::Matchers::WithinAbs(expected[i][j], 1e-14));
        }
    }
    // Element mass sums to the area (mass of the constant 1).
    double mass_sum = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) mass_sum += e.m[i][j];
    CHECK_THAT(mass_sum, Catch::Matchers::WithinAbs(e.area, 1e-15));
}

TEST_CASE("assembled system: symmetry, positivity, total mass") {
    for (const char* name : {"square", "l-shape"}) {
        const auto poly = *builtin_polygon(name);
        const auto mesh = triangulate(poly, 0.25);
        const auto sys = assemble(mesh);
        REQUIRE(sys.dim() > 0);
        CHECK_THAT(sys.total_mass, Catch::Matchers::WithinAbs(poly.area(), 1e-10));

        const Eigen::SparseMatrix<double> k_asym =
            Eigen::SparseMatrix<double>(sys.stiffness.transpose()) - sys.stiffness;
        const Eigen::SparseMatrix<double> m_asym =
            Eigen::SparseMatrix<double>(sys.mass.transpose()) - sys.mass;
        CHECK(Eigen::MatrixXd(k_asym).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK(Eigen::MatrixXd(m_asym).cwiseAbs().maxCoeff() <= 1e-12);

        // M row sums are positive (consistent mass of a positive partition).
        const Eigen::VectorXd row_sums =
            sys.mass * Eigen::VectorXd::Ones(sys.dim());
        CHECK(row_sums.minCoeff() > 0.0);
    }
}

TEST_CASE("stiffness row sum vanishes at a fully interior node") {
    // On the twice-refined square mesh the center node touches no boundary
    // node, so its row reproduces the constant-kernel property exactly.
    const auto mesh = refine(refine(triangulate(builtin::unit_square(), 0.5)));
    const auto sys = assemble(mesh);
    int center = -1;
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        if (distance(mesh.nodes[i], {0.5, 0.5}) < 1e-12) center = sys.interior_index[i];
    }
    REQUIRE(center >= 0);
    double row_sum = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.stiffness, center); it; ++it)
        row_sum += it.value();
    // Column iteration suffices: the matrix is symmetric.
    CHECK_THAT(row_sum, Catch::Matchers::WithinAbs(0.0, 1e-12));
}

TEST_CASE("interior index maps are consistent") {
    const auto mesh = triangulate(builtin::l_shape(), 0.3);
    const auto sys = assemble(mesh);
    for (std::size_t i = 0; i < sys.interior_nodes.size(); ++i)
        CHECK(sys.interior_index[sys.interior_nodes[i]] == static_cast<int>(i));
    std::size_t interior = 0;
    for (std::size_t n = 0; n < mesh.nodes.size(); ++n) {
        if (sys.interior_index[n] >= 0) {
            ++interior;
            CHECK_FALSE(mesh.node_on_boundary[n]);
        } else {
            CHECK(mesh.node_on_boundary[n]);
        }
    }
    CHECK(interior == static_cast<std::size_t>(sys.dim()));
}

TEST_CASE("fe_weighted_product with unit weight equals the mass quadratic form") {
    const auto mesh = triangulate(builtin::unit_square(), 0.25);
    const auto sys = assemble(mesh);
    auto engine = engine_for(5, 0);
    Eigen::VectorXd full = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.nodes.size()));
    Eigen::VectorXd interior(sys.dim());
    for (Eigen::Index i = 0; i < sys.dim(); ++i) {
        interior[i] = unit_double(engine) - 0.5;
        full[sys.interior_nodes[static_cast<std::size_t>(i)]] = interior[i];
    }
    const double quad = fe_weighted_product(mesh, full, full, [](const Vec2&) { return 1.0; });
    const double form = interior.dot(sys.mass * interior);
    CHECK_THAT(quad, Catch::Matchers::WithinRel(form, 1e-12));
}
