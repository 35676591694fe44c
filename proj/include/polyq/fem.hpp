#ifndef POLYQ_FEM_HPP
#define POLYQ_FEM_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <array>
#include <memory>
#include <vector>

#include "polyq/errors.hpp"
#include "polyq/mesh.hpp"
#include "polyq/quadrature.hpp"

namespace polyq {

// Linear-element discretization of the Dirichlet Laplacian: stiffness and
// consistent mass over interior nodes only (boundary rows and columns are
// eliminated, the discrete counterpart of "vanish at the boundary").
struct StiffnessMassSystem {
    Eigen::SparseMatrix<double> stiffness;
    Eigen::SparseMatrix<double> mass;
    std::vector<int> interior_index;  // mesh node -> matrix index, -1 on the boundary
    std::vector<int> interior_nodes;  // matrix index -> mesh node
    double total_mass = 0.0;          // sum of all unconstrained mass entries = area(D)
    std::shared_ptr<const TriangleMesh> mesh;

    Eigen::Index dim() const { return stiffness.rows(); }
};

namespace femdetail {

struct ElementMatrices {
    std::array<std::array<double, 3>, 3> k;
    std::array<std::array<double, 3>, 3> m;
    double area;
};

inline ElementMatrices element_matrices(const Vec2& p0, const Vec2& p1, const Vec2& p2) {
    ElementMatrices e;
    e.area = 0.5 * cross(p1 - p0, p2 - p0);
    const Vec2 g[3] = {(p2 - p1).perp() / (2.0 * e.area),
                       (p0 - p2).perp() / (2.0 * e.area),
                       (p1 - p0).perp() / (2.0 * e.area)};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            e.k[i][j] = e.area * dot(g[i], g[j]);
            e.m[i][j] = e.area / 12.0 * (i == j ? 2.0 : 1.0);
        }
    }
    return e;
}

}  // namespace femdetail

inline StiffnessMassSystem assemble(const TriangleMesh& mesh) {
    StiffnessMassSystem sys;
    sys.mesh = std::make_shared<TriangleMesh>(mesh);

    const std::size_t n = mesh.nodes.size();
    sys.interior_index.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (!mesh.node_on_boundary[i]) {
            sys.interior_index[i] = static_cast<int>(sys.interior_nodes.size());
            sys.interior_nodes.push_back(static_cast<int>(i));
        }
    }
    const auto dim = static_cast<Eigen::Index>(sys.interior_nodes.size());
    if (dim == 0) throw Error("assemble: mesh has no interior nodes; refine first");

    std::vector<Eigen::Triplet<double>> kt, mt;
    kt.reserve(mesh.triangles.size() * 9);
    mt.reserve(mesh.triangles.size() * 9);
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        const auto e = femdetail::element_matrices(mesh.nodes[tri[0]], mesh.nodes[tri[1]],
                                                   mesh.nodes[tri[2]]);
        if (e.area <= 0.0) throw SingularElement(t);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                sys.total_mass += e.m[i][j];
                const int gi = sys.interior_index[tri[i]];
                const int gj = sys.interior_index[tri[j]];
                if (gi >= 0 && gj >= 0) {
                    kt.emplace_back(gi, gj, e.k[i][j]);
                    mt.emplace_back(gi, gj, e.m[i][j]);
                }
            }
        }
    }
    sys.stiffness.resize(dim, dim);
    sys.mass.resize(dim, dim);
    sys.stiffness.setFromTriplets(kt.begin(), kt.end());
    sys.mass.setFromTriplets(mt.begin(), mt.end());
    sys.stiffness.makeCompressed();
    sys.mass.makeCompressed();
    return sys;
}

// int fn(x) * u(x) * v(x) over the mesh, where u, v are P1 fields given by
// full-length nodal vectors; fn is sampled at a degree-4 triangle rule, which
// integrates the quadratic product u*v exactly when fn is constant.
template <typename Fn>
double fe_weighted_product(const TriangleMesh& mesh, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& v, Fn&& fn) {
    double total = 0.0;
    const auto& rule = tri_rule_degree4();
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        const Vec2& p0 = mesh.nodes[tri[0]];
        const Vec2& p1 = mesh.nodes[tri[1]];
        const Vec2& p2 = mesh.nodes[tri[2]];
        const double area = 0.5 * cross(p1 - p0, p2 - p0);
        double acc = 0.0;
        for (const auto& q : rule) {
            const Vec2 x = q.l1 * p0 + q.l2 * p1 + q.l3 * p2;
            const double uu = q.l1 * u[tri[0]] + q.l2 * u[tri[1]] + q.l3 * u[tri[2]];
            const double vv = q.l1 * v[tri[0]] + q.l2 * v[tri[1]] + q.l3 * v[tri[2]];
            acc += q.w * fn(x) * uu * vv;
        }
        total += area * acc;
    }
    return total;
}

}  // namespace polyq

#endif  // POLYQ_FEM_HPP
