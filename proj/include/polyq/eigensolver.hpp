#ifndef POLYQ_EIGENSOLVER_HPP
#define POLYQ_EIGENSOLVER_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <cstdint>
#include <memory>
#include <vector>

#include "polyq/common.hpp"
#include "polyq/errors.hpp"
#include "polyq/fem.hpp"
#include "polyq/sampling.hpp"

namespace polyq {

// Lowest eigenpairs of K psi = E M psi, ascending, M-orthonormal. Vectors are
// full mesh-node coefficient vectors with boundary entries identically zero.
struct Spectrum {
    std::vector<double> eigenvalues;
    std::vector<Eigen::VectorXd> vectors;
    std::vector<double> residuals;  // relative: ||K x - E M x|| / (E ||M x||)
    double ortho_defect = 0.0;      // max |psi_i^T M psi_j - delta_ij|
    double tol = 0.0;
    std::uint64_t seed = 0;
    std::shared_ptr<const TriangleMesh> mesh;

    std::size_t size() const { return eigenvalues.size(); }
};

struct SolveOptions {
    double tol = 1e-8;
    std::uint64_t seed = 1;
    std::size_t max_iterations = 500;
    // Eigenvalues closer than this (relative) are treated as one degenerate
    // cluster when canonicalizing the returned basis.
    double cluster_rtol = 1e-6;
};

namespace eigdetail {

inline Eigen::MatrixXd seeded_gaussian(Eigen::Index rows, Eigen::Index cols,
                                       std::uint64_t seed) {
    auto engine = engine_for(seed, 0x9e3779b97f4a7c15ull);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            // Box-Muller on deterministic uniforms.
            const double u1 = 1.0 - unit_double(engine);
            const double u2 = unit_double(engine);
            m(i, j) = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
        }
    }
    return m;
}

// Twice-iterated Cholesky QR in the M inner product: X <- X R^{-1} with
// R^T R = X^T M X.
inline void m_orthonormalize(Eigen::MatrixXd& x, const Eigen::SparseMatrix<double>& mass) {
    for (int round = 0; round < 2; ++round) {
        const Eigen::MatrixXd g = x.transpose() * (mass * x);
        Eigen::LLT<Eigen::MatrixXd> llt(g);
        if (llt.info() != Eigen::Success)
            throw NoConvergence("subspace lost rank during orthonormalization", {});
        x = llt.matrixU().solve<Eigen::OnTheRight>(x);
    }
}

// Default tie-breaker used to fix a canonical basis inside numerically
// degenerate clusters: a fixed separable multiplication operator, diagonal in
// the natural product basis of rectangle-like domains.
inline auto cluster_tie_breaker(const TriangleMesh& mesh) {
    const Vec2 lo = mesh.polygon->bbox_min();
    const Vec2 hi = mesh.polygon->bbox_max();
    const double w = hi.x - lo.x, h = hi.y - lo.y;
    return [lo, w, h](const Vec2& p) {
        return 2.0 * std::cos(2.0 * kPi * (p.x - lo.x) / w) +
               std::cos(2.0 * kPi * (p.y - lo.y) / h);
    };
}

inline void canonical_sign(Eigen::VectorXd& v) {
    Eigen::Index argmax = 0;
    double best = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > best + 1e-14) {
            best = std::abs(v[i]);
            argmax = i;
        }
    }
    if (v[argmax] < 0.0) v = -v;
}

}  // namespace eigdetail

// Block subspace iteration with Rayleigh-Ritz extraction (inverse iteration
// through a sparse LDLT of K, which is positive definite after Dirichlet
// elimination). Deterministic given the seed; degenerate eigenvalues come out
// with an orthonormal basis of the eigenspace, canonicalized by a fixed
// tie-breaker observable so reruns and downstream statistics are stable.
inline Spectrum solve_lowest(const StiffnessMassSystem& sys, std::size_t k,
                             const SolveOptions& opts = {}) {
    const Eigen::Index dim = sys.dim();
    if (k < 1) throw Error("solve_lowest: k must be at least 1");
    if (static_cast<Eigen::Index>(3 * k) > dim)
        throw Error("solve_lowest: k = " + std::to_string(k) +
                    " exceeds a third of the matrix dimension " + std::to_string(dim) +
                    "; refine the mesh");

    const Eigen::Index block =
        std::min<Eigen::Index>(dim, static_cast<Eigen::Index>(k + std::max<std::size_t>(8, k / 2)));

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor(sys.stiffness);
    if (factor.info() != Eigen::Success)
        throw NoConvergence("stiffness factorization failed", {});

    Eigen::MatrixXd x = eigdetail::seeded_gaussian(dim, block, opts.seed);
    eigdetail::m_orthonormalize(x, sys.mass);

    Eigen::VectorXd theta(block);
    std::vector<double> rel_res(k, 1.0);
    bool converged = false;

    for (std::size_t iter = 0; iter < opts.max_iterations; ++iter) {
        x = factor.solve(sys.mass * x);
        eigdetail::m_orthonormalize(x, sys.mass);

        const Eigen::MatrixXd a = x.transpose() * (sys.stiffness * x);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (a + a.transpose()));
        if (es.info() != Eigen::Success) throw NoConvergence("dense Rayleigh-Ritz failed", {});
        theta = es.eigenvalues();
        x = x * es.eigenvectors();

        const Eigen::MatrixXd kx = sys.stiffness * x.leftCols(static_cast<Eigen::Index>(k));
        const Eigen::MatrixXd mx = sys.mass * x.leftCols(static_cast<Eigen::Index>(k));
        converged = true;
        for (std::size_t j = 0; j < k; ++j) {
            const auto jj = static_cast<Eigen::Index>(j);
            const double denom = theta[jj] * mx.col(jj).norm();
            rel_res[j] = (kx.col(jj) - theta[jj] * mx.col(jj)).norm() / denom;
            if (rel_res[j] > opts.tol) converged = false;
        }
        if (converged) break;
    }
    if (!converged)
        throw NoConvergence("subspace iteration hit the iteration cap", rel_res);

    Spectrum spec;
    spec.tol = opts.tol;
    spec.seed = opts.seed;
    spec.mesh = sys.mesh;
    spec.eigenvalues.assign(theta.data(), theta.data() + k);

    // Scatter interior coefficients into full-length vectors (boundary = 0).
    const auto n_nodes = static_cast<Eigen::Index>(sys.mesh->nodes.size());
    spec.vectors.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        Eigen::VectorXd full = Eigen::VectorXd::Zero(n_nodes);
        for (Eigen::Index i = 0; i < dim; ++i)
            full[sys.interior_nodes[static_cast<std::size_t>(i)]] = x(i, static_cast<Eigen::Index>(j));
        spec.vectors.push_back(std::move(full));
    }

    // Canonicalize numerically degenerate clusters: diagonalize the
    // tie-breaker within each cluster, order by its eigenvalue, fix signs.
    const auto g = eigdetail::cluster_tie_breaker(*sys.mesh);
    std::size_t lo = 0;
    while (lo < k) {
        std::size_t hi = lo + 1;
        while (hi < k && spec.eigenvalues[hi] - spec.eigenvalues[hi - 1] <=
                             opts.cluster_rtol * std::max(1.0, spec.eigenvalues[hi - 1]))
            ++hi;
        const std::size_t d = hi - lo;
        if (d > 1) {
            Eigen::MatrixXd gm(d, d);
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = i; j < d; ++j) {
                    gm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                        fe_weighted_product(*sys.mesh, spec.vectors[lo + i],
                                            spec.vectors[lo + j], g);
                    gm(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) =
                        gm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                }
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ges(gm);
            std::vector<Eigen::VectorXd> rotated(d);
            for (std::size_t j = 0; j < d; ++j) {
                rotated[j] = Eigen::VectorXd::Zero(n_nodes);
                for (std::size_t i = 0; i < d; ++i)
                    rotated[j] += ges.eigenvectors()(static_cast<Eigen::Index>(i),
                                                     static_cast<Eigen::Index>(j)) *
                                  spec.vectors[lo + i];
            }
            for (std::size_t j = 0; j < d; ++j) spec.vectors[lo + j] = std::move(rotated[j]);
        }
        lo = hi;
    }
    for (auto& v : spec.vectors) eigdetail::canonical_sign(v);

    // Certificates: recompute residuals and the Gram defect on the final basis.
    spec.residuals.assign(k, 0.0);
    Eigen::MatrixXd xi(dim, static_cast<Eigen::Index>(k));
    for (std::size_t j = 0; j < k; ++j) {
        for (Eigen::Index i = 0; i < dim; ++i)
            xi(i, static_cast<Eigen::Index>(j)) =
                spec.vectors[j][sys.interior_nodes[static_cast<std::size_t>(i)]];
    }
    const Eigen::MatrixXd kxi = sys.stiffness * xi;
    const Eigen::MatrixXd mxi = sys.mass * xi;
    for (std::size_t j = 0; j < k; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        spec.residuals[j] = (kxi.col(jj) - spec.eigenvalues[j] * mxi.col(jj)).norm() /
                            (spec.eigenvalues[j] * mxi.col(jj).norm());
    }
    const Eigen::MatrixXd gram = xi.transpose() * mxi;
    spec.ortho_defect = (gram - Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(k),
                                                          static_cast<Eigen::Index>(k)))
                            .cwiseAbs()
                            .maxCoeff();
    return spec;
}

}  // namespace polyq

#endif  // POLYQ_EIGENSOLVER_HPP
