#include "fsqc/elliptic.hpp"

#include <cmath>
#include <cstdio>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include "fsqc/errors.hpp"

namespace fsqc {

AlphaTriple alpha_coefficients(const Complex& mu) {
    double rho = mu.real(), tau = mu.imag();
    double n2 = rho * rho + tau * tau;
    if (n2 >= 1.0) throw MeshError("alpha_coefficients: |mu| >= 1");
    double den = 1.0 - n2;
    return AlphaTriple{((rho - 1.0) * (rho - 1.0) + tau * tau) / den, -2.0 * tau / den,
                       ((1.0 + rho) * (1.0 + rho) + tau * tau) / den};
}

EllipticOperator assemble_generalized_laplacian(const PlanarEmbedding& domain,
                                                const BeltramiField& mu,
                                                const FaceSelection& excluded) {
    const int n = domain.vertexCount();
    const int nf = domain.faceCount();
    if (mu.faceCount() != nf)
        throw MeshError("assemble_generalized_laplacian: mu field size mismatch");

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(nf) * 9);
    for (int f = 0; f < nf; ++f) {
        if (excluded.contains(f)) continue;
        const auto& fc = domain.faces[f];
        const Complex &z1 = domain.z[fc[0]], &z2 = domain.z[fc[1]], &z3 = domain.z[fc[2]];
        double twoA = (z2.real() - z1.real()) * (z3.imag() - z1.imag()) -
                      (z3.real() - z1.real()) * (z2.imag() - z1.imag());
        double scale = std::max({std::norm(z2 - z1), std::norm(z3 - z1), std::norm(z3 - z2)});
        if (std::abs(twoA) <= 1e-14 * scale)
            throw MeshError("assemble_generalized_laplacian: degenerate face " + std::to_string(f));
        double gx[3] = {(z3.imag() - z2.imag()) / twoA, (z1.imag() - z3.imag()) / twoA,
                        (z2.imag() - z1.imag()) / twoA};
        double gy[3] = {-(z3.real() - z2.real()) / twoA, -(z1.real() - z3.real()) / twoA,
                        -(z2.real() - z1.real()) / twoA};
        AlphaTriple a = alpha_coefficients(mu.mu[f]);
        double area = 0.5 * std::abs(twoA);
        for (int r = 0; r < 3; ++r) {
            for (int s = 0; s < 3; ++s) {
                // explicit form keeps the accumulation exactly symmetric
                double v = area * (a.a1 * gx[r] * gx[s] + a.a2 * (gx[r] * gy[s] + gy[r] * gx[s]) +
                                   a.a3 * gy[r] * gy[s]);
                trip.emplace_back(fc[r], fc[s], v);
            }
        }
    }
    EllipticOperator op;
    op.matrix.resize(n, n);
    op.matrix.setFromTriplets(trip.begin(), trip.end());
    return op;
}

SparseMatrix cotangent_laplacian_matrix(const std::vector<Vec3>& positions,
                                        const std::vector<std::array<int, 3>>& faces,
                                        int skipFace) {
    const int n = static_cast<int>(positions.size());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(faces.size() * 12);
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
        if (f == skipFace) continue;
        const auto& fc = faces[f];
        const Vec3* p[3] = {&positions[fc[0]], &positions[fc[1]], &positions[fc[2]]};
        for (int k = 0; k < 3; ++k) {
            Vec3 u = *p[(k + 1) % 3] - *p[k];
            Vec3 v = *p[(k + 2) % 3] - *p[k];
            double cr = u.cross(v).norm();
            if (cr == 0.0)
                throw MeshError("cotangent Laplacian: degenerate face " + std::to_string(f));
            double w = 0.5 * u.dot(v) / cr;
            int i = fc[(k + 1) % 3], j = fc[(k + 2) % 3];
            trip.emplace_back(i, i, w);
            trip.emplace_back(j, j, w);
            trip.emplace_back(i, j, -w);
            trip.emplace_back(j, i, -w);
        }
    }
    SparseMatrix m(n, n);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

SparseMatrix cotangent_laplacian_matrix(const PlanarEmbedding& domain, int skipFace) {
    std::vector<Vec3> pos(domain.z.size());
    for (size_t i = 0; i < domain.z.size(); ++i)
        pos[i] = Vec3(domain.z[i].real(), domain.z[i].imag(), 0.0);
    return cotangent_laplacian_matrix(pos, domain.faces, skipFace);
}

namespace {

// Reduced system: rows/columns of free vertices, with constrained columns
// moved to the right-hand side.
struct ReducedSystem {
    SparseMatrix aff;
    Eigen::MatrixXd rhs;  // two columns: real and imaginary parts
    std::vector<int> freeOf;
};

ReducedSystem reduceSystem(const EllipticOperator& op, const std::map<int, Complex>& constraints) {
    const int n = op.size();
    std::vector<char> isFixed(n, 0);
    std::vector<Complex> fixedVal(n);
    for (const auto& [v, val] : constraints) {
        if (v < 0 || v >= n) throw MeshError("solve_dirichlet: constraint index out of range");
        isFixed[v] = 1;
        fixedVal[v] = val;
    }
    ReducedSystem red;
    std::vector<int> newIndex(n, -1);
    for (int i = 0; i < n; ++i) {
        if (!isFixed[i]) {
            newIndex[i] = static_cast<int>(red.freeOf.size());
            red.freeOf.push_back(i);
        }
    }
    const int nf = static_cast<int>(red.freeOf.size());
    red.rhs = Eigen::MatrixXd::Zero(nf, 2);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(op.matrix.nonZeros()));
    for (int col = 0; col < op.matrix.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(op.matrix, col); it; ++it) {
            int i = static_cast<int>(it.row()), j = col;
            if (isFixed[i]) continue;
            if (isFixed[j]) {
                red.rhs(newIndex[i], 0) -= it.value() * fixedVal[j].real();
                red.rhs(newIndex[i], 1) -= it.value() * fixedVal[j].imag();
            } else {
                trip.emplace_back(newIndex[i], newIndex[j], it.value());
            }
        }
    }
    red.aff.resize(nf, nf);
    red.aff.setFromTriplets(trip.begin(), trip.end());
    return red;
}

double relativeResidual(const SparseMatrix& a, const Eigen::MatrixXd& x,
                        const Eigen::MatrixXd& b) {
    double bn = b.norm();
    if (bn == 0.0) return x.norm() == 0.0 ? 0.0 : (a * x - b).norm();
    return (a * x - b).norm() / bn;
}

}  // namespace

std::vector<Complex> solve_dirichlet(const EllipticOperator& op,
                                     const std::map<int, Complex>& constraints,
                                     const SolveOptions& options) {
    if (constraints.empty()) throw MeshError("solve_dirichlet: at least one constraint required");
    ReducedSystem red = reduceSystem(op, constraints);
    const int nf = static_cast<int>(red.freeOf.size());

    Eigen::MatrixXd x;
    double residual = std::numeric_limits<double>::infinity();
    if (nf > 0) {
        Eigen::SimplicialLDLT<SparseMatrix> ldlt(red.aff);
        if (ldlt.info() == Eigen::Success) {
            x = ldlt.solve(red.rhs);
            residual = relativeResidual(red.aff, x, red.rhs);
        }
        if (residual > options.tolerance) {
            Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper,
                                     Eigen::DiagonalPreconditioner<double>>
                cg(red.aff);
            cg.setTolerance(options.tolerance);
            cg.setMaxIterations(static_cast<int>(10.0 * std::sqrt(static_cast<double>(nf))) + 1000);
            Eigen::MatrixXd xcg =
                (x.size() > 0) ? cg.solveWithGuess(red.rhs, x).eval() : cg.solve(red.rhs).eval();
            double rcg = relativeResidual(red.aff, xcg, red.rhs);
            if (rcg < residual) {
                x = xcg;
                residual = rcg;
            }
        }
        if (residual > options.tolerance)
            throw SolverError("solve_dirichlet: no convergence, relative residual " +
                                  std::to_string(residual),
                              residual);
    }

    std::vector<Complex> out(op.size());
    for (const auto& [v, val] : constraints) out[v] = val;
    for (int i = 0; i < nf; ++i) out[red.freeOf[i]] = Complex(x(i, 0), x(i, 1));
    return out;
}

void dump_matrix_market(const std::string& path, const SparseMatrix& m) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw MeshError("cannot write file: " + path);
    std::fprintf(f, "%%%%MatrixMarket matrix coordinate real general\n");
    std::fprintf(f, "%ld %ld %ld\n", static_cast<long>(m.rows()), static_cast<long>(m.cols()),
                 static_cast<long>(m.nonZeros()));
    for (int col = 0; col < m.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(m, col); it; ++it)
            std::fprintf(f, "%ld %ld %.17g\n", static_cast<long>(it.row()) + 1,
                         static_cast<long>(col) + 1, it.value());
    std::fclose(f);
}

}  // namespace fsqc
