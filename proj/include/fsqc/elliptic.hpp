#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "fsqc/mesh.hpp"
#include "fsqc/qc.hpp"

namespace fsqc {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// alpha_1 = ((rho-1)^2 + tau^2) / (1 - rho^2 - tau^2)
/// alpha_2 = -2 tau / (1 - rho^2 - tau^2)
/// alpha_3 = ((1+rho)^2 + tau^2) / (1 - rho^2 - tau^2)
struct AlphaTriple {
    double a1, a2, a3;
};

AlphaTriple alpha_coefficients(const Complex& mu);

/// Sparse symmetric operator over all vertices with a Dirichlet-constraint
/// solve interface. Positive definite on the free subspace once at least one
/// vertex is constrained and every face has |mu| <= 1 - 1e-3.
struct EllipticOperator {
    SparseMatrix matrix;

    int size() const { return static_cast<int>(matrix.rows()); }
};

struct SolveOptions {
    double tolerance = 1e-10;  // relative residual on the reduced system
};

// Finite-element assembly of the generalized Laplace operator: per face,
// local stiffness = |area| * G^T A G with G the per-face derivative rows and
// A = [[a1,a2],[a2,a3]]. Faces listed in `excluded` are skipped.
EllipticOperator assemble_generalized_laplacian(const PlanarEmbedding& domain,
                                                const BeltramiField& mu,
                                                const FaceSelection& excluded);

// Cotangent Laplacian from 3D positions (off-diagonal -(cot a + cot b)/2).
SparseMatrix cotangent_laplacian_matrix(const std::vector<Vec3>& positions,
                                        const std::vector<std::array<int, 3>>& faces,
                                        int skipFace = -1);

// Same, for a planar domain.
SparseMatrix cotangent_laplacian_matrix(const PlanarEmbedding& domain, int skipFace = -1);

// Solves the operator with the given Dirichlet values: constrained vertices
// keep their values exactly, free vertices solve the reduced SPD system.
// Direct sparse factorization first, conjugate-gradient fallback; throws
// SolverError with the achieved residual if neither converges.
std::vector<Complex> solve_dirichlet(const EllipticOperator& op,
                                     const std::map<int, Complex>& constraints,
                                     const SolveOptions& options = {});

// Matrix Market coordinate-format dump, for debugging.
void dump_matrix_market(const std::string& path, const SparseMatrix& m);

}  // namespace fsqc
