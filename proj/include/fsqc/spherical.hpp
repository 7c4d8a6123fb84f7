#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fsqc/elliptic.hpp"
#include "fsqc/mesh.hpp"
#include "fsqc/qc.hpp"

namespace fsqc {

/// Coefficients of the affine boundary map h|_T: (x,y) -> (ax+by+r, cx+dy+s),
/// fixing v1 and v2 and satisfying d = a/K, c = -K b.
struct BoundaryMapCoefficients {
    double a, b, c, d, r, s;
    double determinant;  // of the 6x6 system

    Complex apply(const Complex& z) const {
        return Complex(a * z.real() + b * z.imag() + r, c * z.real() + d * z.imag() + s);
    }
};

// Solves the 6x6 linear system pinning h at v1, v2 with dilation K on T.
BoundaryMapCoefficients boundary_map_coefficients(const Complex& v1, const Complex& v2, double K);

struct BalanceInfo {
    double rOut = 0.0;  // |centroid of the outer face's vertices|
    double rIn = 0.0;   // min over non-outer faces of |centroid|
    double scale = 1.0;
    bool applied = false;
};

// Scales the domain by 1/sqrt(rOut * rIn) so the outermost and innermost
// triangles end up at reciprocal radii. Skips (with applied=false) when
// either radius is degenerate.
BalanceInfo balancing_scale(PlanarEmbedding& domain);

struct DilationStats {
    double mean = 0.0;
    double sd = 0.0;
    double max = 0.0;
    double targetMean = 0.0;
    double targetSd = 0.0;
    int flippedFaces = 0;
    int faceCount = 0;
    // 64 bins over [1, max(8, 1.2 * max target K)]
    double histLo = 1.0;
    double histHi = 8.0;
    std::vector<long> histogram;

    double meanDrift() const { return mean - targetMean; }
    double sdDrift() const { return sd - targetSd; }
};

// Measures the per-face dilation of mesh -> sphere against the target field.
DilationStats verify_dilation(const TriangleMesh& mesh, const SphericalEmbedding& sphere,
                              const DilationField& target);

// Faces whose origin tetrahedron has non-positive signed volume, i.e. faces
// not oriented outward on the unit sphere.
int count_sphere_flips(const SphericalEmbedding& sphere);

// Summary CSV (single data row, includes the tool version) plus a histogram
// CSV at <path>.hist.csv.
void write_stats_report(const std::string& path, const DilationStats& stats);
std::string stats_summary(const DilationStats& stats);

struct InitOptions {
    double bigTriangleCircumradius = 1e4;
    // Hemisphere re-solve passes after the big-triangle solve; each pass is
    // skipped when the pinned/free split is too small to be meaningful.
    int refinementPasses = 4;
    SolveOptions solve;
};

// Bijective spherical conformal parameterization: punctured big-triangle
// harmonic solve, hemisphere re-solves, balancing, inverse stereographic
// projection. Throws (with a flip count) if the result is not flip-free.
SphericalEmbedding spherical_conformal_init(const TriangleMesh& mesh, const InitOptions& options = {});

struct FsqcOptions {
    std::optional<std::pair<int, int>> direction;  // p1, p2 vertex indices
    InitOptions init;
    SolveOptions solve;
};

struct FsqcResult {
    SphericalEmbedding sphere;
    PlanarEmbedding planar;  // final planar domain, outer face designated
    int outerFace = -1;
    double rotationAngle = 0.0;  // theta from the direction pair, if any
    int outlyingVertices = 0;    // vertices outside h(T) after the solve
    DilationStats stats;
};

// Algorithm: conformal init -> most regular face T on the sphere -> rotate
// T's centroid to the north pole -> stereographic projection -> optional
// direction rotation -> boundary coefficients on T -> generalized Laplace
// solve with T excluded -> translate -> balance -> inverse projection.
FsqcResult fsqc_parameterize(const TriangleMesh& mesh, const DilationField& targetK,
                             const FsqcOptions& options = {});

}  // namespace fsqc
