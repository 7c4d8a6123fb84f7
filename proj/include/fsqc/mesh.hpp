#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace fsqc {

using Vec3 = Eigen::Vector3d;
using Complex = std::complex<double>;

/// A closed triangle surface: positions plus consistently oriented faces.
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;

    int vertexCount() const { return static_cast<int>(vertices.size()); }
    int faceCount() const { return static_cast<int>(faces.size()); }
};

/// Per-vertex complex coordinates sharing a mesh's connectivity.
/// The designated outer face (if any) is the one whose image wraps the
/// point at infinity and is excluded from interior assembly.
struct PlanarEmbedding {
    std::vector<Complex> z;
    std::vector<std::array<int, 3>> faces;
    int outerFace = -1;

    int vertexCount() const { return static_cast<int>(z.size()); }
    int faceCount() const { return static_cast<int>(faces.size()); }
};

/// Per-vertex unit-norm positions on the sphere, same connectivity as the
/// source mesh.
struct SphericalEmbedding {
    std::vector<Vec3> points;
    std::vector<std::array<int, 3>> faces;

    int vertexCount() const { return static_cast<int>(points.size()); }
    int faceCount() const { return static_cast<int>(faces.size()); }

    TriangleMesh toMesh() const { return TriangleMesh{points, faces}; }
};

/// Symmetric per-undirected-edge weights k_uv = cot(alpha) + cot(beta).
struct EdgeWeightField {
    // Edges stored as (min(u,v), max(u,v)), sorted lexicographically.
    std::vector<std::pair<int, int>> edges;
    std::vector<double> weights;

    int edgeCount() const { return static_cast<int>(edges.size()); }
    // Weight of edge [u,v]; throws if the edge does not exist.
    double weight(int u, int v) const;
};

/// A set of face indices, kept sorted and unique.
struct FaceSelection {
    std::vector<int> indices;

    FaceSelection() = default;
    explicit FaceSelection(std::vector<int> idx);

    bool empty() const { return indices.empty(); }
    bool contains(int f) const;
};

struct ValidationReport {
    bool closed = false;            // every edge shared by exactly 2 faces
    bool manifoldOriented = false;  // each undirected edge appears once per direction
    bool eulerGenus0 = false;       // V - E + F == 2
    bool indicesValid = false;
    bool nonDegenerate = false;  // no face area below tolerance
    long edgeCount = 0;
    std::vector<std::string> violations;

    bool pass() const {
        return closed && manifoldOriented && eulerGenus0 && indicesValid && nonDegenerate;
    }
};

// Diagnostics for the genus-0 closed-manifold contract. Never throws;
// every violated condition is listed in the report.
ValidationReport validate_genus0(const TriangleMesh& mesh);

// Throws MeshError if the mesh is not a valid genus-0 closed surface.
void require_genus0(const TriangleMesh& mesh);

double face_area(const Vec3& p1, const Vec3& p2, const Vec3& p3);
double bounding_box_diagonal(const TriangleMesh& mesh);

// Interior angles at the three corners of a face, in face vertex order.
std::array<double, 3> corner_angles(const Vec3& p1, const Vec3& p2, const Vec3& p3);

// k_uv = cot(alpha) + cot(beta) for each undirected edge, from 3D positions.
// Degenerate faces (area below 1e-12 * diag^2) are an error naming the face.
EdgeWeightField cotangent_weights(const TriangleMesh& mesh);

// The face minimizing the regularity score: sum over the face and its
// edge-adjacent faces of the squared corner-angle deviations from pi/3.
// Ties break to the lowest face index.
int most_regular_face(const TriangleMesh& mesh);

// Exhaustive per-face regularity scores (same score most_regular_face ranks by).
std::vector<double> face_regularity_scores(const TriangleMesh& mesh);

// Isometric embedding of a triangle into the plane: p1 -> 0, p2 -> |p2-p1|
// on the positive real axis, p3 into the upper half-plane.
std::array<Complex, 3> isometric_face_embedding(const Vec3& p1, const Vec3& p2, const Vec3& p3);

// For each face, the indices of the (up to 3) faces sharing an edge with it.
std::vector<std::array<int, 3>> face_adjacency(const std::vector<std::array<int, 3>>& faces,
                                               int vertexCount);

// Six times the signed volume enclosed by the surface.
double signed_volume6(const std::vector<Vec3>& pts, const std::vector<std::array<int, 3>>& faces);

// Signed area of a planar face (positive = counterclockwise).
double signed_area(const Complex& a, const Complex& b, const Complex& c);

}  // namespace fsqc
