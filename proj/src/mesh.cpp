#include "fsqc/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "fsqc/errors.hpp"

namespace fsqc {

namespace {

// Directed edge key; vertex counts stay well below 2^31.
inline std::uint64_t edgeKey(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

}  // namespace

double EdgeWeightField::weight(int u, int v) const {
    std::pair<int, int> e{std::min(u, v), std::max(u, v)};
    auto it = std::lower_bound(edges.begin(), edges.end(), e);
    if (it == edges.end() || *it != e) throw MeshError("edge not present in weight field");
    return weights[static_cast<size_t>(it - edges.begin())];
}

FaceSelection::FaceSelection(std::vector<int> idx) : indices(std::move(idx)) {
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    if (!indices.empty() && indices.front() < 0) throw MeshError("negative face index in selection");
}

bool FaceSelection::contains(int f) const {
    return std::binary_search(indices.begin(), indices.end(), f);
}

double face_area(const Vec3& p1, const Vec3& p2, const Vec3& p3) {
    return 0.5 * (p2 - p1).cross(p3 - p1).norm();
}

double bounding_box_diagonal(const TriangleMesh& mesh) {
    if (mesh.vertices.empty()) return 0.0;
    Vec3 lo = mesh.vertices[0], hi = mesh.vertices[0];
    for (const Vec3& p : mesh.vertices) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return (hi - lo).norm();
}

std::array<double, 3> corner_angles(const Vec3& p1, const Vec3& p2, const Vec3& p3) {
    const Vec3* p[3] = {&p1, &p2, &p3};
    std::array<double, 3> ang;
    for (int k = 0; k < 3; ++k) {
        Vec3 u = *p[(k + 1) % 3] - *p[k];
        Vec3 v = *p[(k + 2) % 3] - *p[k];
        ang[k] = std::atan2(u.cross(v).norm(), u.dot(v));
    }
    return ang;
}

ValidationReport validate_genus0(const TriangleMesh& mesh) {
    ValidationReport rep;
    const int nv = mesh.vertexCount();
    const int nf = mesh.faceCount();

    rep.indicesValid = true;
    for (int f = 0; f < nf; ++f) {
        for (int k = 0; k < 3; ++k) {
            int v = mesh.faces[f][k];
            if (v < 0 || v >= nv) {
                rep.indicesValid = false;
                rep.violations.push_back("face " + std::to_string(f) + " has out-of-range vertex index");
            }
        }
        const auto& fc = mesh.faces[f];
        if (fc[0] == fc[1] || fc[1] == fc[2] || fc[0] == fc[2]) {
            rep.indicesValid = false;
            rep.violations.push_back("face " + std::to_string(f) + " repeats a vertex");
        }
    }
    if (!rep.indicesValid) return rep;

    std::unordered_map<std::uint64_t, int> directed;
    directed.reserve(static_cast<size_t>(nf) * 3);
    rep.manifoldOriented = true;
    for (int f = 0; f < nf; ++f) {
        const auto& fc = mesh.faces[f];
        for (int k = 0; k < 3; ++k) {
            int a = fc[k], b = fc[(k + 1) % 3];
            if (++directed[edgeKey(a, b)] == 2) {
                rep.manifoldOriented = false;
                rep.violations.push_back("directed edge (" + std::to_string(a) + "," +
                                         std::to_string(b) + ") appears more than once");
            }
        }
    }

    // Undirected edge incidence.
    long openEdges = 0, overEdges = 0;
    std::unordered_map<std::uint64_t, int> undirected;
    undirected.reserve(directed.size());
    for (const auto& [key, cnt] : directed) {
        int a = static_cast<int>(key >> 32), b = static_cast<int>(key & 0xffffffffu);
        undirected[edgeKey(std::min(a, b), std::max(a, b))] += cnt;
    }
    rep.edgeCount = static_cast<long>(undirected.size());
    for (const auto& [key, cnt] : undirected) {
        if (cnt == 1) ++openEdges;
        if (cnt > 2) ++overEdges;
    }
    rep.closed = (openEdges == 0 && overEdges == 0);
    if (openEdges > 0)
        rep.violations.push_back("open boundary: " + std::to_string(openEdges) + " edge(s) with one face");
    if (overEdges > 0)
        rep.violations.push_back(std::to_string(overEdges) + " edge(s) with more than two faces");

    long euler = static_cast<long>(nv) - rep.edgeCount + nf;
    rep.eulerGenus0 = (euler == 2);
    if (!rep.eulerGenus0)
        rep.violations.push_back("Euler characteristic " + std::to_string(euler) + " (expected 2)");

    const double tol = 1e-12 * bounding_box_diagonal(mesh) * bounding_box_diagonal(mesh);
    rep.nonDegenerate = true;
    for (int f = 0; f < nf; ++f) {
        const auto& fc = mesh.faces[f];
        if (face_area(mesh.vertices[fc[0]], mesh.vertices[fc[1]], mesh.vertices[fc[2]]) < tol) {
            rep.nonDegenerate = false;
            rep.violations.push_back("face " + std::to_string(f) + " is degenerate (area below tolerance)");
        }
    }
    return rep;
}

void require_genus0(const TriangleMesh& mesh) {
    ValidationReport rep = validate_genus0(mesh);
    if (!rep.pass()) {
        std::string msg = "mesh is not a valid genus-0 closed surface:";
        for (const auto& v : rep.violations) msg += "\n  " + v;
        throw MeshError(msg);
    }
}

EdgeWeightField cotangent_weights(const TriangleMesh& mesh) {
    const double areaTol =
        1e-12 * bounding_box_diagonal(mesh) * bounding_box_diagonal(mesh);

    std::unordered_map<std::uint64_t, double> acc;
    acc.reserve(static_cast<size_t>(mesh.faceCount()) * 2);
    for (int f = 0; f < mesh.faceCount(); ++f) {
        const auto& fc = mesh.faces[f];
        const Vec3& a = mesh.vertices[fc[0]];
        const Vec3& b = mesh.vertices[fc[1]];
        const Vec3& c = mesh.vertices[fc[2]];
        if (face_area(a, b, c) < areaTol)
            throw MeshError("cotangent weights undefined: face " + std::to_string(f) + " is degenerate");
        const Vec3* p[3] = {&a, &b, &c};
        for (int k = 0; k < 3; ++k) {
            // corner k is opposite edge (k+1, k+2)
            Vec3 u = *p[(k + 1) % 3] - *p[k];
            Vec3 v = *p[(k + 2) % 3] - *p[k];
            double cot = u.dot(v) / u.cross(v).norm();
            int i = fc[(k + 1) % 3], j = fc[(k + 2) % 3];
            acc[edgeKey(std::min(i, j), std::max(i, j))] += cot;
        }
    }

    EdgeWeightField field;
    field.edges.reserve(acc.size());
    for (const auto& [key, w] : acc)
        field.edges.emplace_back(static_cast<int>(key >> 32), static_cast<int>(key & 0xffffffffu));
    std::sort(field.edges.begin(), field.edges.end());
    field.weights.resize(field.edges.size());
    for (size_t i = 0; i < field.edges.size(); ++i)
        field.weights[i] = acc[edgeKey(field.edges[i].first, field.edges[i].second)];
    return field;
}

std::vector<std::array<int, 3>> face_adjacency(const std::vector<std::array<int, 3>>& faces,
                                               int vertexCount) {
    (void)vertexCount;
    std::unordered_map<std::uint64_t, std::array<int, 2>> edgeFaces;
    edgeFaces.reserve(faces.size() * 2);
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
        for (int k = 0; k < 3; ++k) {
            int a = faces[f][k], b = faces[f][(k + 1) % 3];
            auto key = edgeKey(std::min(a, b), std::max(a, b));
            auto it = edgeFaces.find(key);
            if (it == edgeFaces.end())
                edgeFaces[key] = {f, -1};
            else
                it->second[1] = f;
        }
    }
    std::vector<std::array<int, 3>> adj(faces.size(), {-1, -1, -1});
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
        for (int k = 0; k < 3; ++k) {
            int a = faces[f][k], b = faces[f][(k + 1) % 3];
            const auto& pair = edgeFaces[edgeKey(std::min(a, b), std::max(a, b))];
            adj[f][k] = (pair[0] == f) ? pair[1] : pair[0];
        }
    }
    return adj;
}

std::vector<double> face_regularity_scores(const TriangleMesh& mesh) {
    constexpr double kThird = 1.0471975511965977;  // pi/3
    const int nf = mesh.faceCount();
    std::vector<double> dev(nf, 0.0);
    for (int f = 0; f < nf; ++f) {
        const auto& fc = mesh.faces[f];
        auto ang = corner_angles(mesh.vertices[fc[0]], mesh.vertices[fc[1]], mesh.vertices[fc[2]]);
        for (double a : ang) dev[f] += (a - kThird) * (a - kThird);
    }
    auto adj = face_adjacency(mesh.faces, mesh.vertexCount());
    std::vector<double> score(nf);
    for (int f = 0; f < nf; ++f) {
        score[f] = dev[f];
        for (int k = 0; k < 3; ++k)
            if (adj[f][k] >= 0) score[f] += dev[adj[f][k]];
    }
    return score;
}

int most_regular_face(const TriangleMesh& mesh) {
    if (mesh.faceCount() == 0) throw MeshError("most_regular_face: empty mesh");
    auto score = face_regularity_scores(mesh);
    double lowest = score[0];
    for (double s : score) lowest = std::min(lowest, s);
    // near-ties (roundoff on congruent faces) resolve to the lowest index
    const double tol = 1e-12 * (1.0 + lowest);
    for (int f = 0; f < mesh.faceCount(); ++f)
        if (score[f] <= lowest + tol) return f;
    return 0;
}

std::array<Complex, 3> isometric_face_embedding(const Vec3& p1, const Vec3& p2, const Vec3& p3) {
    Vec3 e1 = p2 - p1;
    Vec3 e2 = p3 - p1;
    double len = e1.norm();
    double cross = e1.cross(e2).norm();
    double scale = std::max({len * len, e2.squaredNorm(), (p3 - p2).squaredNorm()});
    if (cross <= 1e-12 * scale || len == 0.0)
        throw MeshError("isometric_face_embedding: degenerate (collinear) triangle");
    double x = e2.dot(e1) / len;
    double y = cross / len;
    return {Complex(0.0, 0.0), Complex(len, 0.0), Complex(x, y)};
}

double signed_volume6(const std::vector<Vec3>& pts, const std::vector<std::array<int, 3>>& faces) {
    double vol = 0.0;
    for (const auto& f : faces)
        vol += pts[f[0]].dot(pts[f[1]].cross(pts[f[2]]));
    return vol;
}

double signed_area(const Complex& a, const Complex& b, const Complex& c) {
    return 0.5 * ((b.real() - a.real()) * (c.imag() - a.imag()) -
                  (c.real() - a.real()) * (b.imag() - a.imag()));
}

}  // namespace fsqc
