#include "fsqc/synth.hpp"

#include <cmath>
#include <map>

#include "fsqc/errors.hpp"

namespace fsqc {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

}  // namespace

TriangleMesh make_icosahedron() {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    TriangleMesh mesh;
    mesh.vertices = {
        {-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
        {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
        {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1},
    };
    for (Vec3& v : mesh.vertices) v.normalize();
    mesh.faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
    };
    return mesh;
}

TriangleMesh make_icosphere(int level) {
    if (level < 0) throw MeshError("make_icosphere: level must be >= 0");
    TriangleMesh mesh = make_icosahedron();
    for (int l = 0; l < level; ++l) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            Vec3 m = (mesh.vertices[a] + mesh.vertices[b]).normalized();
            int idx = mesh.vertexCount();
            mesh.vertices.push_back(m);
            midpoint[key] = idx;
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(mesh.faces.size() * 4);
        for (const auto& f : mesh.faces) {
            int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        mesh.faces = std::move(next);
    }
    return mesh;
}

TriangleMesh make_uvsphere(int slices, int stacks) {
    if (slices < 3 || stacks < 2) throw MeshError("make_uvsphere: need slices >= 3, stacks >= 2");
    TriangleMesh mesh;
    mesh.vertices.emplace_back(0, 0, 1);  // north apex
    for (int i = 1; i < stacks; ++i) {
        double theta = kPi * i / stacks;
        for (int j = 0; j < slices; ++j) {
            double phi = 2.0 * kPi * j / slices;
            mesh.vertices.emplace_back(std::sin(theta) * std::cos(phi),
                                       std::sin(theta) * std::sin(phi), std::cos(theta));
        }
    }
    mesh.vertices.emplace_back(0, 0, -1);  // south apex
    const int south = mesh.vertexCount() - 1;
    auto ring = [&](int i, int j) { return 1 + (i - 1) * slices + (j % slices); };
    for (int j = 0; j < slices; ++j)
        mesh.faces.push_back({0, ring(1, j), ring(1, j + 1)});
    for (int i = 1; i < stacks - 1; ++i) {
        for (int j = 0; j < slices; ++j) {
            mesh.faces.push_back({ring(i, j), ring(i + 1, j), ring(i + 1, j + 1)});
            mesh.faces.push_back({ring(i, j), ring(i + 1, j + 1), ring(i, j + 1)});
        }
    }
    for (int j = 0; j < slices; ++j)
        mesh.faces.push_back({south, ring(stacks - 1, j + 1), ring(stacks - 1, j)});
    return mesh;
}

TriangleMesh make_ellipsoid(double a, double b, double c, int level) {
    if (a <= 0 || b <= 0 || c <= 0) throw MeshError("make_ellipsoid: axes must be positive");
    TriangleMesh mesh = make_icosphere(level);
    for (Vec3& v : mesh.vertices) v = Vec3(a * v.x(), b * v.y(), c * v.z());
    return mesh;
}

RidgeMesh make_ridge_ellipsoid(int level, double height, double kRegion) {
    TriangleMesh unit = make_icosphere(level);
    RidgeMesh out;
    out.mesh.faces = unit.faces;
    out.mesh.vertices.resize(unit.vertices.size());

    // radial bump concentrated near the y=0 great circle on the upper half
    const double sigmaY = 0.3;
    auto bump = [&](const Vec3& p) {
        double zpos = std::max(p.z(), 0.0);
        return height * std::exp(-(p.y() * p.y()) / (sigmaY * sigmaY)) * zpos * zpos;
    };
    for (size_t i = 0; i < unit.vertices.size(); ++i) {
        const Vec3& p = unit.vertices[i];
        double s = 1.0 + bump(p);
        out.mesh.vertices[i] = Vec3(2.0 * p.x() * s, p.y() * s, p.z() * s);
    }

    // crest faces: centroid close to the ridge line and on the upper half
    std::vector<int> crest;
    for (int f = 0; f < unit.faceCount(); ++f) {
        const auto& fc = unit.faces[f];
        Vec3 c = (unit.vertices[fc[0]] + unit.vertices[fc[1]] + unit.vertices[fc[2]]) / 3.0;
        if (std::abs(c.y()) < 0.25 && c.z() > 0.25) crest.push_back(f);
    }
    out.region.region = FaceSelection(std::move(crest));
    out.region.kRegion = kRegion;

    // direction vertices: crest ends near (+x) and (-x) on the equator side
    int p1 = -1, p2 = -1;
    double best1 = -2.0, best2 = -2.0;
    for (int i = 0; i < unit.vertexCount(); ++i) {
        const Vec3& p = unit.vertices[i];
        if (std::abs(p.y()) > 0.1 || p.z() < 0.1) continue;
        if (p.x() > best1) {
            best1 = p.x();
            p1 = i;
        }
        if (-p.x() > best2) {
            best2 = -p.x();
            p2 = i;
        }
    }
    if (p1 < 0 || p2 < 0 || p1 == p2)
        throw MeshError("make_ridge_ellipsoid: level too coarse for a ridge");
    out.region.direction = {p1, p2};
    return out;
}

PlanarEmbedding make_planar_disk(int rings, int segments) {
    if (rings < 1 || segments < 3) throw MeshError("make_planar_disk: need rings >= 1, segments >= 3");
    PlanarEmbedding disk;
    disk.z.emplace_back(0.0, 0.0);
    for (int r = 1; r <= rings; ++r) {
        double radius = static_cast<double>(r) / rings;
        double offset = 0.1 * r;  // stagger the rings
        for (int s = 0; s < segments; ++s) {
            double ang = 2.0 * kPi * s / segments + offset;
            disk.z.emplace_back(radius * std::cos(ang), radius * std::sin(ang));
        }
    }
    auto at = [&](int r, int s) { return 1 + (r - 1) * segments + (s % segments); };
    for (int s = 0; s < segments; ++s)
        disk.faces.push_back({0, at(1, s), at(1, s + 1)});
    for (int r = 1; r < rings; ++r) {
        for (int s = 0; s < segments; ++s) {
            disk.faces.push_back({at(r, s), at(r + 1, s), at(r + 1, s + 1)});
            disk.faces.push_back({at(r, s), at(r + 1, s + 1), at(r, s + 1)});
        }
    }
    return disk;
}

std::vector<int> planar_disk_boundary(int rings, int segments) {
    std::vector<int> bnd;
    bnd.reserve(static_cast<size_t>(segments));
    for (int s = 0; s < segments; ++s) bnd.push_back(1 + (rings - 1) * segments + s);
    return bnd;
}

}  // namespace fsqc
