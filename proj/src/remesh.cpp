#include "fsqc/remesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fsqc/errors.hpp"
#include "fsqc/hull.hpp"
#include "fsqc/mesh_io.hpp"
#include "fsqc/version.hpp"

namespace fsqc {

void RegionSpec::validate(const TriangleMesh& mesh) const {
    for (int f : region.indices)
        if (f < 0 || f >= mesh.faceCount())
            throw MeshError("region spec: face index " + std::to_string(f) + " out of range");
    if (!(kRegion >= 1.0) || !std::isfinite(kRegion))
        throw MeshError("region spec: K must be >= 1");
    if (direction) {
        auto [p1, p2] = *direction;
        if (p1 < 0 || p2 < 0 || p1 >= mesh.vertexCount() || p2 >= mesh.vertexCount())
            throw MeshError("region spec: direction vertex out of range");
        if (p1 == p2) throw MeshError("region spec: p1 and p2 must differ");
    }
}

RegionSpec load_region_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open file: " + path);
    RegionSpec spec;
    std::string facesPath;
    int p1 = -1, p2 = -1;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            size_t b = s.find_first_not_of(" \t\r");
            size_t e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "faces") facesPath = val;
        else if (key == "k") spec.kRegion = std::stod(val);
        else if (key == "p1") p1 = std::stoi(val);
        else if (key == "p2") p2 = std::stoi(val);
        else throw MeshError(path + ": unknown region spec key '" + key + "'");
    }
    if (!facesPath.empty()) {
        // relative face lists resolve against the spec file's directory
        if (facesPath.front() != '/' && path.find('/') != std::string::npos)
            facesPath = path.substr(0, path.find_last_of('/') + 1) + facesPath;
        spec.region = load_face_selection(facesPath);
    }
    if (p1 >= 0 || p2 >= 0) {
        if (p1 < 0 || p2 < 0) throw MeshError(path + ": p1 and p2 must be given together");
        spec.direction = {p1, p2};
    }
    return spec;
}

void save_region_spec(const std::string& path, const RegionSpec& spec,
                      const std::string& facesPath) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw MeshError("cannot write file: " + path);
    if (!facesPath.empty()) std::fprintf(f, "faces = %s\n", facesPath.c_str());
    std::fprintf(f, "k = %.17g\n", spec.kRegion);
    if (spec.direction) {
        std::fprintf(f, "p1 = %d\n", spec.direction->first);
        std::fprintf(f, "p2 = %d\n", spec.direction->second);
    }
    std::fclose(f);
}

DilationField build_dilation_field(const TriangleMesh& mesh, const RegionSpec& spec) {
    spec.validate(mesh);
    DilationField field;
    field.k.assign(static_cast<size_t>(mesh.faceCount()), 1.0);
    for (int f : spec.region.indices) field.k[static_cast<size_t>(f)] = spec.kRegion;
    return field;
}

double principal_rotation_angle(const PlanarEmbedding& planar, int p1, int p2) {
    if (p1 < 0 || p2 < 0 || p1 >= planar.vertexCount() || p2 >= planar.vertexCount())
        throw MeshError("principal_rotation_angle: vertex index out of range");
    Complex delta = planar.z[p2] - planar.z[p1];
    if (std::abs(delta) == 0.0)
        throw MeshError("principal_rotation_angle: coincident planar images");
    return std::arg(delta);
}

std::vector<std::array<int, 3>> spherical_delaunay(const SphericalEmbedding& points) {
    if (points.vertexCount() < 4)
        throw MeshError("spherical_delaunay: need at least 4 points");
    for (const Vec3& p : points.points)
        if (std::abs(p.norm() - 1.0) > 1e-6)
            throw MeshError("spherical_delaunay: points must have unit norm");
    return convex_hull(points.points);
}

double triangle_min_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
    auto ang = corner_angles(a, b, c);
    return std::min({ang[0], ang[1], ang[2]});
}

double triangle_aspect_ratio(const Vec3& a, const Vec3& b, const Vec3& c) {
    double la = (b - c).norm(), lb = (c - a).norm(), lc = (a - b).norm();
    double longest = std::max({la, lb, lc});
    double s = 0.5 * (la + lb + lc);
    double area = face_area(a, b, c);
    if (area == 0.0) return std::numeric_limits<double>::infinity();
    double inradius = area / s;
    return longest / (2.0 * inradius);
}

RemeshResult induced_triangulation(const TriangleMesh& original,
                                   const std::vector<std::array<int, 3>>& sphereFaces) {
    RemeshResult out;
    out.mesh.vertices = original.vertices;
    out.mesh.faces = sphereFaces;

    for (const auto& f : out.mesh.faces)
        for (int v : f)
            if (v < 0 || v >= out.mesh.vertexCount())
                throw NonManifoldError("induced triangulation: face index out of range");

    if (signed_volume6(out.mesh.vertices, out.mesh.faces) < 0.0)
        for (auto& f : out.mesh.faces) std::swap(f[1], f[2]);

    ValidationReport rep = validate_genus0(out.mesh);
    if (!rep.pass()) {
        std::string msg = "induced triangulation is not a valid genus-0 surface:";
        for (const auto& v : rep.violations) msg += "\n  " + v;
        throw NonManifoldError(msg);
    }

    // every original vertex must survive into the new connectivity
    std::vector<char> used(static_cast<size_t>(out.mesh.vertexCount()), 0);
    for (const auto& f : out.mesh.faces)
        for (int v : f) used[static_cast<size_t>(v)] = 1;
    long missing = std::count(used.begin(), used.end(), 0);
    if (missing > 0)
        throw NonManifoldError("induced triangulation dropped " + std::to_string(missing) +
                               " vertex/vertices");

    out.minAngle.reserve(out.mesh.faces.size());
    out.aspectRatio.reserve(out.mesh.faces.size());
    for (const auto& f : out.mesh.faces) {
        const Vec3& a = out.mesh.vertices[f[0]];
        const Vec3& b = out.mesh.vertices[f[1]];
        const Vec3& c = out.mesh.vertices[f[2]];
        out.minAngle.push_back(triangle_min_angle(a, b, c));
        out.aspectRatio.push_back(triangle_aspect_ratio(a, b, c));
    }
    return out;
}

RemeshOutput remesh_pipeline(const TriangleMesh& mesh, const RegionSpec& spec,
                             const FsqcOptions& baseOptions) {
    spec.validate(mesh);
    DilationField field = build_dilation_field(mesh, spec);
    FsqcOptions options = baseOptions;
    options.direction = spec.direction;

    RemeshOutput out;
    out.parameterization = fsqc_parameterize(mesh, field, options);
    auto delaunay = spherical_delaunay(out.parameterization.sphere);
    out.result = induced_triangulation(mesh, delaunay);
    return out;
}

void write_quality_csv(const std::string& path, const RemeshResult& result) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw MeshError("cannot write file: " + path);
    std::fprintf(f, "# %s\n", kVersion);
    std::fputs("face_index,v0,v1,v2,min_angle,aspect_ratio\n", f);
    for (size_t i = 0; i < result.mesh.faces.size(); ++i) {
        const auto& fc = result.mesh.faces[i];
        std::fprintf(f, "%zu,%d,%d,%d,%.17g,%.17g\n", i, fc[0], fc[1], fc[2], result.minAngle[i],
                     result.aspectRatio[i]);
    }
    std::fclose(f);
}

}  // namespace fsqc
