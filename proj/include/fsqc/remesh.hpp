#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fsqc/mesh.hpp"
#include "fsqc/qc.hpp"
#include "fsqc/spherical.hpp"

namespace fsqc {

/// Region of faces to irregularize, with the dilation to apply there and the
/// vertex pair giving the principal direction.
struct RegionSpec {
    FaceSelection region;
    double kRegion = 1.0;
    std::optional<std::pair<int, int>> direction;  // p1, p2

    void validate(const TriangleMesh& mesh) const;
};

// Structured text file: faces=<path>, k=<value>, p1=<index>, p2=<index>.
// `faces` and the direction pair are optional (empty region / no rotation).
RegionSpec load_region_spec(const std::string& path);
void save_region_spec(const std::string& path, const RegionSpec& spec,
                      const std::string& facesPath);

// K(T) = kRegion inside the region, 1 elsewhere.
DilationField build_dilation_field(const TriangleMesh& mesh, const RegionSpec& spec);

// theta = Arg(z(p2) - z(p1)) in (-pi, pi].
double principal_rotation_angle(const PlanarEmbedding& planar, int p1, int p2);

// Spherical Delaunay triangulation as the convex hull of the unit points.
std::vector<std::array<int, 3>> spherical_delaunay(const SphericalEmbedding& points);

struct RemeshResult {
    TriangleMesh mesh;               // original vertices, new faces
    std::vector<double> minAngle;    // per new face, radians
    std::vector<double> aspectRatio; // longest edge / (2 * inradius)
};

// Applies the spherical connectivity back to the original vertex positions,
// flips globally if the signed volume comes out negative, validates the
// result and computes per-face quality metrics.
RemeshResult induced_triangulation(const TriangleMesh& original,
                                   const std::vector<std::array<int, 3>>& sphereFaces);

struct RemeshOutput {
    RemeshResult result;
    FsqcResult parameterization;
};

// Algorithm: dilation field from the region spec -> fsqc_parameterize (with
// the direction rotation) -> spherical Delaunay -> induced triangulation.
RemeshOutput remesh_pipeline(const TriangleMesh& mesh, const RegionSpec& spec,
                             const FsqcOptions& baseOptions = {});

// Quality metrics of a single triangle.
double triangle_min_angle(const Vec3& a, const Vec3& b, const Vec3& c);
double triangle_aspect_ratio(const Vec3& a, const Vec3& b, const Vec3& c);

void write_quality_csv(const std::string& path, const RemeshResult& result);

}  // namespace fsqc
