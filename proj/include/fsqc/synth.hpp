#pragma once

#include "fsqc/mesh.hpp"
#include "fsqc/remesh.hpp"

namespace fsqc {

// Regular icosahedron inscribed in the unit sphere.
TriangleMesh make_icosahedron();

// Icosahedron subdivided `level` times, vertices projected back to the unit
// sphere: 20 * 4^level faces.
TriangleMesh make_icosphere(int level);

// Latitude/longitude sphere: `slices` meridians, `stacks` parallels, with
// apex fans at the poles: 2 * slices * (stacks - 1) faces.
TriangleMesh make_uvsphere(int slices, int stacks);

// Icosphere scaled by the given semi-axes.
TriangleMesh make_ellipsoid(double a, double b, double c, int level);

struct RidgeMesh {
    TriangleMesh mesh;
    RegionSpec region;  // crest faces, direction vertices at the crest ends
};

// 2:1:1 ellipsoid with a smooth radial ridge along the x-axis over the top
// (a Gaussian band around y = 0 for z > 0). The region spec selects the
// crest faces; p1/p2 are the crest-end vertices on the +x and -x sides.
RidgeMesh make_ridge_ellipsoid(int level, double height = 0.15, double kRegion = 2.5);

// Structured triangulated disk for planar solver tests: a center fan plus
// `rings` concentric rings of `segments` points each, radius 1. Ring angles
// are offset so faces are irregular. No outer face is designated.
PlanarEmbedding make_planar_disk(int rings, int segments);

// Boundary vertex indices of make_planar_disk's output (outermost ring).
std::vector<int> planar_disk_boundary(int rings, int segments);

}  // namespace fsqc
