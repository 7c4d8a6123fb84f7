#pragma once

#include <vector>

#include "fsqc/mesh.hpp"

namespace fsqc {

// Outward-oriented triangulated convex hull of the points, built by
// deterministic incremental insertion in index order with exact orientation
// tests. Points interior to the hull (or duplicates) do not appear in the
// output. Throws MeshError when all points are coplanar.
std::vector<std::array<int, 3>> convex_hull(const std::vector<Vec3>& points);

}  // namespace fsqc
