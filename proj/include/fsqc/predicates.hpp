#pragma once

#include "fsqc/mesh.hpp"

namespace fsqc {

// Sign of det[b-a, c-a, d-a]: +1 when d lies on the positive side of the
// oriented plane through a, b, c, -1 on the negative side, 0 when exactly
// coplanar. Evaluated in doubles behind a forward error bound; ambiguous
// cases fall back to exact rational arithmetic.
int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

}  // namespace fsqc
