#include "fsqc/hull.hpp"

#include <algorithm>

#include "fsqc/errors.hpp"
#include "fsqc/predicates.hpp"

namespace fsqc {

namespace {

struct HullFace {
    std::array<int, 3> v;
    std::array<int, 3> nbr;  // neighbor across edge (v[k], v[k+1])
    bool alive = true;
};

// Deterministic non-degenerate seed tetrahedron: farthest point, then
// farthest from the line, then the first point off the plane.
std::array<int, 4> seedTetrahedron(const std::vector<Vec3>& pts) {
    const int n = static_cast<int>(pts.size());
    int i0 = 0;
    int i1 = -1;
    double best = 0.0;
    for (int i = 1; i < n; ++i) {
        double d = (pts[i] - pts[i0]).squaredNorm();
        if (d > best) {
            best = d;
            i1 = i;
        }
    }
    if (i1 < 0) throw MeshError("convex_hull: all points coincide");
    int i2 = -1;
    best = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i == i0 || i == i1) continue;
        double d = (pts[i] - pts[i0]).cross(pts[i1] - pts[i0]).squaredNorm();
        if (d > best) {
            best = d;
            i2 = i;
        }
    }
    if (i2 < 0 || best == 0.0) throw MeshError("convex_hull: all points collinear");
    int i3 = -1;
    for (int i = 0; i < n; ++i) {
        if (i == i0 || i == i1 || i == i2) continue;
        if (orient3d(pts[i0], pts[i1], pts[i2], pts[i]) != 0) {
            i3 = i;
            break;
        }
    }
    if (i3 < 0) throw MeshError("convex_hull: degenerate (coplanar) input");
    return {i0, i1, i2, i3};
}

}  // namespace

std::vector<std::array<int, 3>> convex_hull(const std::vector<Vec3>& points) {
    const int n = static_cast<int>(points.size());
    if (n < 4) throw MeshError("convex_hull: need at least 4 points");

    auto seed = seedTetrahedron(points);
    if (orient3d(points[seed[0]], points[seed[1]], points[seed[2]], points[seed[3]]) > 0)
        std::swap(seed[1], seed[2]);

    // outward faces of the tetrahedron (the fourth point on the negative side)
    std::vector<HullFace> faces(4);
    faces[0].v = {seed[0], seed[1], seed[2]};
    faces[1].v = {seed[0], seed[3], seed[1]};
    faces[2].v = {seed[1], seed[3], seed[2]};
    faces[3].v = {seed[2], seed[3], seed[0]};
    faces[0].nbr = {1, 2, 3};
    faces[1].nbr = {3, 2, 0};
    faces[2].nbr = {1, 3, 0};
    faces[3].nbr = {2, 1, 0};

    auto visible = [&](const HullFace& f, int p) {
        return orient3d(points[f.v[0]], points[f.v[1]], points[f.v[2]], points[p]) > 0;
    };

    // Conflict bookkeeping: each unprocessed point is filed under one face it
    // can see; points that see nothing are interior and dropped.
    std::vector<std::vector<int>> conflicts(4);
    std::vector<int> conflictOf(static_cast<size_t>(n), -1);
    for (int p = 0; p < n; ++p) {
        if (p == seed[0] || p == seed[1] || p == seed[2] || p == seed[3]) continue;
        for (int f = 0; f < 4; ++f) {
            if (visible(faces[f], p)) {
                conflicts[static_cast<size_t>(f)].push_back(p);
                conflictOf[static_cast<size_t>(p)] = f;
                break;
            }
        }
    }

    std::vector<int> visList, horizonFace, horizonEdge;
    std::vector<char> inVisible;

    for (int p = 0; p < n; ++p) {
        int start = conflictOf[static_cast<size_t>(p)];
        if (start < 0) continue;

        // flood the region visible from p
        visList.assign(1, start);
        inVisible.assign(faces.size(), 0);
        inVisible[static_cast<size_t>(start)] = 1;
        horizonFace.clear();
        horizonEdge.clear();
        for (size_t qi = 0; qi < visList.size(); ++qi) {
            int f = visList[qi];
            for (int e = 0; e < 3; ++e) {
                int g = faces[static_cast<size_t>(f)].nbr[static_cast<size_t>(e)];
                if (inVisible[static_cast<size_t>(g)]) continue;
                if (visible(faces[static_cast<size_t>(g)], p)) {
                    inVisible[static_cast<size_t>(g)] = 1;
                    visList.push_back(g);
                } else {
                    horizonFace.push_back(f);
                    horizonEdge.push_back(e);
                }
            }
        }

        // cone of new faces over the horizon
        std::vector<int> newFaces;
        newFaces.reserve(horizonFace.size());
        std::vector<std::pair<int, int>> openEdge;  // (first vertex a, new face index)
        for (size_t h = 0; h < horizonFace.size(); ++h) {
            int f = horizonFace[h], e = horizonEdge[h];
            int a = faces[static_cast<size_t>(f)].v[static_cast<size_t>(e)];
            int b = faces[static_cast<size_t>(f)].v[static_cast<size_t>((e + 1) % 3)];
            int g = faces[static_cast<size_t>(f)].nbr[static_cast<size_t>(e)];
            int nfIdx = static_cast<int>(faces.size());
            HullFace nf;
            nf.v = {a, b, p};
            nf.nbr = {g, -1, -1};
            for (int ge = 0; ge < 3; ++ge)
                if (faces[static_cast<size_t>(g)].nbr[static_cast<size_t>(ge)] == f)
                    faces[static_cast<size_t>(g)].nbr[static_cast<size_t>(ge)] = nfIdx;
            faces.push_back(nf);
            conflicts.emplace_back();
            newFaces.push_back(nfIdx);
            openEdge.emplace_back(a, nfIdx);
        }
        // sew the cone: edge (b,p) of each new face meets edge (p,a) of the
        // new face whose horizon edge starts at b
        for (int nfIdx : newFaces) {
            int b = faces[static_cast<size_t>(nfIdx)].v[1];
            for (const auto& [a, other] : openEdge) {
                if (a == b) {
                    faces[static_cast<size_t>(nfIdx)].nbr[1] = other;
                    faces[static_cast<size_t>(other)].nbr[2] = nfIdx;
                    break;
                }
            }
        }

        // retire the visible region, re-file its points against the new cone
        std::vector<int> orphans;
        for (int f : visList) {
            faces[static_cast<size_t>(f)].alive = false;
            for (int q : conflicts[static_cast<size_t>(f)])
                if (q != p) orphans.push_back(q);
            conflicts[static_cast<size_t>(f)].clear();
        }
        conflictOf[static_cast<size_t>(p)] = -1;
        std::sort(orphans.begin(), orphans.end());
        for (int q : orphans) {
            conflictOf[static_cast<size_t>(q)] = -1;
            for (int nfIdx : newFaces) {
                if (visible(faces[static_cast<size_t>(nfIdx)], q)) {
                    conflicts[static_cast<size_t>(nfIdx)].push_back(q);
                    conflictOf[static_cast<size_t>(q)] = nfIdx;
                    break;
                }
            }
        }
    }

    std::vector<std::array<int, 3>> out;
    for (const HullFace& f : faces)
        if (f.alive) out.push_back(f.v);
    return out;
}

}  // namespace fsqc
