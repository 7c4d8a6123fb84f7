#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <unordered_map>

#include "fsqc/errors.hpp"
#include "fsqc/mesh.hpp"
#include "fsqc/synth.hpp"

using namespace fsqc;

namespace {

TriangleMesh regularTetrahedron() {
    TriangleMesh m;
    m.vertices = {Vec3(1, 1, 1), Vec3(1, -1, -1), Vec3(-1, 1, -1), Vec3(-1, -1, 1)};
    m.faces = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
    return m;
}

TriangleMesh torusMesh(int nu = 12, int nv = 8) {
    TriangleMesh m;
    for (int i = 0; i < nu; ++i) {
        double a = 2 * M_PI * i / nu;
        for (int j = 0; j < nv; ++j) {
            double b = 2 * M_PI * j / nv;
            double r = 2.0 + 0.7 * std::cos(b);
            m.vertices.emplace_back(r * std::cos(a), r * std::sin(a), 0.7 * std::sin(b));
        }
    }
    auto at = [&](int i, int j) { return (i % nu) * nv + (j % nv); };
    for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nv; ++j) {
            m.faces.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
            m.faces.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
        }
    }
    return m;
}

Eigen::Matrix3d randomRotation(std::mt19937& rng) {
    std::normal_distribution<double> g;
    Eigen::Matrix3d a;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a(i, j) = g(rng);
    Eigen::HouseholderQR<Eigen::Matrix3d> qr(a);
    Eigen::Matrix3d q = qr.householderQ();
    if (q.determinant() < 0) q.col(0) *= -1;
    return q;
}

}  // namespace

TEST_SUITE_BEGIN("mesh");

TEST_CASE("tetrahedron validates as genus 0") {
    auto rep = validate_genus0(regularTetrahedron());
    CHECK(rep.pass());
    CHECK(rep.edgeCount == 6);
}

TEST_CASE("torus fails with Euler characteristic 0") {
    auto rep = validate_genus0(torusMesh());
    CHECK_FALSE(rep.pass());
    CHECK_FALSE(rep.eulerGenus0);
    bool found = false;
    for (const auto& v : rep.violations)
        if (v.find("Euler characteristic 0") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("open surface fails with boundary diagnostic") {
    TriangleMesh m;
    m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
    m.faces = {{0, 1, 2}};
    auto rep = validate_genus0(m);
    CHECK_FALSE(rep.pass());
    bool found = false;
    for (const auto& v : rep.violations)
        if (v.find("open boundary") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("every undirected edge of a valid mesh carries both directions") {
    TriangleMesh m = make_icosphere(2);
    std::unordered_map<long long, int> directed;
    for (const auto& f : m.faces)
        for (int k = 0; k < 3; ++k)
            directed[(long long)f[k] * m.vertexCount() + f[(k + 1) % 3]]++;
    for (const auto& [key, cnt] : directed) {
        CHECK(cnt == 1);
        long long a = key / m.vertexCount(), b = key % m.vertexCount();
        CHECK(directed.count(b * m.vertexCount() + a) == 1);
    }
}

TEST_CASE("cotangent weights on regular shapes") {
    const double expected = 2.0 / std::sqrt(3.0);  // 2 cot 60
    auto wIco = cotangent_weights(make_icosahedron());
    for (double w : wIco.weights) CHECK(w == doctest::Approx(expected).epsilon(1e-12));

    auto wTet = cotangent_weights(regularTetrahedron());
    for (double w : wTet.weights) CHECK(w == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("square split along the diagonal gives zero diagonal weight") {
    TriangleMesh m;
    m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 1, 0), Vec3(0, 1, 0)};
    m.faces = {{0, 1, 2}, {0, 2, 3}};
    auto w = cotangent_weights(m);
    CHECK(std::abs(w.weight(0, 2)) < 1e-14);  // cot 90 + cot 90
}

TEST_CASE("cotangent weights are invariant under rigid motion and scaling") {
    TriangleMesh m = make_icosphere(2);
    auto w0 = cotangent_weights(m);
    std::mt19937 rng(7);
    Eigen::Matrix3d r = randomRotation(rng);
    TriangleMesh m2 = m;
    for (Vec3& v : m2.vertices) v = 3.7 * (r * v) + Vec3(0.4, -2.0, 1.1);
    auto w1 = cotangent_weights(m2);
    REQUIRE(w0.edgeCount() == w1.edgeCount());
    for (int i = 0; i < w0.edgeCount(); ++i)
        CHECK(w0.weights[i] == doctest::Approx(w1.weights[i]).epsilon(1e-12));
}

TEST_CASE("degenerate face is rejected by cotangent weights") {
    TriangleMesh m = regularTetrahedron();
    m.vertices[3] = m.vertices[0] + 1e-15 * (m.vertices[1] - m.vertices[0]);
    CHECK_THROWS_AS(cotangent_weights(m), MeshError);
}

TEST_CASE("most regular face of the icosahedron is face 0 by tie-break") {
    CHECK(most_regular_face(make_icosahedron()) == 0);
}

TEST_CASE("regularity score of an equilateral face with equilateral neighbors is zero") {
    auto scores = face_regularity_scores(make_icosahedron());
    for (double s : scores) CHECK(std::abs(s) < 1e-20);
}

TEST_CASE("most regular face matches exhaustive scoring with a skewed mesh") {
    // keep one face and its ring equilateral, skew everything else
    TriangleMesh m = make_icosahedron();
    const int keep = 7;
    std::set<int> keepVerts(m.faces[keep].begin(), m.faces[keep].end());
    auto adj = face_adjacency(m.faces, m.vertexCount());
    for (int k = 0; k < 3; ++k)
        for (int v : m.faces[adj[keep][k]]) keepVerts.insert(v);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-0.25, 0.25);
    for (int v = 0; v < m.vertexCount(); ++v) {
        if (keepVerts.count(v)) continue;
        m.vertices[v] += Vec3(u(rng), u(rng), u(rng));
    }
    CHECK(most_regular_face(m) == keep);

    // independent oracle: re-derive the score from scratch
    auto scores = face_regularity_scores(m);
    for (int f = 0; f < m.faceCount(); ++f) {
        auto dev = [&](int g) {
            const auto& fc = m.faces[g];
            auto ang = corner_angles(m.vertices[fc[0]], m.vertices[fc[1]], m.vertices[fc[2]]);
            double d = 0;
            for (double a : ang) d += (a - M_PI / 3) * (a - M_PI / 3);
            return d;
        };
        double expect = dev(f);
        for (int k = 0; k < 3; ++k)
            if (adj[f][k] >= 0) expect += dev(adj[f][k]);
        CHECK(scores[f] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("most regular face equals argmin of exhaustive scores on a large mesh") {
    TriangleMesh m = make_ellipsoid(1.7, 1.0, 0.8, 4);  // 5120 faces
    auto scores = face_regularity_scores(m);
    double lowest = scores[0];
    for (double s : scores) lowest = std::min(lowest, s);
    int best = -1;
    for (int f = 0; f < m.faceCount(); ++f) {
        if (scores[f] <= lowest + 1e-12 * (1.0 + lowest)) {
            best = f;
            break;
        }
    }
    CHECK(most_regular_face(m) == best);
}

TEST_CASE("isometric embedding of an already planar triangle") {
    auto e = isometric_face_embedding(Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0));
    CHECK(std::abs(e[0]) < 1e-15);
    CHECK(std::abs(e[1] - Complex(1, 0)) < 1e-15);
    CHECK(std::abs(e[2] - Complex(0, 1)) < 1e-15);
}

TEST_CASE("isometric embedding of a rotated equilateral triangle") {
    std::mt19937 rng(3);
    Eigen::Matrix3d r = randomRotation(rng);
    Vec3 p1 = r * Vec3(5, -2, 1);
    Vec3 p2 = p1 + r * Vec3(2, 0, 0);
    Vec3 p3 = p1 + r * Vec3(1, std::sqrt(3.0), 0);
    auto e = isometric_face_embedding(p1, p2, p3);
    CHECK(std::abs(e[1] - Complex(2, 0)) < 1e-12);
    CHECK(std::abs(e[2] - Complex(1, std::sqrt(3.0))) < 1e-12);
}

TEST_CASE("isometric embedding rejects collinear points") {
    CHECK_THROWS_AS(isometric_face_embedding(Vec3(0, 0, 0), Vec3(1, 1, 1), Vec3(2, 2, 2)),
                    MeshError);
}

TEST_CASE("isometric embedding preserves lengths and orientation") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 200; ++trial) {
        Vec3 p1(u(rng), u(rng), u(rng)), p2(u(rng), u(rng), u(rng)), p3(u(rng), u(rng), u(rng));
        if (face_area(p1, p2, p3) < 1e-3) continue;
        auto e = isometric_face_embedding(p1, p2, p3);
        CHECK(std::abs(std::abs(e[1] - e[0]) - (p2 - p1).norm()) < 1e-12 * (p2 - p1).norm());
        CHECK(std::abs(std::abs(e[2] - e[0]) - (p3 - p1).norm()) < 1e-12 * (p3 - p1).norm());
        CHECK(std::abs(std::abs(e[2] - e[1]) - (p3 - p2).norm()) < 1e-12 * (p3 - p2).norm());
        CHECK(signed_area(e[0], e[1], e[2]) > 0.0);
    }
}

TEST_CASE("face selection deduplicates and sorts") {
    FaceSelection sel(std::vector<int>{5, 1, 3, 1, 5});
    CHECK(sel.indices == std::vector<int>{1, 3, 5});
    CHECK(sel.contains(3));
    CHECK_FALSE(sel.contains(2));
}

TEST_SUITE_END();
