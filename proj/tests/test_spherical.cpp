#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <Eigen/Dense>

#include "fsqc/errors.hpp"
#include "fsqc/qc.hpp"
#include "fsqc/spherical.hpp"
#include "fsqc/synth.hpp"

using namespace fsqc;

namespace {

DilationField uniformK(int faces, double k) {
    DilationField f;
    f.k.assign(static_cast<size_t>(faces), k);
    return f;
}

// best rigid alignment of a onto b (orthogonal Procrustes, rotation only)
double procrustesMaxError(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    for (size_t i = 0; i < a.size(); ++i) m += a[i] * b[i].transpose();
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d u = svd.matrixU(), v = svd.matrixV();
    Eigen::Matrix3d r = v * u.transpose();
    if (r.determinant() < 0) {
        v.col(2) *= -1;
        r = v * u.transpose();
    }
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, (r * a[i] - b[i]).norm());
    return worst;
}

TriangleMesh torusMesh() {
    TriangleMesh m;
    const int nu = 10, nv = 6;
    for (int i = 0; i < nu; ++i) {
        double aa = 2 * M_PI * i / nu;
        for (int j = 0; j < nv; ++j) {
            double bb = 2 * M_PI * j / nv;
            double r = 2.0 + 0.5 * std::cos(bb);
            m.vertices.emplace_back(r * std::cos(aa), r * std::sin(aa), 0.5 * std::sin(bb));
        }
    }
    auto at = [&](int i, int j) { return (i % nu) * nv + (j % nv); };
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nv; ++j) {
            m.faces.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
            m.faces.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
        }
    return m;
}

}  // namespace

TEST_SUITE_BEGIN("spherical");

TEST_CASE("boundary map coefficients: K = 1 is the identity") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int trial = 0; trial < 50; ++trial) {
        Complex v1(u(rng), u(rng)), v2(u(rng), u(rng));
        if (std::abs(v1 - v2) < 1e-3) continue;
        BoundaryMapCoefficients h = boundary_map_coefficients(v1, v2, 1.0);
        CHECK(h.a == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(h.b) < 1e-12);
        CHECK(std::abs(h.c) < 1e-12);
        CHECK(h.d == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(h.r) < 1e-11);
        CHECK(std::abs(h.s) < 1e-11);
    }
}

TEST_CASE("boundary map coefficients: reference K = 4 case") {
    BoundaryMapCoefficients h = boundary_map_coefficients(Complex(0, 0), Complex(1, 0), 4.0);
    CHECK(h.a == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(h.b) < 1e-13);
    CHECK(std::abs(h.c) < 1e-13);
    CHECK(h.d == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(std::abs(h.r) < 1e-13);
    CHECK(std::abs(h.s) < 1e-13);
    CHECK(std::abs(h.apply(Complex(0.5, 1.0)) - Complex(0.5, 0.25)) < 1e-12);
    CHECK(h.determinant == doctest::Approx(-4.0).epsilon(1e-12));
}

TEST_CASE("boundary map satisfies all six equations and fixes v1, v2") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-3, 3);
    std::uniform_real_distribution<double> kk(1, 8);
    for (int trial = 0; trial < 100; ++trial) {
        Complex v1(u(rng), u(rng)), v2(u(rng), u(rng));
        if (std::abs(v1 - v2) < 1e-2) continue;
        double K = kk(rng);
        BoundaryMapCoefficients h = boundary_map_coefficients(v1, v2, K);
        double scale = std::max(std::abs(v1), std::abs(v2));
        CHECK(std::abs(h.apply(v1) - v1) < 1e-12 * std::max(1.0, scale));
        CHECK(std::abs(h.apply(v2) - v2) < 1e-12 * std::max(1.0, scale));
        CHECK(std::abs(h.a / K - h.d) < 1e-12 * std::max(1.0, std::abs(h.a)));
        CHECK(std::abs(K * h.b + h.c) < 1e-12 * std::max(1.0, K * std::abs(h.b)));
        CHECK(h.a * h.d - h.b * h.c > 0.0);

        // determinant formula from the nonsingularity proposition
        double expect = -K * (v2.real() - v1.real()) * (v2.real() - v1.real()) -
                        (v2.imag() - v1.imag()) * (v2.imag() - v1.imag()) / K;
        CHECK(h.determinant == doctest::Approx(expect).epsilon(1e-12));

        // mu of h is (K-1)/(K+1), real
        Complex fz = 0.5 * Complex(h.a + h.d, h.c - h.b);
        Complex fzbar = 0.5 * Complex(h.a - h.d, h.c + h.b);
        Complex mu = fzbar / fz;
        CHECK(std::abs(mu - Complex((K - 1) / (K + 1), 0)) < 1e-12);
    }
}

TEST_CASE("coincident constraint points are rejected") {
    CHECK_THROWS_AS(static_cast<void>(boundary_map_coefficients(Complex(1, 1), Complex(1, 1), 2.0)),
                    MeshError);
}

TEST_CASE("balancing scale on a two-face domain") {
    // outer face centroid at radius 4, inner at radius 1
    PlanarEmbedding dom;
    dom.z = {Complex(4, -1), Complex(4, 1), Complex(4, 0),
             Complex(1, -0.5), Complex(1, 0.5), Complex(1, 0)};
    dom.faces = {{0, 1, 2}, {3, 4, 5}};
    dom.outerFace = 0;
    BalanceInfo info = balancing_scale(dom);
    CHECK(info.applied);
    CHECK(info.rOut == doctest::Approx(4.0));
    CHECK(info.rIn == doctest::Approx(1.0));
    CHECK(info.scale == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(info.scale * info.rOut == doctest::Approx(2.0));
    CHECK(info.scale * info.rIn == doctest::Approx(0.5));
}

TEST_CASE("already balanced domain keeps scale 1") {
    PlanarEmbedding dom;
    dom.z = {Complex(1, -0.1), Complex(1, 0.1), Complex(1, 0),
             Complex(-1, -0.1), Complex(-1, 0.1), Complex(-1, 0)};
    dom.faces = {{0, 1, 2}, {3, 4, 5}};
    dom.outerFace = 0;
    BalanceInfo info = balancing_scale(dom);
    CHECK(info.applied);
    CHECK(info.scale == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("balanced radii multiply to one") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(0.1, 20.0);
    for (int trial = 0; trial < 50; ++trial) {
        double rOut = u(rng), rIn = u(rng);
        PlanarEmbedding dom;
        dom.z = {Complex(rOut, -1), Complex(rOut, 1), Complex(rOut, 0),
                 Complex(rIn, -0.1), Complex(rIn, 0.1), Complex(rIn, 0)};
        dom.faces = {{0, 1, 2}, {3, 4, 5}};
        dom.outerFace = 0;
        BalanceInfo info = balancing_scale(dom);
        CHECK(info.applied);
        CHECK(info.scale * info.rOut * info.scale * info.rIn == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("balancing skips when a face centroid sits at the origin") {
    PlanarEmbedding dom;
    dom.z = {Complex(4, -1), Complex(4, 1), Complex(4, 0),
             Complex(-1, 0), Complex(0.5, 0.8), Complex(0.5, -0.8)};
    dom.faces = {{0, 1, 2}, {3, 4, 5}};
    dom.outerFace = 0;
    Complex before = dom.z[0];
    BalanceInfo info = balancing_scale(dom);
    CHECK_FALSE(info.applied);
    CHECK(dom.z[0] == before);
}

TEST_CASE("conformal init on the level-4 icosphere") {
    TriangleMesh mesh = make_icosphere(4);
    SphericalEmbedding sphere = spherical_conformal_init(mesh);
    CHECK(count_sphere_flips(sphere) == 0);
    for (const Vec3& p : sphere.points) CHECK(std::abs(p.norm() - 1.0) < 1e-9);
    DilationField d = dilation_r3(mesh, sphere.toMesh());
    double mean = 0;
    for (double k : d.k) mean += k;
    mean /= d.faceCount();
    CHECK(mean <= 1.05);
}

TEST_CASE("conformal init maps the icosahedron to a flip-free unit configuration") {
    // A coarse mesh carries O(1) angle defects per vertex, so the image stays
    // a distorted icosahedron: bijective and unit-norm, aligned only loosely.
    TriangleMesh mesh = make_icosahedron();
    SphericalEmbedding sphere = spherical_conformal_init(mesh);
    CHECK(count_sphere_flips(sphere) == 0);
    for (const Vec3& p : sphere.points) CHECK(std::abs(p.norm() - 1.0) < 1e-9);
    double err = procrustesMaxError(sphere.points, mesh.vertices);
    CHECK(err < 0.8);  // measured ~0.5; far from the 1e-6 a smooth mesh would allow
}

TEST_CASE("torus input is rejected by validation") {
    CHECK_THROWS_AS(static_cast<void>(spherical_conformal_init(torusMesh())), MeshError);
}

TEST_CASE("fsqc with K = 1 stays conformal on the icosphere") {
    TriangleMesh mesh = make_icosphere(4);
    FsqcResult r = fsqc_parameterize(mesh, uniformK(mesh.faceCount(), 1.0));
    CHECK(r.stats.mean <= 1.1);
    CHECK(r.stats.flippedFaces == 0);
    for (const Vec3& p : r.sphere.points) CHECK(std::abs(p.norm() - 1.0) < 1e-9);
}

TEST_CASE("fsqc with K = 1 equals the plain harmonic solve in the LBS stage") {
    // with mu identically zero the generalized operator is the cotangent
    // Laplacian of the domain, so both solves agree on the free vertices
    TriangleMesh mesh = make_icosphere(3);
    SphericalEmbedding init = spherical_conformal_init(mesh);
    TriangleMesh sphereMesh = init.toMesh();
    int outer = most_regular_face(sphereMesh);
    const auto tri = mesh.faces[outer];
    Vec3 centroid = (init.points[tri[0]] + init.points[tri[1]] + init.points[tri[2]]) / 3.0;
    Eigen::Matrix3d rot = rotation_to_north(centroid);
    PlanarEmbedding dom;
    dom.faces = mesh.faces;
    dom.outerFace = outer;
    for (const Vec3& p : init.points) {
        Vec3 q = (rot * p).normalized();
        dom.z.push_back(std::conj(stereographic_north(q)));
    }
    std::map<int, Complex> bc{{tri[0], dom.z[tri[0]]},
                              {tri[1], dom.z[tri[1]]},
                              {tri[2], dom.z[tri[2]]}};

    BeltramiField zero;
    zero.mu.assign(mesh.faces.size(), Complex(0, 0));
    auto viaGeneral =
        solve_dirichlet(assemble_generalized_laplacian(dom, zero, FaceSelection({outer})), bc);
    EllipticOperator cot;
    cot.matrix = cotangent_laplacian_matrix(dom, outer);
    auto viaCot = solve_dirichlet(cot, bc);
    for (size_t v = 0; v < viaGeneral.size(); ++v)
        CHECK(std::abs(viaGeneral[v] - viaCot[v]) < 1e-9 * std::max(1.0, std::abs(viaCot[v])));
}

TEST_CASE("translation and balancing leave per-face |mu| unchanged") {
    TriangleMesh mesh = make_icosphere(3);
    FsqcResult r = fsqc_parameterize(mesh, uniformK(mesh.faceCount(), 2.0));
    PlanarEmbedding before = r.planar;
    PlanarEmbedding after = before;
    for (Complex& z : after.z) z = 0.37 * (z - Complex(1.5, -2.0));
    BeltramiField muB = beltrami_coefficient_vs_mesh(before, mesh, r.outerFace);
    BeltramiField muA = beltrami_coefficient_vs_mesh(after, mesh, r.outerFace);
    for (size_t f = 0; f < muB.mu.size(); ++f)
        CHECK(std::abs(std::abs(muA.mu[f]) - std::abs(muB.mu[f])) < 1e-12);
}

TEST_CASE("verify_dilation on a rotated sphere mesh reports mean 1, sd 0") {
    TriangleMesh mesh = make_icosphere(3);  // already on the unit sphere
    Eigen::Matrix3d rot = rotation_to_north(Vec3(1, 2, 3));
    SphericalEmbedding image;
    image.faces = mesh.faces;
    for (const Vec3& p : mesh.vertices) image.points.push_back(rot * p);
    DilationStats stats = verify_dilation(mesh, image, uniformK(mesh.faceCount(), 1.0));
    CHECK(stats.mean == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(stats.sd == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(stats.max == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(stats.flippedFaces == 0);
    CHECK(stats.meanDrift() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("stats report exposes drift columns, version and histogram") {
    TriangleMesh mesh = make_icosphere(2);
    DilationField target = uniformK(mesh.faceCount(), 4.0);
    SphericalEmbedding image{mesh.vertices, mesh.faces};
    DilationStats stats = verify_dilation(mesh, image, target);
    CHECK(stats.targetMean == doctest::Approx(4.0));
    CHECK(stats.targetSd == doctest::Approx(0.0));
    CHECK(stats.sdDrift() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(stats.histHi == doctest::Approx(8.0));  // max(8, 1.2*4)
    CHECK(stats.histogram.size() == 64);
    long total = 0;
    for (long c : stats.histogram) total += c;
    CHECK(total == stats.faceCount);

    auto path = (std::filesystem::temp_directory_path() / "fsqc_stats.csv").string();
    write_stats_report(path, stats);
    std::ifstream in(path);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header.find("mean_drift") != std::string::npos);
    CHECK(header.find("sd_drift") != std::string::npos);
    CHECK(row.find("fsqc") != std::string::npos);
    CHECK(std::filesystem::exists(path + ".hist.csv"));
}

TEST_CASE("output vertex norms are 1 to 1e-9") {
    TriangleMesh mesh = make_ellipsoid(1.5, 1.0, 0.7, 3);
    FsqcResult r = fsqc_parameterize(mesh, uniformK(mesh.faceCount(), 2.0));
    for (const Vec3& p : r.sphere.points) CHECK(std::abs(p.norm() - 1.0) < 1e-9);
}

TEST_CASE("region fields up to K = 5 keep the sphere flip-free") {
    TriangleMesh mesh = make_ellipsoid(1.5, 1.0, 0.9, 3);
    DilationField field = uniformK(mesh.faceCount(), 1.0);
    for (int f = 100; f < 160; ++f) field.k[static_cast<size_t>(f)] = 5.0;
    FsqcResult r = fsqc_parameterize(mesh, field);
    CHECK(r.stats.flippedFaces == 0);
}

TEST_CASE("dilation field size mismatch and invalid K are rejected") {
    TriangleMesh mesh = make_icosphere(2);
    CHECK_THROWS_AS(static_cast<void>(fsqc_parameterize(mesh, uniformK(7, 1.0))), MeshError);
    CHECK_THROWS_AS(static_cast<void>(fsqc_parameterize(mesh, uniformK(mesh.faceCount(), 0.5))),
                    MeshError);
}

TEST_SUITE_END();
