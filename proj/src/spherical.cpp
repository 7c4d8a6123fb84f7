#include "fsqc/spherical.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <numeric>

#include <Eigen/Dense>

#include "fsqc/errors.hpp"
#include "fsqc/version.hpp"

namespace fsqc {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// The working plane is the mirrored stereographic chart: zeta = conj(P_N(p)).
// In it every non-outer face of a flip-free domain is positively oriented,
// and the inverse map is p = P_N^{-1}(conj(zeta)).
Complex toWorkingPlane(const Vec3& p) { return std::conj(stereographic_north(p)); }
Vec3 fromWorkingPlane(const Complex& zeta) { return inverse_stereographic(std::conj(zeta)); }

void translateToVertexCentroid(std::vector<Complex>& z) {
    Complex mean(0, 0);
    for (const Complex& v : z) mean += v;
    mean /= static_cast<double>(z.size());
    for (Complex& v : z) v -= mean;
}

// Rescale so the geometric mean of the outer-corner radius and the smallest
// vertex radius is 1; keeps the |zeta| = 1 circle near the equator for the
// hemisphere splits below.
void normalizeScale(std::vector<Complex>& z, const std::array<int, 3>& corners) {
    double rn = (std::abs(z[corners[0]]) + std::abs(z[corners[1]]) + std::abs(z[corners[2]])) / 3.0;
    double rs = std::numeric_limits<double>::infinity();
    for (const Complex& v : z) rs = std::min(rs, std::abs(v));
    if (rs <= 1e-12 * rn || rn <= 0.0) return;
    double s = 1.0 / std::sqrt(rn * rs);
    for (Complex& v : z) v *= s;
}

std::vector<Complex> solveLaplace(const SparseMatrix& lap, const std::map<int, Complex>& bc,
                                  const SolveOptions& options) {
    EllipticOperator op;
    op.matrix = lap;
    return solve_dirichlet(op, bc, options);
}

template <typename Fn>
auto runStage(const char* stage, Fn&& fn) {
    try {
        return fn();
    } catch (const SolverError& e) {
        throw SolverError(std::string(stage) + ": " + e.what(), e.residual);
    } catch (const std::exception& e) {
        throw MeshError(std::string(stage) + ": " + e.what());
    }
}

bool pointInTriangle(const Complex& p, const Complex& a, const Complex& b, const Complex& c) {
    double s1 = signed_area(a, b, p);
    double s2 = signed_area(b, c, p);
    double s3 = signed_area(c, a, p);
    return (s1 >= 0 && s2 >= 0 && s3 >= 0) || (s1 <= 0 && s2 <= 0 && s3 <= 0);
}

}  // namespace

BoundaryMapCoefficients boundary_map_coefficients(const Complex& v1, const Complex& v2, double K) {
    if (!(K >= 1.0)) throw MeshError("boundary_map_coefficients: K must be >= 1");
    double x1 = v1.real(), y1 = v1.imag(), x2 = v2.real(), y2 = v2.imag();
    double scale = std::max({std::abs(x1), std::abs(y1), std::abs(x2), std::abs(y2), 1.0});
    if (std::abs(v1 - v2) <= 1e-14 * scale)
        throw MeshError("boundary_map_coefficients: coincident constraint points");

    Eigen::Matrix<double, 6, 6> m;
    m << x1, y1, 0, 0, 1, 0,
         0, 0, x1, y1, 0, 1,
         x2, y2, 0, 0, 1, 0,
         0, 0, x2, y2, 0, 1,
         1.0 / K, 0, 0, -1, 0, 0,
         0, K, 1, 0, 0, 0;
    Eigen::Matrix<double, 6, 1> rhs;
    rhs << x1, y1, x2, y2, 0, 0;

    Eigen::FullPivLU<Eigen::Matrix<double, 6, 6>> lu(m);
    Eigen::Matrix<double, 6, 1> sol = lu.solve(rhs);
    BoundaryMapCoefficients out{sol(0), sol(1), sol(2), sol(3), sol(4), sol(5), m.determinant()};
    return out;
}

BalanceInfo balancing_scale(PlanarEmbedding& domain) {
    BalanceInfo info;
    if (domain.outerFace < 0 || domain.outerFace >= domain.faceCount())
        throw MeshError("balancing_scale: no outer face designated");
    if (domain.faceCount() < 2) throw MeshError("balancing_scale: no non-outer face");

    auto centroid = [&](int f) {
        const auto& fc = domain.faces[f];
        return (domain.z[fc[0]] + domain.z[fc[1]] + domain.z[fc[2]]) / 3.0;
    };
    info.rOut = std::abs(centroid(domain.outerFace));
    info.rIn = std::numeric_limits<double>::infinity();
    for (int f = 0; f < domain.faceCount(); ++f) {
        if (f == domain.outerFace) continue;
        info.rIn = std::min(info.rIn, std::abs(centroid(f)));
    }
    double extent = 0.0;
    for (const Complex& v : domain.z) extent = std::max(extent, std::abs(v));
    if (info.rIn <= 1e-9 * extent || info.rOut <= 1e-9 * extent) {
        info.scale = 1.0;
        info.applied = false;  // a face centroid sits at the origin; skip
        return info;
    }
    info.scale = 1.0 / std::sqrt(info.rOut * info.rIn);
    for (Complex& v : domain.z) v *= info.scale;
    info.applied = true;
    return info;
}

int count_sphere_flips(const SphericalEmbedding& sphere) {
    int flips = 0;
    for (const auto& f : sphere.faces) {
        double det = sphere.points[f[0]].dot(sphere.points[f[1]].cross(sphere.points[f[2]]));
        if (det <= 0.0) ++flips;
    }
    return flips;
}

DilationStats verify_dilation(const TriangleMesh& mesh, const SphericalEmbedding& sphere,
                              const DilationField& target) {
    DilationField d = dilation_r3(mesh, sphere.toMesh());
    DilationStats stats;
    stats.faceCount = d.faceCount();
    double sum = 0.0;
    for (double k : d.k) {
        sum += k;
        stats.max = std::max(stats.max, k);
    }
    stats.mean = sum / stats.faceCount;
    double var = 0.0;
    for (double k : d.k) var += (k - stats.mean) * (k - stats.mean);
    stats.sd = std::sqrt(var / stats.faceCount);

    double tsum = 0.0, tmax = 1.0;
    for (double k : target.k) {
        tsum += k;
        tmax = std::max(tmax, k);
    }
    stats.targetMean = target.k.empty() ? 0.0 : tsum / static_cast<double>(target.k.size());
    double tvar = 0.0;
    for (double k : target.k) tvar += (k - stats.targetMean) * (k - stats.targetMean);
    stats.targetSd = target.k.empty() ? 0.0 : std::sqrt(tvar / static_cast<double>(target.k.size()));

    stats.flippedFaces = count_sphere_flips(sphere);

    stats.histLo = 1.0;
    stats.histHi = std::max(8.0, 1.2 * tmax);
    stats.histogram.assign(64, 0);
    double width = (stats.histHi - stats.histLo) / 64.0;
    for (double k : d.k) {
        int bin = static_cast<int>((k - stats.histLo) / width);
        bin = std::clamp(bin, 0, 63);
        ++stats.histogram[static_cast<size_t>(bin)];
    }
    return stats;
}

std::string stats_summary(const DilationStats& stats) {
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "faces %d | target dilation mean %.4f sd %.4f | resulting mean %.4f sd %.4f "
                  "max %.4f | drift mean %+.4f sd %+.4f | flipped %d",
                  stats.faceCount, stats.targetMean, stats.targetSd, stats.mean, stats.sd,
                  stats.max, stats.meanDrift(), stats.sdDrift(), stats.flippedFaces);
    return buf;
}

void write_stats_report(const std::string& path, const DilationStats& stats) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw MeshError("cannot write file: " + path);
    std::fputs(
        "tool_version,faces,target_mean,target_sd,result_mean,result_sd,result_max,"
        "mean_drift,sd_drift,flipped_faces\n",
        f);
    std::fprintf(f, "%s,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", kVersion,
                 stats.faceCount, stats.targetMean, stats.targetSd, stats.mean, stats.sd,
                 stats.max, stats.meanDrift(), stats.sdDrift(), stats.flippedFaces);
    std::fclose(f);

    std::FILE* h = std::fopen((path + ".hist.csv").c_str(), "w");
    if (!h) throw MeshError("cannot write file: " + path + ".hist.csv");
    std::fputs("bin_lo,bin_hi,count\n", h);
    double width = (stats.histHi - stats.histLo) / static_cast<double>(stats.histogram.size());
    for (size_t i = 0; i < stats.histogram.size(); ++i)
        std::fprintf(h, "%.17g,%.17g,%ld\n", stats.histLo + width * static_cast<double>(i),
                     stats.histLo + width * static_cast<double>(i + 1), stats.histogram[i]);
    std::fclose(h);
}

SphericalEmbedding spherical_conformal_init(const TriangleMesh& mesh, const InitOptions& options) {
    require_genus0(mesh);
    const int n = mesh.vertexCount();

    // Big-triangle harmonic solve on the punctured mesh. The outer corners
    // run clockwise in the working plane so interior faces come out
    // positively oriented.
    const int t0 = most_regular_face(mesh);
    const auto corners = mesh.faces[t0];
    std::vector<Complex> zeta = runStage("initial harmonic solve", [&] {
        SparseMatrix lap = cotangent_laplacian_matrix(mesh.vertices, mesh.faces, t0);
        std::map<int, Complex> bc;
        for (int k = 0; k < 3; ++k) {
            double ang = kPi / 2.0 - 2.0 * kPi * k / 3.0;
            bc[corners[k]] = options.bigTriangleCircumradius * Complex(std::cos(ang), std::sin(ang));
        }
        return solveLaplace(lap, bc, options.solve);
    });
    translateToVertexCentroid(zeta);
    normalizeScale(zeta, corners);

    // Hemisphere re-solves: the big-triangle solve concentrates its error
    // around the three pinned corners, so re-solve the northern half in the
    // inverted chart with the south pinned, then the south with the north
    // pinned. Both reuse the closed-surface Laplacian. A pass that increases
    // the flip count of the projected sphere (possible when the pinned ring
    // crosses a distorted zone) is discarded.
    auto toSphere = [&](std::vector<Complex> z) {
        translateToVertexCentroid(z);
        PlanarEmbedding domain{std::move(z), mesh.faces, t0};
        balancing_scale(domain);
        SphericalEmbedding sphere;
        sphere.faces = mesh.faces;
        sphere.points.resize(domain.z.size());
        for (size_t i = 0; i < domain.z.size(); ++i)
            sphere.points[i] = fromWorkingPlane(domain.z[i]);
        return sphere;
    };

    SparseMatrix lapFull = cotangent_laplacian_matrix(mesh.vertices, mesh.faces);
    int flipsBefore = count_sphere_flips(toSphere(zeta));
    for (int pass = 0; pass < options.refinementPasses; ++pass) {
        const bool north = (pass % 2 == 0);
        std::map<int, Complex> bc;
        for (int i = 0; i < n; ++i) {
            bool pinned = north ? (std::abs(zeta[i]) <= 1.0) : (std::abs(zeta[i]) >= 1.0);
            if (pinned) bc[i] = north ? 1.0 / zeta[i] : zeta[i];
        }
        const int pinnedCount = static_cast<int>(bc.size());
        if (std::min(pinnedCount, n - pinnedCount) < 20) continue;
        std::vector<Complex> sol = runStage(north ? "north re-solve" : "south re-solve", [&] {
            return solveLaplace(lapFull, bc, options.solve);
        });
        std::vector<Complex> candidate(n);
        if (north) {
            bool poleHit = false;
            for (int i = 0; i < n; ++i) {
                if (sol[i] == Complex(0, 0)) {
                    poleHit = true;
                    break;
                }
                candidate[i] = 1.0 / sol[i];
            }
            if (poleHit) continue;
        } else {
            candidate = std::move(sol);
        }
        int flipsAfter = count_sphere_flips(toSphere(candidate));
        if (flipsAfter > flipsBefore) continue;
        zeta = std::move(candidate);
        flipsBefore = flipsAfter;
        normalizeScale(zeta, corners);
    }

    SphericalEmbedding sphere = toSphere(std::move(zeta));
    int flips = count_sphere_flips(sphere);
    if (flips > 0)
        throw MeshError("spherical_conformal_init: " + std::to_string(flips) + " flipped face(s)");
    return sphere;
}

FsqcResult fsqc_parameterize(const TriangleMesh& mesh, const DilationField& targetK,
                             const FsqcOptions& options) {
    if (targetK.faceCount() != mesh.faceCount())
        throw MeshError("fsqc_parameterize: dilation field size mismatch");
    for (size_t f = 0; f < targetK.k.size(); ++f)
        if (!(targetK.k[f] >= 1.0) || !std::isfinite(targetK.k[f]))
            throw MeshError("fsqc_parameterize: K must be >= 1 (face " + std::to_string(f) + ")");

    FsqcResult result;

    SphericalEmbedding init =
        runStage("conformal init", [&] { return spherical_conformal_init(mesh, options.init); });

    // Most regular face of the spherical image becomes the outer triangle.
    TriangleMesh sphereMesh = init.toMesh();
    const int outer = most_regular_face(sphereMesh);
    result.outerFace = outer;
    const auto tri = mesh.faces[outer];

    Vec3 centroid =
        (init.points[tri[0]] + init.points[tri[1]] + init.points[tri[2]]) / 3.0;
    Eigen::Matrix3d rot =
        runStage("rotation to north", [&] { return rotation_to_north(centroid); });

    std::vector<Complex> zeta(init.points.size());
    runStage("stereographic projection", [&] {
        for (size_t i = 0; i < init.points.size(); ++i) {
            Vec3 p = rot * init.points[i];
            p.normalize();
            zeta[i] = toWorkingPlane(p);
        }
        return 0;
    });

    // Optional direction alignment: rotate the plane so the p1->p2 image
    // lands on the positive imaginary axis, putting the real-axis stretch of
    // the (real, nonnegative) mu field across it. This is what sharpens the
    // induced triangulation inside the region.
    if (options.direction) {
        auto [p1, p2] = *options.direction;
        if (p1 < 0 || p2 < 0 || p1 >= mesh.vertexCount() || p2 >= mesh.vertexCount())
            throw MeshError("fsqc_parameterize: direction vertex out of range");
        if (p1 == p2) throw MeshError("fsqc_parameterize: direction vertices must differ");
        Complex delta = zeta[p2] - zeta[p1];
        if (std::abs(delta) == 0.0)
            throw MeshError("fsqc_parameterize: direction vertices have coincident images");
        double theta = std::arg(delta);
        result.rotationAngle = theta;
        Complex factor = std::polar(1.0, kPi / 2.0 - theta);
        for (Complex& v : zeta) v *= factor;
    }

    BeltramiField mu = runStage("mu from dilation", [&] { return mu_from_dilation(targetK); });

    BoundaryMapCoefficients h = runStage("boundary coefficients", [&] {
        return boundary_map_coefficients(zeta[tri[0]], zeta[tri[1]], targetK.k[outer]);
    });
    Complex h3 = h.apply(zeta[tri[2]]);

    PlanarEmbedding domain{std::move(zeta), mesh.faces, outer};
    std::vector<Complex> w = runStage("linear Beltrami solve", [&] {
        EllipticOperator op =
            assemble_generalized_laplacian(domain, mu, FaceSelection({outer}));
        std::map<int, Complex> bc{{tri[0], domain.z[tri[0]]},
                                  {tri[1], domain.z[tri[1]]},
                                  {tri[2], h3}};
        return solve_dirichlet(op, bc, options.solve);
    });

    // Outlying-vertex guard: vertices escaping h(T) only get a warning.
    result.outlyingVertices = 0;
    for (size_t i = 0; i < w.size(); ++i) {
        if (static_cast<int>(i) == tri[0] || static_cast<int>(i) == tri[1] ||
            static_cast<int>(i) == tri[2])
            continue;
        if (!pointInTriangle(w[i], w[tri[0]], w[tri[1]], w[tri[2]])) ++result.outlyingVertices;
    }

    translateToVertexCentroid(w);
    result.planar = PlanarEmbedding{std::move(w), mesh.faces, outer};
    balancing_scale(result.planar);

    result.sphere.faces = mesh.faces;
    result.sphere.points.resize(result.planar.z.size());
    for (size_t i = 0; i < result.planar.z.size(); ++i)
        result.sphere.points[i] = fromWorkingPlane(result.planar.z[i]);

    result.stats = verify_dilation(mesh, result.sphere, targetK);
    return result;
}

}  // namespace fsqc
