#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "fsqc/errors.hpp"
#include "fsqc/mesh.hpp"
#include "fsqc/mesh_io.hpp"
#include "fsqc/qc.hpp"
#include "fsqc/remesh.hpp"
#include "fsqc/spherical.hpp"
#include "fsqc/synth.hpp"
#include "fsqc/version.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitSolver = 2;
constexpr int kExitNonManifold = 3;

fsqc::DilationField resolveDilation(const fsqc::TriangleMesh& mesh, double uniformK,
                                    const std::string& csvPath) {
    if (!csvPath.empty()) {
        fsqc::DilationField field = fsqc::load_dilation_csv(csvPath);
        if (field.faceCount() != mesh.faceCount())
            throw fsqc::MeshError("dilation CSV has " + std::to_string(field.faceCount()) +
                                  " faces, mesh has " + std::to_string(mesh.faceCount()));
        for (size_t f = 0; f < field.k.size(); ++f)
            if (!(field.k[f] >= 1.0))
                throw fsqc::MeshError("K must be >= 1 (face " + std::to_string(f) + ")");
        return field;
    }
    if (!(uniformK >= 1.0)) throw fsqc::MeshError("K must be >= 1");
    fsqc::DilationField field;
    field.k.assign(static_cast<size_t>(mesh.faceCount()), uniformK);
    return field;
}

int cmdParam(const std::string& inPath, const std::string& outPath, const std::string& reportPath,
             double uniformK, const std::string& kCsv, std::optional<std::pair<int, int>> direction,
             double solverTol) {
    fsqc::TriangleMesh mesh = fsqc::load_mesh(inPath);
    fsqc::require_genus0(mesh);
    fsqc::DilationField target = resolveDilation(mesh, uniformK, kCsv);

    fsqc::FsqcOptions options;
    options.direction = direction;
    if (solverTol > 0) {
        options.solve.tolerance = solverTol;
        options.init.solve.tolerance = solverTol;
    }
    fsqc::FsqcResult result = fsqc::fsqc_parameterize(mesh, target, options);

    if (result.stats.flippedFaces > 0)
        std::fprintf(stderr, "warning: %d flipped face(s) in the spherical image\n",
                     result.stats.flippedFaces);
    if (result.outlyingVertices > 0)
        std::fprintf(stderr, "warning: %d vertex/vertices outside the outer triangle image\n",
                     result.outlyingVertices);

    fsqc::save_mesh(outPath, result.sphere.toMesh());
    if (!reportPath.empty()) fsqc::write_stats_report(reportPath, result.stats);
    std::printf("%s\n", fsqc::stats_summary(result.stats).c_str());
    return 0;
}

int cmdRemesh(const std::string& inPath, const std::string& specPath, const std::string& outPath,
              const std::string& metricsPath, const std::string& reportPath, double solverTol) {
    fsqc::TriangleMesh mesh = fsqc::load_mesh(inPath);
    fsqc::require_genus0(mesh);
    fsqc::RegionSpec spec = fsqc::load_region_spec(specPath);
    spec.validate(mesh);

    fsqc::FsqcOptions options;
    if (solverTol > 0) {
        options.solve.tolerance = solverTol;
        options.init.solve.tolerance = solverTol;
    }
    fsqc::RemeshOutput out = fsqc::remesh_pipeline(mesh, spec, options);

    fsqc::save_mesh(outPath, out.result.mesh);
    if (!metricsPath.empty()) fsqc::write_quality_csv(metricsPath, out.result);
    if (!reportPath.empty()) fsqc::write_stats_report(reportPath, out.parameterization.stats);
    std::printf("remeshed %d faces -> %d faces | %s\n", mesh.faceCount(),
                out.result.mesh.faceCount(),
                fsqc::stats_summary(out.parameterization.stats).c_str());
    return 0;
}

int cmdMetrics(const std::string& sourcePath, const std::string& targetPath,
               const std::string& reportPath, double uniformK, const std::string& kCsv) {
    fsqc::TriangleMesh source = fsqc::load_mesh(sourcePath);
    fsqc::TriangleMesh target = fsqc::load_mesh(targetPath);
    if (source.faces != target.faces || source.vertexCount() != target.vertexCount())
        throw fsqc::MeshError("meshes must share identical connectivity");
    fsqc::DilationField targetK = resolveDilation(source, uniformK, kCsv);

    fsqc::SphericalEmbedding image{target.vertices, target.faces};
    fsqc::DilationStats stats = fsqc::verify_dilation(source, image, targetK);
    if (!reportPath.empty()) fsqc::write_stats_report(reportPath, stats);
    std::printf("%s\n", fsqc::stats_summary(stats).c_str());
    return 0;
}

int cmdGen(const std::string& shape, int level, int slices, int stacks,
           const std::vector<double>& axes, double ridgeHeight, double regionK,
           const std::string& outPath, const std::string& regionSpecPath) {
    fsqc::TriangleMesh mesh;
    if (shape == "icosphere") {
        mesh = fsqc::make_icosphere(level);
    } else if (shape == "uvsphere") {
        mesh = fsqc::make_uvsphere(slices, stacks);
    } else if (shape == "ellipsoid") {
        if (axes.size() != 3) throw fsqc::MeshError("ellipsoid needs --axes a,b,c");
        mesh = fsqc::make_ellipsoid(axes[0], axes[1], axes[2], level);
    } else if (shape == "ridge") {
        fsqc::RidgeMesh ridge = fsqc::make_ridge_ellipsoid(level, ridgeHeight, regionK);
        mesh = ridge.mesh;
        if (!regionSpecPath.empty()) {
            std::string facesPath = regionSpecPath + ".faces.txt";
            fsqc::save_face_selection(facesPath, ridge.region.region);
            // the spec file references the face list by its basename
            std::string base = facesPath;
            auto slash = base.find_last_of('/');
            if (slash != std::string::npos) base = base.substr(slash + 1);
            fsqc::save_region_spec(regionSpecPath, ridge.region, base);
        }
    } else {
        throw fsqc::MeshError("unknown shape: " + shape);
    }
    fsqc::save_mesh(outPath, mesh);
    std::printf("wrote %s: %d vertices, %d faces\n", outPath.c_str(), mesh.vertexCount(),
                mesh.faceCount());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* threads = std::getenv("FSQC_THREADS"))
        Eigen::setNbThreads(std::max(1, std::atoi(threads)));

    CLI::App app{"Spherical quasiconformal parameterization and adaptive remeshing"};
    app.set_version_flag("--version", fsqc::kVersion);
    app.require_subcommand(1);

    // param
    std::string inPath, outPath, reportPath, kCsv;
    double uniformK = 1.0, solverTol = -1.0;
    std::vector<int> directionPair;
    auto* param = app.add_subcommand("param", "Compute a spherical quasiconformal parameterization");
    param->add_option("--in", inPath, "input mesh (OFF/OBJ/PLY)")->required();
    param->add_option("--out", outPath, "output spherical mesh")->required();
    param->add_option("--report", reportPath, "dilation statistics CSV");
    auto* uk = param->add_option("--uniform-k", uniformK, "uniform target dilation K >= 1");
    auto* kc = param->add_option("--k-csv", kCsv, "per-face target dilation CSV (face_index,k)");
    uk->excludes(kc);
    param->add_option("--direction", directionPair, "principal-direction vertex pair p1 p2")
        ->expected(2);
    param->add_option("--solver-tol", solverTol, "relative residual tolerance override");

    // remesh
    std::string specPath, metricsPath;
    auto* remesh = app.add_subcommand("remesh", "Adaptive remeshing via the parameterization");
    remesh->add_option("--in", inPath, "input mesh")->required();
    remesh->add_option("--region-spec", specPath, "region spec file")->required();
    remesh->add_option("--out", outPath, "output remeshed mesh")->required();
    remesh->add_option("--metrics", metricsPath, "per-face quality CSV");
    remesh->add_option("--report", reportPath, "dilation statistics CSV");
    remesh->add_option("--solver-tol", solverTol, "relative residual tolerance override");

    // metrics
    std::string targetPath;
    auto* metrics = app.add_subcommand("metrics", "Dilation statistics between two meshes");
    metrics->add_option("--source", inPath, "source mesh")->required();
    metrics->add_option("--target", targetPath, "target mesh (same connectivity)")->required();
    metrics->add_option("--report", reportPath, "statistics CSV")->required();
    auto* muk = metrics->add_option("--uniform-k", uniformK, "reference target dilation");
    auto* mkc = metrics->add_option("--k-csv", kCsv, "reference per-face dilation CSV");
    muk->excludes(mkc);

    // gen
    std::string shape, regionSpecPath;
    int level = 4, slices = 64, stacks = 64;
    std::vector<double> axes;
    double ridgeHeight = 0.15, regionK = 2.5;
    auto* gen = app.add_subcommand("gen", "Generate synthetic test meshes");
    gen->add_option("--shape", shape, "icosphere | uvsphere | ellipsoid | ridge")->required();
    gen->add_option("--level", level, "icosphere subdivision level");
    gen->add_option("--slices", slices, "uvsphere meridian count");
    gen->add_option("--stacks", stacks, "uvsphere parallel count");
    gen->add_option("--axes", axes, "ellipsoid semi-axes a b c")->expected(3);
    gen->add_option("--ridge-height", ridgeHeight, "ridge bump height");
    gen->add_option("--region-k", regionK, "region dilation written to the spec");
    gen->add_option("--out", outPath, "output mesh path")->required();
    gen->add_option("--region-spec-out", regionSpecPath, "write the ridge region spec here");

    CLI11_PARSE(app, argc, argv);

    try {
        std::optional<std::pair<int, int>> direction;
        if (directionPair.size() == 2) direction = {directionPair[0], directionPair[1]};
        if (param->parsed())
            return cmdParam(inPath, outPath, reportPath, uniformK, kCsv, direction, solverTol);
        if (remesh->parsed())
            return cmdRemesh(inPath, specPath, outPath, metricsPath, reportPath, solverTol);
        if (metrics->parsed())
            return cmdMetrics(inPath, targetPath, reportPath, uniformK, kCsv);
        if (gen->parsed())
            return cmdGen(shape, level, slices, stacks, axes, ridgeHeight, regionK, outPath,
                          regionSpecPath);
    } catch (const fsqc::SolverError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSolver;
    } catch (const fsqc::NonManifoldError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNonManifold;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    }
    return 0;
}
