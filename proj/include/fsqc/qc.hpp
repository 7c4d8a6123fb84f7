#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fsqc/mesh.hpp"

namespace fsqc {

/// Per-face complex Beltrami coefficient, |mu| < 1 on every face.
struct BeltramiField {
    std::vector<Complex> mu;

    int faceCount() const { return static_cast<int>(mu.size()); }
    double supNorm() const;
};

/// Per-face quasiconformal dilation, K >= 1 on every face.
struct DilationField {
    std::vector<double> k;

    int faceCount() const { return static_cast<int>(k.size()); }
};

// z = (p_x + i p_y) / (1 - p_z). Errors within 1e-12 of the north pole.
Complex stereographic_north(const Vec3& p);

// (2 Re z, 2 Im z, |z|^2 - 1) / (|z|^2 + 1); unit norm by construction.
Vec3 inverse_stereographic(const Complex& z);

// Minimal-angle rotation R with R * (c/|c|) = (0,0,1). The antipodal case
// rotates half a turn about the x-axis.
Eigen::Matrix3d rotation_to_north(const Vec3& c);

// Per-face mu of the piecewise-linear map source -> target via the discrete
// derivative operators of the source faces.
BeltramiField beltrami_coefficient(const PlanarEmbedding& source, const PlanarEmbedding& target);

// Same derivative operators, with each target face isometrically embedded
// into the plane. The result is frame-independent on the target side.
BeltramiField beltrami_coefficient_vs_mesh(const PlanarEmbedding& source,
                                           const TriangleMesh& target,
                                           int skipFace = -1);

// K = (1+|mu|)/(1-|mu|) per face; errors if any |mu| >= 1.
DilationField dilation_from_mu(const BeltramiField& field);

// mu = (K-1)/(K+1), real and nonnegative; |mu| capped at 1 - 1e-3.
BeltramiField mu_from_dilation(const DilationField& field);

// Largest K in the field; errors on an empty field.
double max_dilation(const DilationField& field);

// Per-face dilation of the map source -> target between meshes in R^3,
// through isometric embeddings of corresponding faces.
DilationField dilation_r3(const TriangleMesh& source, const TriangleMesh& target);

// CSV: "face_index,re,im" / "face_index,k", header row mandatory.
void save_beltrami_csv(const std::string& path, const BeltramiField& field);
BeltramiField load_beltrami_csv(const std::string& path);
void save_dilation_csv(const std::string& path, const DilationField& field);
DilationField load_dilation_csv(const std::string& path);

}  // namespace fsqc
