#include "fsqc/qc.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "fsqc/errors.hpp"

namespace fsqc {

namespace {

struct FaceDerivative {
    // Row operators of Eq. for D_x, D_y over the three vertex values.
    std::array<double, 3> dx;
    std::array<double, 3> dy;
};

// D_x = (b3-b2, b1-b3, b2-b1) / (2A), D_y = -(a3-a2, a1-a3, a2-a1) / (2A)
// with (a_i, b_i) the source corner coordinates and A the signed area.
FaceDerivative faceDerivative(const Complex& z1, const Complex& z2, const Complex& z3) {
    double a1 = z1.real(), b1 = z1.imag();
    double a2 = z2.real(), b2 = z2.imag();
    double a3 = z3.real(), b3 = z3.imag();
    double twoA = (a2 - a1) * (b3 - b1) - (a3 - a1) * (b2 - b1);
    if (twoA == 0.0) throw MeshError("degenerate source face in Beltrami computation");
    FaceDerivative d;
    d.dx = {(b3 - b2) / twoA, (b1 - b3) / twoA, (b2 - b1) / twoA};
    d.dy = {-(a3 - a2) / twoA, -(a1 - a3) / twoA, -(a2 - a1) / twoA};
    return d;
}

Complex muFromDerivative(const FaceDerivative& d, const Complex& w1, const Complex& w2,
                         const Complex& w3) {
    Complex dxw = d.dx[0] * w1 + d.dx[1] * w2 + d.dx[2] * w3;
    Complex dyw = d.dy[0] * w1 + d.dy[1] * w2 + d.dy[2] * w3;
    // the 1/2 factors of the Wirtinger derivatives cancel in the quotient
    Complex num = dxw + Complex(0, 1) * dyw;
    Complex den = dxw - Complex(0, 1) * dyw;
    double scale = std::abs(dxw) + std::abs(dyw);
    if (std::abs(den) < 1e-14 * std::max(1.0, scale))
        throw MeshError("degenerate conformal derivative");
    return num / den;
}

void checkSameConnectivity(size_t nf1, size_t nf2, size_t nv1, size_t nv2) {
    if (nf1 != nf2 || nv1 != nv2)
        throw MeshError("connectivity mismatch between source and target");
}

}  // namespace

double BeltramiField::supNorm() const {
    double m = 0.0;
    for (const Complex& c : mu) m = std::max(m, std::abs(c));
    return m;
}

Complex stereographic_north(const Vec3& p) {
    if (std::abs(p.norm() - 1.0) > 1e-9)
        throw MeshError("stereographic_north: point is not on the unit sphere");
    // 1 - p_z = (p_x^2 + p_y^2) / (1 + p_z) on the unit sphere; the right-hand
    // side stays fully accurate near the pole where the subtraction cancels
    double denom = (p.z() > 0.0) ? (p.x() * p.x() + p.y() * p.y()) / (1.0 + p.z())
                                 : 1.0 - p.z();
    if (denom < 1e-12) throw MeshError("stereographic_north: north pole maps to infinity");
    return Complex(p.x() / denom, p.y() / denom);
}

Vec3 inverse_stereographic(const Complex& z) {
    double n2 = std::norm(z);
    double d = n2 + 1.0;
    return Vec3(2.0 * z.real() / d, 2.0 * z.imag() / d, (n2 - 1.0) / d);
}

Eigen::Matrix3d rotation_to_north(const Vec3& c) {
    double n = c.norm();
    if (n == 0.0) throw MeshError("rotation_to_north: zero direction");
    Vec3 u = c / n;
    Vec3 axis = u.cross(Vec3(0, 0, 1));
    double s = axis.norm();
    double cz = u.z();
    if (s < 1e-12) {
        if (cz > 0) return Eigen::Matrix3d::Identity();
        Eigen::Matrix3d r;  // half turn about the x-axis
        r << 1, 0, 0, 0, -1, 0, 0, 0, -1;
        return r;
    }
    axis /= s;
    double angle = std::atan2(s, cz);
    Eigen::Matrix3d k;
    k << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
    return Eigen::Matrix3d::Identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * k * k;
}

BeltramiField beltrami_coefficient(const PlanarEmbedding& source, const PlanarEmbedding& target) {
    checkSameConnectivity(source.faces.size(), target.faces.size(), source.z.size(),
                          target.z.size());
    BeltramiField field;
    field.mu.resize(source.faces.size());
    for (size_t f = 0; f < source.faces.size(); ++f) {
        const auto& fc = source.faces[f];
        auto d = faceDerivative(source.z[fc[0]], source.z[fc[1]], source.z[fc[2]]);
        field.mu[f] = muFromDerivative(d, target.z[fc[0]], target.z[fc[1]], target.z[fc[2]]);
    }
    return field;
}

BeltramiField beltrami_coefficient_vs_mesh(const PlanarEmbedding& source,
                                           const TriangleMesh& target, int skipFace) {
    checkSameConnectivity(source.faces.size(), target.faces.size(), source.z.size(),
                          target.vertices.size());
    BeltramiField field;
    field.mu.assign(source.faces.size(), Complex(0, 0));
    for (size_t f = 0; f < source.faces.size(); ++f) {
        if (static_cast<int>(f) == skipFace) continue;
        const auto& fc = source.faces[f];
        auto d = faceDerivative(source.z[fc[0]], source.z[fc[1]], source.z[fc[2]]);
        auto w = isometric_face_embedding(target.vertices[fc[0]], target.vertices[fc[1]],
                                          target.vertices[fc[2]]);
        field.mu[f] = muFromDerivative(d, w[0], w[1], w[2]);
    }
    return field;
}

DilationField dilation_from_mu(const BeltramiField& field) {
    DilationField out;
    out.k.resize(field.mu.size());
    for (size_t f = 0; f < field.mu.size(); ++f) {
        double m = std::abs(field.mu[f]);
        if (m >= 1.0)
            throw MeshError("dilation undefined: |mu| >= 1 on face " + std::to_string(f));
        out.k[f] = (1.0 + m) / (1.0 - m);
    }
    return out;
}

BeltramiField mu_from_dilation(const DilationField& field) {
    constexpr double cap = 1.0 - 1e-3;
    BeltramiField out;
    out.mu.resize(field.k.size());
    for (size_t f = 0; f < field.k.size(); ++f) {
        double k = field.k[f];
        if (!(k >= 1.0) || !std::isfinite(k))
            throw MeshError("dilation field: K must be >= 1 (face " + std::to_string(f) + ")");
        double m = (k - 1.0) / (k + 1.0);
        out.mu[f] = Complex(std::min(m, cap), 0.0);
    }
    return out;
}

double max_dilation(const DilationField& field) {
    if (field.k.empty()) throw MeshError("max_dilation: empty field");
    double m = field.k[0];
    for (double v : field.k) m = std::max(m, v);
    return m;
}

DilationField dilation_r3(const TriangleMesh& source, const TriangleMesh& target) {
    checkSameConnectivity(source.faces.size(), target.faces.size(), source.vertices.size(),
                          target.vertices.size());
    DilationField out;
    out.k.resize(source.faces.size());
    for (size_t f = 0; f < source.faces.size(); ++f) {
        const auto& fc = source.faces[f];
        auto zs = isometric_face_embedding(source.vertices[fc[0]], source.vertices[fc[1]],
                                           source.vertices[fc[2]]);
        auto ws = isometric_face_embedding(target.vertices[fc[0]], target.vertices[fc[1]],
                                           target.vertices[fc[2]]);
        auto d = faceDerivative(zs[0], zs[1], zs[2]);
        double m = std::abs(muFromDerivative(d, ws[0], ws[1], ws[2]));
        // both embeddings are positively oriented, so |mu| < 1 unless the
        // correspondence is reflected; fold that case back
        if (m > 1.0) m = 1.0 / m;
        out.k[f] = (1.0 + m) / (1.0 - m);
    }
    return out;
}

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};

std::unique_ptr<std::FILE, FileCloser> openOut(const std::string& path) {
    std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.c_str(), "w"));
    if (!f) throw MeshError("cannot write file: " + path);
    return f;
}

}  // namespace

void save_beltrami_csv(const std::string& path, const BeltramiField& field) {
    auto out = openOut(path);
    std::fputs("face_index,re,im\n", out.get());
    for (size_t f = 0; f < field.mu.size(); ++f)
        std::fprintf(out.get(), "%zu,%.17g,%.17g\n", f, field.mu[f].real(), field.mu[f].imag());
}

BeltramiField load_beltrami_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw MeshError(path + ": empty CSV");
    BeltramiField field;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        long idx;
        double re, im;
        char comma;
        if (!(ls >> idx >> comma >> re >> comma >> im))
            throw MeshError(path + ": bad CSV row: " + line);
        if (idx != static_cast<long>(field.mu.size()))
            throw MeshError(path + ": face indices must be consecutive from 0");
        field.mu.emplace_back(re, im);
    }
    return field;
}

void save_dilation_csv(const std::string& path, const DilationField& field) {
    auto out = openOut(path);
    std::fputs("face_index,k\n", out.get());
    for (size_t f = 0; f < field.k.size(); ++f)
        std::fprintf(out.get(), "%zu,%.17g\n", f, field.k[f]);
}

DilationField load_dilation_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw MeshError(path + ": empty CSV");
    DilationField field;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        long idx;
        double k;
        char comma;
        if (!(ls >> idx >> comma >> k)) throw MeshError(path + ": bad CSV row: " + line);
        if (idx != static_cast<long>(field.k.size()))
            throw MeshError(path + ": face indices must be consecutive from 0");
        field.k.push_back(k);
    }
    return field;
}

}  // namespace fsqc
