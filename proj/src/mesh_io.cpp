#include "fsqc/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "fsqc/errors.hpp"

namespace fsqc {

namespace {

std::string lowerExt(const std::string& path) {
    auto dot = path.find_last_of('.');
    if (dot == std::string::npos) return "";
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

void checkFaceIndices(const TriangleMesh& mesh, const std::string& path) {
    for (const auto& f : mesh.faces)
        for (int v : f)
            if (v < 0 || v >= mesh.vertexCount())
                throw MeshError(path + ": face index " + std::to_string(v) + " out of range");
}

std::ifstream openIn(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MeshError("cannot open file: " + path);
    return in;
}

// Next non-empty, non-comment line of an OFF file.
bool nextOffLine(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        auto pos = line.find('#');
        if (pos != std::string::npos) line.erase(pos);
        if (line.find_first_not_of(" \t\r\n") != std::string::npos) return true;
    }
    return false;
}

TriangleMesh loadOff(const std::string& path) {
    std::ifstream in = openIn(path);
    std::string line;
    if (!nextOffLine(in, line)) throw MeshError(path + ": empty OFF file");
    std::istringstream header(line);
    std::string magic;
    header >> magic;
    long nv = -1, nf = -1, ne = 0;
    if (magic == "OFF") {
        // counts may share the header line or follow it
        if (!(header >> nv >> nf >> ne)) {
            if (!nextOffLine(in, line)) throw MeshError(path + ": missing OFF counts");
            std::istringstream counts(line);
            if (!(counts >> nv >> nf >> ne)) throw MeshError(path + ": bad OFF counts");
        }
    } else {
        std::istringstream counts(line);
        if (!(counts >> nv >> nf >> ne)) throw MeshError(path + ": not an OFF file");
    }
    if (nv < 0 || nf < 0) throw MeshError(path + ": bad OFF counts");

    TriangleMesh mesh;
    mesh.vertices.reserve(static_cast<size_t>(nv));
    for (long i = 0; i < nv; ++i) {
        if (!nextOffLine(in, line)) throw MeshError(path + ": truncated vertex list");
        std::istringstream ls(line);
        double x, y, z;
        if (!(ls >> x >> y >> z)) throw MeshError(path + ": bad vertex line: " + line);
        mesh.vertices.emplace_back(x, y, z);
    }
    mesh.faces.reserve(static_cast<size_t>(nf));
    for (long i = 0; i < nf; ++i) {
        if (!nextOffLine(in, line)) throw MeshError(path + ": truncated face list");
        std::istringstream ls(line);
        int cnt;
        if (!(ls >> cnt)) throw MeshError(path + ": bad face line: " + line);
        if (cnt != 3) throw MeshError(path + ": non-triangular face (" + std::to_string(cnt) + " vertices)");
        std::array<int, 3> f{};
        if (!(ls >> f[0] >> f[1] >> f[2])) throw MeshError(path + ": bad face line: " + line);
        mesh.faces.push_back(f);
    }
    checkFaceIndices(mesh, path);
    return mesh;
}

TriangleMesh loadObj(const std::string& path) {
    std::ifstream in = openIn(path);
    TriangleMesh mesh;
    std::string line;
    long lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            double x, y, z;
            if (!(ls >> x >> y >> z))
                throw MeshError(path + ":" + std::to_string(lineNo) + ": bad vertex line");
            mesh.vertices.emplace_back(x, y, z);
        } else if (tag == "f") {
            std::vector<long> idx;
            std::string tok;
            while (ls >> tok) {
                // "f v", "f v/vt", "f v/vt/vn", "f v//vn" all start with the vertex index
                size_t slash = tok.find('/');
                std::string head = (slash == std::string::npos) ? tok : tok.substr(0, slash);
                try {
                    idx.push_back(std::stol(head));
                } catch (...) {
                    throw MeshError(path + ":" + std::to_string(lineNo) + ": bad face token '" + tok + "'");
                }
            }
            if (idx.size() != 3)
                throw MeshError(path + ":" + std::to_string(lineNo) + ": non-triangular face (" +
                                std::to_string(idx.size()) + " vertices)");
            std::array<int, 3> f{};
            for (int k = 0; k < 3; ++k) {
                long v = idx[static_cast<size_t>(k)];
                if (v < 0) v = static_cast<long>(mesh.vertices.size()) + v + 1;  // negative = relative
                f[k] = static_cast<int>(v - 1);
            }
            mesh.faces.push_back(f);
        }
        // everything else (vn, vt, o, g, s, mtllib, usemtl, #) is ignored
    }
    checkFaceIndices(mesh, path);
    return mesh;
}

TriangleMesh loadPly(const std::string& path) {
    std::ifstream in = openIn(path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("ply", 0) != 0)
        throw MeshError(path + ": not a PLY file");
    long nv = -1, nf = -1;
    bool ascii = false;
    std::string element;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "format") {
            std::string fmt;
            ls >> fmt;
            ascii = (fmt == "ascii");
        } else if (tag == "element") {
            long cnt;
            ls >> element >> cnt;
            if (element == "vertex") nv = cnt;
            if (element == "face") nf = cnt;
        } else if (tag == "end_header") {
            break;
        }
    }
    if (!ascii) throw MeshError(path + ": only ASCII PLY is supported");
    if (nv < 0 || nf < 0) throw MeshError(path + ": missing vertex/face elements");

    TriangleMesh mesh;
    mesh.vertices.reserve(static_cast<size_t>(nv));
    for (long i = 0; i < nv; ++i) {
        if (!std::getline(in, line)) throw MeshError(path + ": truncated vertex list");
        std::istringstream ls(line);
        double x, y, z;
        if (!(ls >> x >> y >> z)) throw MeshError(path + ": bad vertex line: " + line);
        mesh.vertices.emplace_back(x, y, z);
    }
    mesh.faces.reserve(static_cast<size_t>(nf));
    for (long i = 0; i < nf; ++i) {
        if (!std::getline(in, line)) throw MeshError(path + ": truncated face list");
        std::istringstream ls(line);
        int cnt;
        if (!(ls >> cnt)) throw MeshError(path + ": bad face line: " + line);
        if (cnt != 3) throw MeshError(path + ": non-triangular face (" + std::to_string(cnt) + " vertices)");
        std::array<int, 3> f{};
        if (!(ls >> f[0] >> f[1] >> f[2])) throw MeshError(path + ": bad face line: " + line);
        mesh.faces.push_back(f);
    }
    checkFaceIndices(mesh, path);
    return mesh;
}

void writeCoord(std::FILE* out, double v) { std::fprintf(out, "%.17g", v); }

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr openOut(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "w"));
    if (!f) throw MeshError("cannot write file: " + path);
    return f;
}

}  // namespace

MeshFormat format_from_path(const std::string& path) {
    std::string ext = lowerExt(path);
    if (ext == "off") return MeshFormat::OFF;
    if (ext == "obj") return MeshFormat::OBJ;
    if (ext == "ply") return MeshFormat::PLY;
    throw MeshError("unrecognized mesh extension: " + path);
}

TriangleMesh load_mesh(const std::string& path, MeshFormat format) {
    switch (format) {
        case MeshFormat::OFF: return loadOff(path);
        case MeshFormat::OBJ: return loadObj(path);
        case MeshFormat::PLY: return loadPly(path);
    }
    throw MeshError("unknown mesh format");
}

TriangleMesh load_mesh(const std::string& path) { return load_mesh(path, format_from_path(path)); }

void save_mesh(const std::string& path, const TriangleMesh& mesh, MeshFormat format) {
    FilePtr out = openOut(path);
    std::FILE* f = out.get();
    switch (format) {
        case MeshFormat::OFF: {
            std::fprintf(f, "OFF\n%d %d 0\n", mesh.vertexCount(), mesh.faceCount());
            for (const Vec3& p : mesh.vertices) {
                writeCoord(f, p.x()); std::fputc(' ', f);
                writeCoord(f, p.y()); std::fputc(' ', f);
                writeCoord(f, p.z()); std::fputc('\n', f);
            }
            for (const auto& face : mesh.faces)
                std::fprintf(f, "3 %d %d %d\n", face[0], face[1], face[2]);
            break;
        }
        case MeshFormat::OBJ: {
            for (const Vec3& p : mesh.vertices) {
                std::fputs("v ", f);
                writeCoord(f, p.x()); std::fputc(' ', f);
                writeCoord(f, p.y()); std::fputc(' ', f);
                writeCoord(f, p.z()); std::fputc('\n', f);
            }
            for (const auto& face : mesh.faces)
                std::fprintf(f, "f %d %d %d\n", face[0] + 1, face[1] + 1, face[2] + 1);
            break;
        }
        case MeshFormat::PLY: {
            std::fprintf(f,
                         "ply\nformat ascii 1.0\nelement vertex %d\n"
                         "property double x\nproperty double y\nproperty double z\n"
                         "element face %d\nproperty list uchar int vertex_indices\nend_header\n",
                         mesh.vertexCount(), mesh.faceCount());
            for (const Vec3& p : mesh.vertices) {
                writeCoord(f, p.x()); std::fputc(' ', f);
                writeCoord(f, p.y()); std::fputc(' ', f);
                writeCoord(f, p.z()); std::fputc('\n', f);
            }
            for (const auto& face : mesh.faces)
                std::fprintf(f, "3 %d %d %d\n", face[0], face[1], face[2]);
            break;
        }
    }
}

void save_mesh(const std::string& path, const TriangleMesh& mesh) {
    save_mesh(path, mesh, format_from_path(path));
}

FaceSelection load_face_selection(const std::string& path) {
    std::ifstream in = openIn(path);
    std::vector<int> idx;
    std::string line;
    while (std::getline(in, line)) {
        auto pos = line.find('#');
        if (pos != std::string::npos) line.erase(pos);
        std::istringstream ls(line);
        long v;
        while (ls >> v) idx.push_back(static_cast<int>(v));
    }
    return FaceSelection(std::move(idx));
}

void save_face_selection(const std::string& path, const FaceSelection& sel) {
    FilePtr out = openOut(path);
    for (int f : sel.indices) std::fprintf(out.get(), "%d\n", f);
}

}  // namespace fsqc
