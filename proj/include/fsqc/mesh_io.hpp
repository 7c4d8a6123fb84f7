#pragma once

#include <string>

#include "fsqc/mesh.hpp"

namespace fsqc {

enum class MeshFormat { OFF, OBJ, PLY };

// Format from a file extension (".off", ".obj", ".ply", case-insensitive).
MeshFormat format_from_path(const std::string& path);

// ASCII readers. Faces must be triangles; indices are validated against the
// vertex count. OBJ faces are 1-based on disk, 0-based in memory.
TriangleMesh load_mesh(const std::string& path, MeshFormat format);
TriangleMesh load_mesh(const std::string& path);  // format from extension

void save_mesh(const std::string& path, const TriangleMesh& mesh, MeshFormat format);
void save_mesh(const std::string& path, const TriangleMesh& mesh);

// Newline-delimited face-index files.
FaceSelection load_face_selection(const std::string& path);
void save_face_selection(const std::string& path, const FaceSelection& sel);

}  // namespace fsqc
