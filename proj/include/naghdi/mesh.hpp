#pragma once

#include <array>
#include <string>
#include <vector>

#include "naghdi/core.hpp"

namespace naghdi {

struct MeshEdge {
  int v0 = -1, v1 = -1;  // v0 < v1
  int f0 = -1, f1 = -1;  // incident faces, f1 == -1 on the boundary
};

// Embedded triangulated 2-manifold with boundary. Triangles are oriented
// consistently; the boundary is the set of edges with a single incident face.
struct SurfaceMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;

  // Derived connectivity, filled by finalize().
  std::vector<MeshEdge> edges;
  std::vector<int> boundary_vertices;          // sorted
  std::vector<std::vector<int>> boundary_loops;
  std::vector<std::vector<int>> vertex_faces;  // incident faces per vertex
  std::vector<std::array<int, 3>> face_neighbors;  // across edge opposite to corner k
  std::vector<char> is_boundary;               // per vertex

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_faces() const { return static_cast<int>(triangles.size()); }

  // Builds edges/adjacency/boundary data and checks the manifold, orientation
  // and positive-area invariants. Throws std::runtime_error with the offending
  // entity index on failure.
  void finalize();

  double mean_edge_length() const;
};

SurfaceMesh load_off(const std::string& path);
void save_off(const SurfaceMesh& mesh, const std::string& path);

}  // namespace naghdi
