#include "naghdi/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace naghdi {

double SurfaceMesh::mean_edge_length() const {
  if (edges.empty()) throw std::runtime_error("mesh not finalized");
  double s = 0.0;
  for (const auto& e : edges) s += norm(vertices[e.v1] - vertices[e.v0]);
  return s / static_cast<double>(edges.size());
}

void SurfaceMesh::finalize() {
  const int nv = n_vertices();
  const int nf = n_faces();
  if (nv < 3 || nf < 1) throw std::runtime_error("mesh has too few entities");

  for (int f = 0; f < nf; ++f)
    for (int k = 0; k < 3; ++k) {
      int v = triangles[f][k];
      if (v < 0 || v >= nv)
        throw std::runtime_error("triangle " + std::to_string(f) + " has invalid vertex index");
    }

  // Positive area relative to the mesh scale.
  double mean_len2 = 0.0;
  int nsamples = 0;
  for (int f = 0; f < nf; ++f)
    for (int k = 0; k < 3; ++k) {
      Vec3 d = vertices[triangles[f][k]] - vertices[triangles[f][(k + 1) % 3]];
      mean_len2 += dot(d, d);
      ++nsamples;
    }
  mean_len2 /= nsamples;
  for (int f = 0; f < nf; ++f) {
    Vec3 a = vertices[triangles[f][1]] - vertices[triangles[f][0]];
    Vec3 b = vertices[triangles[f][2]] - vertices[triangles[f][0]];
    double area = 0.5 * norm(cross(a, b));
    if (!(area > 1e-14 * mean_len2))
      throw std::runtime_error("degenerate triangle " + std::to_string(f));
  }

  // Edge table. Key is the sorted pair; orientation checked via the directed
  // occurrence count.
  edges.clear();
  std::map<std::pair<int, int>, int> edge_index;
  std::map<std::pair<int, int>, int> directed_count;
  for (int f = 0; f < nf; ++f) {
    for (int k = 0; k < 3; ++k) {
      int a = triangles[f][k], b = triangles[f][(k + 1) % 3];
      ++directed_count[{a, b}];
      auto key = std::minmax(a, b);
      auto it = edge_index.find(key);
      if (it == edge_index.end()) {
        MeshEdge e;
        e.v0 = key.first;
        e.v1 = key.second;
        e.f0 = f;
        edge_index.emplace(key, static_cast<int>(edges.size()));
        edges.push_back(e);
      } else {
        MeshEdge& e = edges[it->second];
        if (e.f1 != -1)
          throw std::runtime_error("non-manifold edge (" + std::to_string(a) + "," +
                                   std::to_string(b) + ")");
        e.f1 = f;
      }
    }
  }
  for (const auto& [key, cnt] : directed_count) {
    if (cnt > 1)
      throw std::runtime_error("inconsistent orientation at edge (" + std::to_string(key.first) +
                               "," + std::to_string(key.second) + ")");
  }

  // Boundary vertices = endpoints of single-face edges.
  is_boundary.assign(nv, 0);
  for (const auto& e : edges)
    if (e.f1 == -1) {
      is_boundary[e.v0] = 1;
      is_boundary[e.v1] = 1;
    }
  boundary_vertices.clear();
  for (int v = 0; v < nv; ++v)
    if (is_boundary[v]) boundary_vertices.push_back(v);

  // Boundary loops, following directed boundary half-edges. The boundary of an
  // oriented face is traversed opposite to the face orientation.
  std::map<int, int> boundary_next;  // directed edge start -> end
  for (int f = 0; f < nf; ++f)
    for (int k = 0; k < 3; ++k) {
      int a = triangles[f][k], b = triangles[f][(k + 1) % 3];
      auto key = std::minmax(a, b);
      if (edges[edge_index[key]].f1 == -1) {
        if (boundary_next.count(b))
          throw std::runtime_error("non-manifold boundary at vertex " + std::to_string(b));
        boundary_next[b] = a;
      }
    }
  boundary_loops.clear();
  std::set<int> visited;
  for (const auto& [start, next] : boundary_next) {
    if (visited.count(start)) continue;
    std::vector<int> loop;
    int cur = start;
    do {
      loop.push_back(cur);
      visited.insert(cur);
      auto it = boundary_next.find(cur);
      if (it == boundary_next.end())
        throw std::runtime_error("open boundary chain at vertex " + std::to_string(cur));
      cur = it->second;
    } while (cur != start);
    boundary_loops.push_back(std::move(loop));
  }

  vertex_faces.assign(nv, {});
  for (int f = 0; f < nf; ++f)
    for (int k = 0; k < 3; ++k) vertex_faces[triangles[f][k]].push_back(f);

  face_neighbors.assign(nf, {-1, -1, -1});
  for (int f = 0; f < nf; ++f)
    for (int k = 0; k < 3; ++k) {
      int a = triangles[f][(k + 1) % 3], b = triangles[f][(k + 2) % 3];
      const MeshEdge& e = edges[edge_index[std::minmax(a, b)]];
      face_neighbors[f][k] = (e.f0 == f) ? e.f1 : e.f0;
    }
}

SurfaceMesh load_off(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mesh file: " + path);
  std::string tok;
  in >> tok;
  if (tok != "OFF") throw std::runtime_error("not an OFF file: " + path);
  int nv = 0, nf = 0, ne = 0;
  in >> nv >> nf >> ne;
  if (!in || nv <= 0 || nf <= 0) throw std::runtime_error("bad OFF header: " + path);
  SurfaceMesh mesh;
  mesh.vertices.resize(nv);
  for (int v = 0; v < nv; ++v) in >> mesh.vertices[v].x >> mesh.vertices[v].y >> mesh.vertices[v].z;
  mesh.triangles.resize(nf);
  for (int f = 0; f < nf; ++f) {
    int deg = 0;
    in >> deg;
    if (deg != 3) throw std::runtime_error("OFF face " + std::to_string(f) + " is not a triangle");
    in >> mesh.triangles[f][0] >> mesh.triangles[f][1] >> mesh.triangles[f][2];
  }
  if (!in) throw std::runtime_error("truncated OFF file: " + path);
  mesh.finalize();
  return mesh;
}

void save_off(const SurfaceMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mesh file: " + path);
  out << "OFF\n" << mesh.n_vertices() << " " << mesh.n_faces() << " 0\n";
  char buf[128];
  for (const auto& p : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", p.x, p.y, p.z);
    out << buf;
  }
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
}

}  // namespace naghdi
