#include "naghdi/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace naghdi {

std::vector<double> graph_distance(const SurfaceMesh& mesh, const std::vector<int>& sources) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(mesh.n_vertices(), inf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  for (int v : sources) {
    if (v < 0 || v >= mesh.n_vertices()) throw std::invalid_argument("source vertex out of range");
    dist[v] = 0.0;
    pq.push({0.0, v});
  }
  // Adjacency straight from the edge list.
  std::vector<std::vector<std::pair<int, double>>> adj(mesh.n_vertices());
  for (const auto& e : mesh.edges) {
    double len = norm(mesh.vertices[e.v1] - mesh.vertices[e.v0]);
    adj[e.v0].push_back({e.v1, len});
    adj[e.v1].push_back({e.v0, len});
  }
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (auto [u, len] : adj[v])
      if (d + len < dist[u]) {
        dist[u] = d + len;
        pq.push({d + len, u});
      }
  }
  return dist;
}

namespace {
EntitySet set_from_distance(const Surface& s, const std::vector<double>& dist, double radius,
                            int always_vertex) {
  EntitySet out;
  for (int v = 0; v < s.n_vertices(); ++v)
    if (dist[v] < radius || v == always_vertex) out.vertices.push_back(v);
  for (int f = 0; f < s.n_faces(); ++f) {
    const auto& t = s.mesh.triangles[f];
    double avg = (dist[t[0]] + dist[t[1]] + dist[t[2]]) / 3.0;
    if (avg < radius) out.faces.push_back(f);
  }
  return out;
}
}  // namespace

EntitySet geodesic_ball(const Surface& s, int center, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("geodesic_ball: radius must be positive");
  auto dist = graph_distance(s.mesh, {center});
  return set_from_distance(s, dist, radius, center);
}

EntitySet eps_neighborhood(const Surface& s, const std::vector<int>& source_vertices,
                           double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("eps_neighborhood: eps must be positive");
  if (source_vertices.empty()) return {};
  auto dist = graph_distance(s.mesh, source_vertices);
  return set_from_distance(s, dist, eps, -1);
}

double face_set_area(const Surface& s, const std::vector<int>& faces) {
  double a = 0.0;
  for (int f : faces) a += s.face_area[f];
  return a;
}

}  // namespace naghdi
