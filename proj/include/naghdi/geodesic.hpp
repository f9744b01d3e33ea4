#pragma once

#include "naghdi/surface.hpp"

namespace naghdi {

// Multi-source shortest-path distance on the edge graph (Dijkstra).
std::vector<double> graph_distance(const SurfaceMesh& mesh, const std::vector<int>& sources);

struct EntitySet {
  std::vector<int> vertices;  // sorted
  std::vector<int> faces;     // sorted
};

// Vertices within graph distance < radius of the center (always contains the
// center); faces whose average corner distance is below radius.
EntitySet geodesic_ball(const Surface& s, int center, double radius);

// N_eps(S): vertices within graph distance < eps of the source set (the set
// itself included), plus the induced face set.
EntitySet eps_neighborhood(const Surface& s, const std::vector<int>& source_vertices, double eps);

double face_set_area(const Surface& s, const std::vector<int>& faces);

}  // namespace naghdi
