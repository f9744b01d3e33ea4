#pragma once

#include "naghdi/mesh.hpp"

namespace naghdi {

// Unit square [0,1]^2 in the z=0 plane, (res+1)^2 vertices, 2*res^2 triangles.
// Quad diagonals alternate in a checkerboard so the edge graph carries both
// diagonal directions.
SurfaceMesh make_plate(int res);

// Planar annulus, inner radius r_in, outer radius 1, two boundary loops.
SurfaceMesh make_annulus(int res, double r_in = 0.4);

// Unit-radius cylinder patch, theta in [-pi, pi], z in [-1, 1], cut open along
// the theta = +-pi generator (duplicated vertices, single boundary loop).
SurfaceMesh make_cylinder_patch(int res);

// Cap of the unit sphere around the north pole, polar angle up to phi_max.
SurfaceMesh make_spherical_cap(int res, double phi_max = 1.0471975511965976);

// Closed unit sphere by octahedron subdivision (levels >= 1). Test geometry;
// has no boundary.
SurfaceMesh make_sphere(int levels);

SurfaceMesh make_mesh(const std::string& kind, int res);

}  // namespace naghdi
