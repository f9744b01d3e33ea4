#pragma once

#include <optional>

#include "naghdi/assemble.hpp"
#include "naghdi/geodesic.hpp"

namespace naghdi {

// DV = v g + l E decomposition. The residual is the largest entry of the
// symmetric traceless remainder, i.e. the pointwise failure of the isotropy
// condition DV(X,X) = v |X|^2.
struct DvDecomposition {
  FaceScalar v, l;
  double residual = 0.0;
  int worst_face = -1;
};

DvDecomposition decompose_dv(const FaceMat& DV);
DvDecomposition decompose_dv(const Surface& s, const TangentField& V);

struct EscapeCertificate {
  double v_min = 0.0;
  double l_max = 0.0;
  double lambda0 = 0.0;
  double beta = 0.0;
  double margin = 0.0;       // 2 min v - lambda0 (1+2beta) max|l|
  double margin_half = 0.0;  // same with max|l|/2 (the region definition)
  double residual = 0.0;
  double residual_tol = 0.0;
  bool is_candidate = false;  // residual below tolerance
  bool pass = false;          // candidate and the stricter margin positive
  int worst_face = -1;
};

// Residual tolerance 0.1 * min(1, field scale) at the baseline edge length
// 0.1, tightening linearly with h.
double escape_residual_tolerance(const Surface& s, const FaceScalar& v, const FaceScalar& l);

// Certifies V as an escape field; faces == nullptr checks the whole surface,
// otherwise only the given face subset.
EscapeCertificate check_escape(const Surface& s, const TangentField& V, double lambda0,
                               double beta, const std::vector<int>* faces = nullptr);

struct EscapeField {
  TangentField V;
  FaceScalar v, l;
  double margin = 0.0;
  EscapeCertificate cert;
};

// Gradient of half the squared geodesic distance from a center vertex,
// averaged back to vertices. The distance comes from the unfolding-refined
// eikonal solve, not the raw edge graph.
TangentField ball_escape_field(const Surface& s, int center);

struct EscapeSubregion {
  int center = -1;
  double radius = 0.0;
  EntitySet set;
  EscapeField field;
  std::vector<int> outflow_vertices;  // vertices of the Gamma_i0 edges
};

struct EscapeRegion {
  std::vector<EscapeSubregion> subregions;
  double eps = 0.0;
  EntitySet G;
  double measure = 0.0;
  double domain_area = 0.0;
};

// Sub-regions are geodesic balls carrying certified radial fields; G is the
// eps-neighborhood of the outflow boundaries plus the uncovered remainder.
// Overlapping balls are shrunk (factor 0.9, up to 20 times), then rejected.
EscapeRegion build_escape_region(const Surface& s, const MaterialParams& p, double lambda0,
                                 const std::vector<std::pair<int, double>>& balls, double eps);

// a = a0 on G, smoothstep taper to zero over the given width outside.
ScalarField damping_from_region(const Surface& s, const EscapeRegion& region, double a0,
                                double taper);
ScalarField damping_from_set(const Surface& s, const EntitySet& G, double a0, double taper);

// Outflow part of the boundary of a face set: edges with exactly one incident
// face inside whose inside-face field satisfies <V, nu> > 0, nu the outward
// in-plane edge normal.
std::vector<int> outflow_boundary_vertices(const Surface& s, const std::vector<int>& faces,
                                           const TangentField& V);

}  // namespace naghdi
