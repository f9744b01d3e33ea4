#pragma once

#include "naghdi/calculus.hpp"

namespace naghdi {

// System unknown: two tangent fields (in-surface displacement, scaled rotation
// potential) and two scalar fields (normal displacement, scaled normal
// rotation). Clamped states vanish on the boundary.
struct ShellState {
  TangentField W1, W2;
  ScalarField w1, w2;

  static ShellState zero(int n_vertices) {
    ShellState s;
    s.W1.assign(n_vertices, Vec2{});
    s.W2.assign(n_vertices, Vec2{});
    s.w1.assign(n_vertices, 0.0);
    s.w2.assign(n_vertices, 0.0);
    return s;
  }
  int n_vertices() const { return static_cast<int>(w1.size()); }
};

// Strain tensors of a state: metric change, curvature change, normal rotation.
struct StrainSet {
  FaceMat Upsilon;
  FaceMat chi0;
  FaceVec phi0;
};

// Upsilon = sym(DW1) + w1 Pi
FaceMat strain_upsilon(const Surface& s, const ShellState& xi);

// chi0 = sym(DW2) - i(W1) dPi + w1 c + w2 Pi
FaceMat strain_chi0(const Surface& s, const ShellState& xi);

// phi0 = 1/2 Dw1 - i(W1) Pi + 1/2 W2
FaceVec strain_phi0(const Surface& s, const ShellState& xi);

StrainSet strains(const Surface& s, const ShellState& xi);

// Alternative curvature-change route (consistency check): the symmetrized
// differential of V = W2 - i(W1) Pi plus sym(Pi . DW1) + w2 Pi + w1 c, with Pi
// averaged to vertices.
FaceMat strain_chi0_via_rotation(const Surface& s, const ShellState& xi);

// Componentwise directional derivative along V, averaged back to vertices:
// m(xi) = (D_V W1, D_V W2, V(w1), V(w2)).
ShellState multiplier_m(const Surface& s, const ShellState& xi, const TangentField& V);

}  // namespace naghdi
