#pragma once

#include <array>
#include <vector>

#include "naghdi/fields.hpp"
#include "naghdi/mesh.hpp"

namespace naghdi {

// Orthonormal frame; N = e1 x e2.
struct Frame {
  Vec3 e1, e2, N;
};
using VertexFrame = Frame;
using FaceFrame = Frame;

// Second and third fundamental forms, per face in the face frame. The volume
// element eps is the constant matrix volume_element2() in every oriented face
// frame.
struct FundamentalForms {
  FaceMat Pi;
  FaceMat c;
};

std::vector<VertexFrame> build_vertex_frames(const SurfaceMesh& mesh);
std::vector<FaceFrame> build_face_frames(const SurfaceMesh& mesh);

// Discrete Riemannian surface: mesh plus every cached geometric quantity the
// tensor calculus needs.
struct Surface {
  SurfaceMesh mesh;
  std::vector<VertexFrame> vframe;
  std::vector<FaceFrame> fframe;
  std::vector<double> face_area;
  std::vector<double> vertex_area;              // lumped (incident area / 3)
  std::vector<std::array<Vec3, 3>> hat_grad;    // ambient P1 hat gradients
  std::vector<Vec3> face_centroid;
  FundamentalForms forms;
  std::vector<std::array<Mat2, 2>> dPi;  // dPi[f][k](i,j) = (grad_{e_k} Pi)(e_i,e_j)
  double total_area = 0.0;
  double h_mean = 0.0;

  int n_vertices() const { return mesh.n_vertices(); }
  int n_faces() const { return mesh.n_faces(); }

  static Surface build(SurfaceMesh mesh);

  // Frame component conversions.
  Vec3 vertex_to_ambient(int v, Vec2 c) const {
    return vframe[v].e1 * c.x + vframe[v].e2 * c.y;
  }
  Vec2 ambient_to_face(int f, Vec3 a) const {
    return {dot(fframe[f].e1, a), dot(fframe[f].e2, a)};
  }
  Vec2 ambient_to_vertex(int v, Vec3 a) const {
    return {dot(vframe[v].e1, a), dot(vframe[v].e2, a)};
  }
  Vec3 face_to_ambient(int f, Vec2 c) const {
    return fframe[f].e1 * c.x + fframe[f].e2 * c.y;
  }
};

}  // namespace naghdi
