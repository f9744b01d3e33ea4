#pragma once

#include "naghdi/surface.hpp"

namespace naghdi {

// Vertex <-> face transfers. Face values of vertex fields are plain averages
// of the three corners; vertex values of face fields are area-weighted over
// incident faces. Tangent data moves through ambient space and is projected
// into the target frame.
FaceScalar scalar_to_faces(const Surface& s, const ScalarField& w);
FaceVec tangent_to_faces(const Surface& s, const TangentField& W);
ScalarField faces_to_scalar(const Surface& s, const FaceScalar& w);
TangentField faces_to_tangent(const Surface& s, const FaceVec& W);
std::vector<Mat2> facemat_to_vertices(const Surface& s, const FaceMat& T);

// Covariant gradient of a scalar (per-face constant 1-form).
FaceVec covariant_gradient(const Surface& s, const ScalarField& w);

// Pointwise vertex gradient by a local quadratic fit in the vertex tangent
// plane (1-ring, widened to the 2-ring when too small). Unbiased on one-sided
// boundary neighborhoods, unlike averaged face gradients.
TangentField vertex_gradient(const Surface& s, const ScalarField& w);

// Covariant differential of a tangent field: tangential projection of the
// piecewise-linear interpolant's ambient derivative, DW(i,j) = <grad_{e_j} W, e_i>.
FaceMat covariant_differential(const Surface& s, const TangentField& W);

// Pointwise tensor algebra lifted to face fields.
FaceMat sym_field(const FaceMat& T);
FaceMat transpose_field(const FaceMat& T);
FaceScalar trace_field(const FaceMat& T);
FaceScalar inner_field(const FaceMat& A, const FaceMat& B);
FaceVec interior_product_field(const FaceVec& W, const FaceMat& T);

// Covariant derivative of a per-face tensor by neighborhood least squares;
// result[f][k](i,j) = (grad_{e_k} T)(e_i, e_j). Faces without neighbors get 0
// with a warning.
std::vector<std::array<Mat2, 2>> tensor_derivative(const Surface& s, const FaceMat& T);

// Contraction of a 3-tensor with a vector in the first slot:
// (i(W) DT)(e_j, e_k) = DT(W, e_j, e_k).
FaceMat interior_product3(const FaceVec& W, const std::vector<std::array<Mat2, 2>>& DT);

// G(V, T) = 1/2 [ T(., grad_. V) + T^*(., grad_. V) ] = sym(T) . DV.
Mat2 g_map(const Mat2& DV, const Mat2& T);
FaceMat g_map_field(const FaceMat& DV, const FaceMat& T);

// One-point (barycentric) quadrature.
double integrate(const Surface& s, const FaceScalar& f);
double l2_inner(const Surface& s, const FaceScalar& a, const FaceScalar& b);
double l2_inner_vertex(const Surface& s, const ScalarField& a, const ScalarField& b);
double l2_inner(const Surface& s, const TangentField& a, const TangentField& b);

}  // namespace naghdi
