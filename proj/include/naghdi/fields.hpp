#pragma once

#include <vector>

#include "naghdi/core.hpp"

namespace naghdi {

// Vertex-based fields (continuous piecewise linear).
using ScalarField = std::vector<double>;
using TangentField = std::vector<Vec2>;  // components in the vertex frame

// Face-based fields (piecewise constant), components in the face frame.
using FaceScalar = std::vector<double>;
using FaceVec = std::vector<Vec2>;
using FaceMat = std::vector<Mat2>;

}  // namespace naghdi
