#include "naghdi/mesh_gen.hpp"

#include <cmath>
#include <map>

namespace naghdi {

namespace {
constexpr double kPi = 3.14159265358979323846;

void push_quad(SurfaceMesh& m, int v00, int v10, int v01, int v11, bool flip_diag,
               bool reverse = false) {
  // Vertices: v00 bottom-left, v10 bottom-right, v01 top-left, v11 top-right.
  auto add = [&](int a, int b, int c) {
    if (reverse)
      m.triangles.push_back({a, c, b});
    else
      m.triangles.push_back({a, b, c});
  };
  if (!flip_diag) {
    add(v00, v10, v11);
    add(v00, v11, v01);
  } else {
    add(v00, v10, v01);
    add(v10, v11, v01);
  }
}
}  // namespace

SurfaceMesh make_plate(int res) {
  if (res < 2) throw std::invalid_argument("plate resolution must be >= 2");
  SurfaceMesh m;
  const int n = res + 1;
  m.vertices.resize(n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      m.vertices[j * n + i] = {double(i) / res, double(j) / res, 0.0};
  for (int j = 0; j < res; ++j)
    for (int i = 0; i < res; ++i)
      push_quad(m, j * n + i, j * n + i + 1, (j + 1) * n + i, (j + 1) * n + i + 1,
                (i + j) % 2 == 1);
  m.finalize();
  return m;
}

SurfaceMesh make_annulus(int res, double r_in) {
  if (res < 2) throw std::invalid_argument("annulus resolution must be >= 2");
  if (!(r_in > 0.0 && r_in < 1.0)) throw std::invalid_argument("annulus inner radius in (0,1)");
  SurfaceMesh m;
  const int nr = res + 1;
  const int nt = std::max(8, 6 * res);  // closed in theta
  m.vertices.resize(nr * nt);
  for (int j = 0; j < nr; ++j) {
    double r = r_in + (1.0 - r_in) * double(j) / res;
    for (int i = 0; i < nt; ++i) {
      double th = 2.0 * kPi * double(i) / nt;
      m.vertices[j * nt + i] = {r * std::cos(th), r * std::sin(th), 0.0};
    }
  }
  for (int j = 0; j < res; ++j)
    for (int i = 0; i < nt; ++i) {
      int i1 = (i + 1) % nt;
      push_quad(m, j * nt + i, j * nt + i1, (j + 1) * nt + i, (j + 1) * nt + i1, (i + j) % 2 == 1);
    }
  m.finalize();
  return m;
}

SurfaceMesh make_cylinder_patch(int res) {
  if (res < 4) throw std::invalid_argument("cylinder resolution must be >= 4");
  SurfaceMesh m;
  const int nt = 2 * ((3 * res + 1) / 2);  // even column count, ~3 res
  const int nz = res;
  const int n = nt + 1;  // theta endpoints duplicated: the slit
  m.vertices.resize(n * (nz + 1));
  for (int j = 0; j <= nz; ++j) {
    double z = -1.0 + 2.0 * double(j) / nz;
    for (int i = 0; i <= nt; ++i) {
      double th = -kPi + 2.0 * kPi * double(i) / nt;
      m.vertices[j * n + i] = {std::cos(th), std::sin(th), z};
    }
  }
  for (int j = 0; j < nz; ++j)
    for (int i = 0; i < nt; ++i)
      push_quad(m, j * n + i, j * n + i + 1, (j + 1) * n + i, (j + 1) * n + i + 1,
                (i + j) % 2 == 1);
  m.finalize();
  return m;
}

SurfaceMesh make_spherical_cap(int res, double phi_max) {
  if (res < 2) throw std::invalid_argument("cap resolution must be >= 2");
  if (!(phi_max > 0.0 && phi_max < kPi)) throw std::invalid_argument("cap angle in (0,pi)");
  SurfaceMesh m;
  const int nt = std::max(8, 6 * res);
  m.vertices.push_back({0.0, 0.0, 1.0});  // pole
  for (int j = 1; j <= res; ++j) {
    double phi = phi_max * double(j) / res;
    for (int i = 0; i < nt; ++i) {
      double th = 2.0 * kPi * double(i) / nt;
      m.vertices.push_back(
          {std::sin(phi) * std::cos(th), std::sin(phi) * std::sin(th), std::cos(phi)});
    }
  }
  auto ring = [&](int j, int i) { return 1 + (j - 1) * nt + ((i % nt) + nt) % nt; };
  // Outward orientation: the (theta, phi) chart is left-handed for the
  // outward normal, so the quads are reversed.
  for (int i = 0; i < nt; ++i) m.triangles.push_back({0, ring(1, i), ring(1, i + 1)});
  for (int j = 1; j < res; ++j)
    for (int i = 0; i < nt; ++i)
      push_quad(m, ring(j, i), ring(j, i + 1), ring(j + 1, i), ring(j + 1, i + 1),
                (i + j) % 2 == 1, true);
  m.finalize();
  return m;
}

SurfaceMesh make_sphere(int levels) {
  if (levels < 1) throw std::invalid_argument("sphere subdivision level must be >= 1");
  SurfaceMesh m;
  m.vertices = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  m.triangles = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                 {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
  for (int l = 0; l < levels; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      int idx = static_cast<int>(m.vertices.size());
      m.vertices.push_back(normalized(m.vertices[a] + m.vertices[b]));
      midpoint.emplace(key, idx);
      return idx;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(m.triangles.size() * 4);
    for (auto t : m.triangles) {
      int a = mid(t[0], t[1]), b = mid(t[1], t[2]), c = mid(t[2], t[0]);
      next.push_back({t[0], a, c});
      next.push_back({t[1], b, a});
      next.push_back({t[2], c, b});
      next.push_back({a, b, c});
    }
    m.triangles = std::move(next);
  }
  m.finalize();
  return m;
}

SurfaceMesh make_mesh(const std::string& kind, int res) {
  if (kind == "plate") return make_plate(res);
  if (kind == "annulus") return make_annulus(res);
  if (kind == "cylinder") return make_cylinder_patch(res);
  if (kind == "cap") return make_spherical_cap(res);
  throw std::invalid_argument("unknown mesh kind: " + kind);
}

}  // namespace naghdi
