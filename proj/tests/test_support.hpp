#pragma once

#include <Eigen/Dense>
#include <random>

#include "naghdi/assemble.hpp"
#include "naghdi/mesh_gen.hpp"

namespace naghdi::testing {

inline Surface plate_surface(int res) { return Surface::build(make_plate(res)); }

inline ShellState random_clamped_state(const Surface& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ShellState st = ShellState::zero(s.n_vertices());
  for (int v = 0; v < s.n_vertices(); ++v) {
    if (s.mesh.is_boundary[v]) continue;
    st.W1[v] = {u(rng), u(rng)};
    st.W2[v] = {u(rng), u(rng)};
    st.w1[v] = u(rng);
    st.w2[v] = u(rng);
  }
  return st;
}

inline ShellState random_state(const Surface& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ShellState st = ShellState::zero(s.n_vertices());
  for (int v = 0; v < s.n_vertices(); ++v) {
    st.W1[v] = {u(rng), u(rng)};
    st.W2[v] = {u(rng), u(rng)};
    st.w1[v] = u(rng);
    st.w2[v] = u(rng);
  }
  return st;
}

inline Eigen::MatrixXd dense(const Csr& A) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(A.n, A.n);
  for (int i = 0; i < A.n; ++i)
    for (int k = A.rowptr[i]; k < A.rowptr[i + 1]; ++k) D(i, A.col[k]) += A.val[k];
  return D;
}

inline Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<long>(v.size()));
}

inline double max_facemat_diff(const FaceMat& a, const FaceMat& b) {
  double m = 0.0;
  for (size_t f = 0; f < a.size(); ++f) m = std::max(m, max_abs(a[f] - b[f]));
  return m;
}

// Hand-built system for scalar/oscillator oracles: M = diag(m), K = diag(k),
// C = diag(c).
inline AssembledSystem diag_system(const std::vector<double>& m, const std::vector<double>& k,
                                   const std::vector<double>& c) {
  AssembledSystem sys;
  int n = static_cast<int>(m.size());
  std::vector<Triplet> tm, tk;
  for (int i = 0; i < n; ++i) {
    tm.push_back({i, i, m[i]});
    tk.push_back({i, i, k[i]});
  }
  sys.M = csr_from_triplets(n, std::move(tm));
  sys.K = csr_from_triplets(n, std::move(tk));
  sys.C_diag = c;
  return sys;
}

}  // namespace naghdi::testing
