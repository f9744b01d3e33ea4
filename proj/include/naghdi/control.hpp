#pragma once

#include "naghdi/dynamics.hpp"

namespace naghdi {

struct ControlProblem {
  std::vector<double> eta0, eta1;       // initial data
  std::vector<double> target_u, target_v;  // empty means the zero target
  double T = 1.0;
  double dt = 1e-3;
  int sample_stride = 1;
  double tol = 1e-6;
  int max_iters = 200;
  double solver_tol = 1e-10;
  int norm_probes = 2;
  int norm_iters = 6;
  std::uint64_t seed = 2024;
};

struct ControlResult {
  std::vector<double> times;               // sample times of the stored control
  std::vector<std::vector<double>> force;  // nodal control force F(t_k)
  std::vector<double> residuals;           // Neumann residual norms
  double k_norm_estimate = 0.0;
  double final_state_energy = 0.0;         // replay energy at T (to-zero problem)
  double initial_energy = 0.0;
  std::vector<double> eta0, eta1;          // solved preimage of L
  int iterations = 0;
};

// Stabilization composition K(eta0, eta1) = (-theta(T), theta_t(T)): a damped
// solve from (eta0, eta1), then a damped solve from (-eta(T), eta_t(T)).
// T must be an integer multiple of dt.
void k_map(const AssembledSystem& sys, double T, double dt, double solver_tol,
           std::vector<double>& u, std::vector<double>& v, int sample_stride = 0,
           StateHistory* h_eta = nullptr, StateHistory* h_theta = nullptr);

// Energy norm sqrt(2E) of a (u, v) pair.
double pair_energy_norm(const AssembledSystem& sys, std::span<const double> u,
                        std::span<const double> v);

// Power-iteration estimate of the energy-norm contraction factor of K.
double estimate_k_norm(const AssembledSystem& sys, double T, double dt, int n_probes,
                       int n_iters, double solver_tol, std::uint64_t seed);

// Exact control by Russell's principle: Neumann inversion of L = I - K, then
// control assembly F = -C (eta_t(t) + theta_t(T - t)) and an undamped replay
// that verifies the final state. Throws when the estimated ||K|| >= 1 ("time
// horizon too short") or when the iteration does not converge.
ControlResult russell_solve(const AssembledSystem& sys, const ControlProblem& prob);

}  // namespace naghdi
