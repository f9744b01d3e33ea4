#pragma once

#include <functional>

#include "naghdi/assemble.hpp"
#include "naghdi/escape.hpp"
#include "naghdi/solvers.hpp"

namespace naghdi {

struct SimConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  double newmark_beta = 0.25;
  double newmark_gamma = 0.5;
  int sample_stride = 1;
  double solver_tol = 1e-10;
  int max_cg_iters = 100000;

  void validate() const;
  long n_steps() const { return std::lround(t_end / dt); }
};

struct EnergyTrace {
  std::vector<double> times;
  std::vector<double> energies;
  std::vector<double> dissipation;      // per sample interval (trapezoid on v'Cv)
  std::vector<double> dissipation_cum;
  double c1 = 0.0, c2 = 0.0, r_squared = 0.0;  // filled by decay_fit
};

struct StateHistory {
  std::vector<double> times;
  std::vector<std::vector<double>> u, v;
};

struct SimResult {
  EnergyTrace trace;
  std::vector<double> u, v;
};

// Average-acceleration Newmark step in first-order (u, v) form: one SPD solve
// of (M + dt/2 C + dt^2/4 K) per step, solved in increment form so the
// undamped discrete energy is conserved to solver tolerance.
class Stepper {
 public:
  Stepper(const AssembledSystem& sys, const SimConfig& cfg);

  // Advances (u, v) one step; f_n/f_n1 are optional nodal forces at the two
  // step endpoints (trapezoidal load averaging).
  void step(std::vector<double>& u, std::vector<double>& v,
            const std::vector<double>* f_n = nullptr,
            const std::vector<double>* f_n1 = nullptr) const;

  double dissipation_trapezoid(const std::vector<double>& v_old,
                               const std::vector<double>& v_new) const;

  const AssembledSystem& system() const { return *sys_; }
  double dt() const { return dt_; }

 private:
  const AssembledSystem* sys_;
  Csr lhs_;
  double dt_, tol_;
  int max_iters_;
};

SimResult simulate(const AssembledSystem& sys, std::vector<double> u0, std::vector<double> v0,
                   const SimConfig& cfg, StateHistory* history = nullptr,
                   const std::function<std::vector<double>(long)>* force_at_step = nullptr);

// max_n |E(t_{n+1}) - E(t_n) + d_n| / E(0) over the sampled trace.
double energy_balance_check(const EnergyTrace& trace);

struct DecayFit {
  double c1 = 0.0, c2 = 0.0, r_squared = 0.0;
  int n_points = 0;
};

// Least squares on log E over [t0, t1], sampled at local maxima of E when
// enough of them exist. c2 is reported nonnegative.
DecayFit decay_fit(const EnergyTrace& trace, double t0, double t1);

// Time-integrated multiplier identity residual for a weight function p:
//   [v' M_p u]_0^T = int ( v' M_p v - u' K_p u - v' C_p u ) dt
// relative to the largest participating term. Exact in space for constant p.
double virial_identity_check(const AssembledSystem& sys, const StateHistory& snaps,
                             const ScalarField& p_vertex);

// e(xi,xi) = 2 b(S(W1),G(V,DW1)) + 2 b(S(W2),G(V,DW2)) + 4 v |phi0|^2 + v |Dw2|^2.
FaceScalar e_density(const Surface& s, const MaterialParams& p, const ShellState& xi,
                     const TangentField& V);

struct DesBCertificate {
  double sigma1 = 0.0;
  double c_lo = 0.0;
  double min_eig = 0.0;
};

// Smallest C_lo >= 0 with int b(S,G(V,DW)) - sigma1 int b(S,S) + C_lo ||W||^2 >= 0
// over clamped tangent fields; requires a certified escape field.
DesBCertificate des_b_certificate(const Surface& s, const MaterialParams& p,
                                  const TangentField& V, double lambda0,
                                  std::uint64_t seed = 11);

}  // namespace naghdi
