#include "naghdi/control.hpp"

#include <cmath>

#include "naghdi/kernels.hpp"

namespace naghdi {

namespace ke = kernels;

namespace {
SimConfig control_sim_config(double T, double dt, double solver_tol, int stride) {
  SimConfig cfg;
  cfg.dt = dt;
  cfg.t_end = T;
  cfg.solver_tol = solver_tol;
  cfg.sample_stride = stride > 0 ? stride : 1;
  long steps = std::lround(T / dt);
  if (std::abs(steps * dt - T) > 1e-9 * std::max(1.0, T))
    throw std::invalid_argument("control horizon T must be an integer multiple of dt");
  if (steps % cfg.sample_stride != 0)
    throw std::invalid_argument("control step count must be a multiple of sample_stride");
  return cfg;
}
}  // namespace

void k_map(const AssembledSystem& sys, double T, double dt, double solver_tol,
           std::vector<double>& u, std::vector<double>& v, int sample_stride,
           StateHistory* h_eta, StateHistory* h_theta) {
  SimConfig cfg = control_sim_config(T, dt, solver_tol, sample_stride);
  auto fwd = simulate(sys, u, v, cfg, h_eta);
  for (double& x : fwd.u) x = -x;
  auto bwd = simulate(sys, fwd.u, fwd.v, cfg, h_theta);
  u = bwd.u;
  for (double& x : u) x = -x;
  v = std::move(bwd.v);
}

double pair_energy_norm(const AssembledSystem& sys, std::span<const double> u,
                        std::span<const double> v) {
  return std::sqrt(2.0 * energy(sys, u, v));
}

double estimate_k_norm(const AssembledSystem& sys, double T, double dt, int n_probes,
                       int n_iters, double solver_tol, std::uint64_t seed) {
  if (n_probes < 1) throw std::invalid_argument("estimate_k_norm: n_probes >= 1 required");
  if (n_iters < 1) n_iters = 1;
  double estimate = 0.0;
  for (int p = 0; p < n_probes; ++p) {
    std::vector<double> u = random_vector(sys.n(), seed + 2 * p);
    std::vector<double> v = random_vector(sys.n(), seed + 2 * p + 1);
    double nrm = pair_energy_norm(sys, u, v);
    if (nrm == 0.0) continue;
    for (int i = 0; i < sys.n(); ++i) {
      u[i] /= nrm;
      v[i] /= nrm;
    }
    double ratio = 0.0;
    for (int it = 0; it < n_iters; ++it) {
      k_map(sys, T, dt, solver_tol, u, v);
      double nn = pair_energy_norm(sys, u, v);
      ratio = nn;  // previous iterate was normalized
      if (nn == 0.0) break;
      for (int i = 0; i < sys.n(); ++i) {
        u[i] /= nn;
        v[i] /= nn;
      }
    }
    estimate = std::max(estimate, ratio);
  }
  return estimate;
}

ControlResult russell_solve(const AssembledSystem& sys, const ControlProblem& prob) {
  const int n = sys.n();
  if (static_cast<int>(prob.eta0.size()) != n || static_cast<int>(prob.eta1.size()) != n)
    throw std::invalid_argument("russell_solve: initial data size mismatch");
  SimConfig cfg = control_sim_config(prob.T, prob.dt, prob.solver_tol, prob.sample_stride);

  ControlResult out;
  out.k_norm_estimate = estimate_k_norm(sys, prob.T, prob.dt, prob.norm_probes, prob.norm_iters,
                                        prob.solver_tol, prob.seed);
  if (out.k_norm_estimate >= 1.0)
    throw std::runtime_error("russell_solve: time horizon too short, ||K|| estimate " +
                             std::to_string(out.k_norm_estimate) + " >= 1");

  // Reduce a nonzero target by linearity and time reversal: subtract the free
  // (undamped) solution that ends at the target.
  std::vector<double> b_u = prob.eta0, b_v = prob.eta1;
  if (!prob.target_u.empty() || !prob.target_v.empty()) {
    std::vector<double> zu = prob.target_u.empty() ? std::vector<double>(n, 0.0) : prob.target_u;
    std::vector<double> zv = prob.target_v.empty() ? std::vector<double>(n, 0.0) : prob.target_v;
    AssembledSystem undamped = sys;
    undamped.C_diag.assign(n, 0.0);
    for (double& x : zv) x = -x;  // integrate backward from T to 0
    auto free_bwd = simulate(undamped, zu, zv, cfg);
    for (int i = 0; i < n; ++i) {
      b_u[i] -= free_bwd.u[i];
      b_v[i] -= -free_bwd.v[i];
    }
  }
  out.initial_energy = energy(sys, b_u, b_v);
  double b_norm = pair_energy_norm(sys, b_u, b_v);
  if (b_norm == 0.0) {
    out.eta0.assign(n, 0.0);
    out.eta1.assign(n, 0.0);
    out.final_state_energy = 0.0;
    return out;
  }

  // Neumann iteration for (I - K) x = b:  x <- b + K x.
  std::vector<double> xu = b_u, xv = b_v;
  for (int it = 0; it < prob.max_iters; ++it) {
    std::vector<double> ku = xu, kv = xv;
    k_map(sys, prob.T, prob.dt, prob.solver_tol, ku, kv);
    std::vector<double> nu(n), nv(n);
    for (int i = 0; i < n; ++i) {
      nu[i] = b_u[i] + ku[i];
      nv[i] = b_v[i] + kv[i];
    }
    std::vector<double> du(n), dv(n);
    for (int i = 0; i < n; ++i) {
      du[i] = nu[i] - xu[i];
      dv[i] = nv[i] - xv[i];
    }
    double res = pair_energy_norm(sys, du, dv);
    out.residuals.push_back(res);
    xu = std::move(nu);
    xv = std::move(nv);
    out.iterations = it + 1;
    if (res <= prob.tol * b_norm) break;
  }
  if (out.residuals.empty() || out.residuals.back() > prob.tol * b_norm)
    throw std::runtime_error("russell_solve: Neumann iteration did not reach tolerance in " +
                             std::to_string(prob.max_iters) + " iterations");

  out.eta0 = xu;
  out.eta1 = xv;

  // Control assembly from the two stored velocity histories.
  StateHistory h_eta, h_theta;
  {
    std::vector<double> u = xu, v = xv;
    k_map(sys, prob.T, prob.dt, prob.solver_tol, u, v, cfg.sample_stride, &h_eta, &h_theta);
  }
  const size_t ns = h_eta.times.size();
  out.times = h_eta.times;
  out.force.assign(ns, std::vector<double>(n, 0.0));
  for (size_t k = 0; k < ns; ++k) {
    const auto& ve = h_eta.v[k];
    const auto& vt = h_theta.v[ns - 1 - k];  // theta_t(T - t)
    for (int i = 0; i < n; ++i) out.force[k][i] = -sys.C_diag[i] * (ve[i] + vt[i]);
  }

  // Undamped replay with the synthesized control, trapezoidal force averaging.
  AssembledSystem undamped = sys;
  undamped.C_diag.assign(n, 0.0);
  const double sample_dt = cfg.sample_stride * prob.dt;
  std::function<std::vector<double>(long)> force_at = [&](long step) {
    double t = step * prob.dt;
    double pos = t / sample_dt;
    size_t k0 = std::min(ns - 1, static_cast<size_t>(std::floor(pos)));
    size_t k1 = std::min(ns - 1, k0 + 1);
    double w = pos - static_cast<double>(k0);
    std::vector<double> f(n);
    for (int i = 0; i < n; ++i) f[i] = (1.0 - w) * out.force[k0][i] + w * out.force[k1][i];
    return f;
  };
  auto replay = simulate(undamped, b_u, b_v, cfg, nullptr, &force_at);
  out.final_state_energy = energy(undamped, replay.u, replay.v);
  return out;
}

}  // namespace naghdi
