#include "naghdi/dynamics.hpp"

#include <cmath>
#include <limits>

#include "naghdi/kernels.hpp"

namespace naghdi {

namespace ke = kernels;

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (!(t_end >= dt)) throw std::invalid_argument("t_end must be at least dt");
  if (std::abs(newmark_beta - 0.25) > 1e-15 || std::abs(newmark_gamma - 0.5) > 1e-15)
    throw std::invalid_argument("only the average-acceleration Newmark pair (1/4, 1/2) is supported");
  if (sample_stride < 1) throw std::invalid_argument("sample_stride must be >= 1");
  if (!(solver_tol > 0.0)) throw std::invalid_argument("solver_tol must be positive");
}

Stepper::Stepper(const AssembledSystem& sys, const SimConfig& cfg)
    : sys_(&sys), dt_(cfg.dt), tol_(cfg.solver_tol), max_iters_(cfg.max_cg_iters) {
  cfg.validate();
  // lhs = M + dt/2 C + dt^2/4 K
  std::vector<Triplet> ct;
  for (int i = 0; i < sys.n(); ++i)
    if (sys.C_diag[i] != 0.0) ct.push_back({i, i, 0.5 * dt_ * sys.C_diag[i]});
  Csr Cs = csr_from_triplets(sys.n(), std::move(ct));
  lhs_ = csr_add(sys.M, 1.0, Cs);
  lhs_ = csr_add(lhs_, 0.25 * dt_ * dt_, sys.K);
}

void Stepper::step(std::vector<double>& u, std::vector<double>& v,
                   const std::vector<double>* f_n, const std::vector<double>* f_n1) const {
  const int n = lhs_.n;
  // r = -dt [ C v + K (u + dt/2 v) ] + dt/2 (f_n + f_{n+1});  lhs dv = r.
  std::vector<double> tmp(n), r(n);
  for (int i = 0; i < n; ++i) tmp[i] = u[i] + 0.5 * dt_ * v[i];
  ke::spmv(sys_->K, tmp, r);
  for (int i = 0; i < n; ++i) r[i] = -dt_ * (r[i] + sys_->C_diag[i] * v[i]);
  if (f_n) ke::axpy(0.5 * dt_, *f_n, r);
  if (f_n1) ke::axpy(0.5 * dt_, *f_n1, r);

  std::vector<double> dv(n, 0.0);
  auto cg = pcg(lhs_, r, dv, tol_, max_iters_);
  if (!cg.converged)
    throw std::runtime_error("Newmark solve did not converge: relative residual " +
                             std::to_string(cg.rel_residual) + " after " +
                             std::to_string(cg.iters) + " CG iterations");
  for (int i = 0; i < n; ++i) {
    u[i] += dt_ * (v[i] + 0.5 * dv[i]);
    v[i] += dv[i];
  }
}

double Stepper::dissipation_trapezoid(const std::vector<double>& v_old,
                                      const std::vector<double>& v_new) const {
  const auto& c = sys_->C_diag;
  double a = 0.0, b = 0.0;
  for (size_t i = 0; i < c.size(); ++i) {
    a += c[i] * v_old[i] * v_old[i];
    b += c[i] * v_new[i] * v_new[i];
  }
  return 0.5 * dt_ * (a + b);
}

SimResult simulate(const AssembledSystem& sys, std::vector<double> u, std::vector<double> v,
                   const SimConfig& cfg, StateHistory* history,
                   const std::function<std::vector<double>(long)>* force_at_step) {
  cfg.validate();
  if (static_cast<int>(u.size()) != sys.n() || static_cast<int>(v.size()) != sys.n())
    throw std::invalid_argument("simulate: state size mismatch");
  Stepper stepper(sys, cfg);
  const long steps = cfg.n_steps();

  SimResult out;
  auto sample = [&](long n, double acc_diss) {
    out.trace.times.push_back(n * cfg.dt);
    out.trace.energies.push_back(energy(sys, u, v));
    out.trace.dissipation.push_back(acc_diss);
    double cum = out.trace.dissipation_cum.empty() ? 0.0 : out.trace.dissipation_cum.back();
    out.trace.dissipation_cum.push_back(cum + acc_diss);
    if (history) {
      history->times.push_back(n * cfg.dt);
      history->u.push_back(u);
      history->v.push_back(v);
    }
  };

  sample(0, 0.0);
  double acc = 0.0;
  std::vector<double> f_prev, f_next;
  if (force_at_step) f_prev = (*force_at_step)(0);
  std::vector<double> v_old(sys.n());
  for (long n = 0; n < steps; ++n) {
    v_old = v;
    if (force_at_step) {
      f_next = (*force_at_step)(n + 1);
      stepper.step(u, v, &f_prev, &f_next);
      std::swap(f_prev, f_next);
    } else {
      stepper.step(u, v);
    }
    acc += stepper.dissipation_trapezoid(v_old, v);
    if ((n + 1) % cfg.sample_stride == 0 || n + 1 == steps) {
      sample(n + 1, acc);
      acc = 0.0;
    }
  }
  out.u = std::move(u);
  out.v = std::move(v);
  return out;
}

double energy_balance_check(const EnergyTrace& trace) {
  if (trace.energies.size() < 2) throw std::invalid_argument("trace too short");
  double e0 = trace.energies.front();
  if (e0 <= 0.0) return 0.0;
  double worst = 0.0;
  for (size_t k = 0; k + 1 < trace.energies.size(); ++k) {
    double r = trace.energies[k + 1] - trace.energies[k] + trace.dissipation[k + 1];
    worst = std::max(worst, std::abs(r));
  }
  return worst / e0;
}

DecayFit decay_fit(const EnergyTrace& trace, double t0, double t1) {
  std::vector<double> ts, es;
  double e0 = trace.energies.empty() ? 0.0 : trace.energies.front();
  double floor_e = 100.0 * std::numeric_limits<double>::epsilon() * e0;
  for (size_t i = 0; i < trace.times.size(); ++i) {
    if (trace.times[i] < t0 || trace.times[i] > t1) continue;
    if (!(trace.energies[i] > floor_e)) break;  // truncate once E hits the noise floor
    ts.push_back(trace.times[i]);
    es.push_back(trace.energies[i]);
  }
  if (ts.size() < 2) throw std::runtime_error("decay_fit: window too small");

  // Envelope sampling: local maxima of E between oscillations.
  std::vector<double> ft, fe;
  for (size_t i = 1; i + 1 < es.size(); ++i)
    if (es[i] >= es[i - 1] && es[i] >= es[i + 1]) {
      ft.push_back(ts[i]);
      fe.push_back(es[i]);
    }
  if (ft.size() < 5) {
    ft = ts;
    fe = es;
  }

  double n = static_cast<double>(ft.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < ft.size(); ++i) {
    double x = ft[i], y = std::log(fe[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  double denom = n * sxx - sx * sx;
  DecayFit fit;
  fit.n_points = static_cast<int>(ft.size());
  if (denom == 0.0) return fit;
  double slope = (n * sxy - sx * sy) / denom;
  double intercept = (sy - slope * sx) / n;
  fit.c2 = std::max(0.0, -slope);
  fit.c1 = std::exp(intercept) / (e0 > 0.0 ? e0 : 1.0);
  double ss_res = 0.0, mean_y = sy / n, ss_tot = 0.0;
  for (size_t i = 0; i < ft.size(); ++i) {
    double y = std::log(fe[i]);
    double yhat = intercept + slope * ft[i];
    ss_res += (y - yhat) * (y - yhat);
    ss_tot += (y - mean_y) * (y - mean_y);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

double virial_identity_check(const AssembledSystem& sys, const StateHistory& snaps,
                             const ScalarField& p_vertex) {
  if (snaps.times.size() < 2) throw std::invalid_argument("virial check needs >= 2 snapshots");
  const Surface& s = *sys.surface;
  FaceScalar pf = scalar_to_faces(s, p_vertex);
  Csr Kp = assemble_stiffness(s, sys.params, sys.dofs, &pf);
  Csr Mp = assemble_mass(s, sys.dofs, &pf);
  std::vector<double> Cp(sys.n(), 0.0);
  for (int v = 0; v < s.n_vertices(); ++v)
    for (int c = 0; c < 6; ++c) {
      int i = sys.dofs.index(v, c);
      if (i >= 0) Cp[i] = p_vertex[v] * sys.a_vertex[v] * s.vertex_area[v];
    }

  auto pairing = [&](const std::vector<double>& a, const Csr& A, const std::vector<double>& b) {
    std::vector<double> tmp(A.n);
    ke::spmv(A, b, tmp);
    return ke::dot(a, tmp);
  };
  auto rhs_at = [&](size_t k) {
    const auto& u = snaps.u[k];
    const auto& v = snaps.v[k];
    double t1 = pairing(v, Mp, v);
    double t2 = pairing(u, Kp, u);
    double t3 = 0.0;
    for (int i = 0; i < sys.n(); ++i) t3 += Cp[i] * v[i] * u[i];
    return std::array<double, 3>{t1, t2, t3};
  };

  double lhs = pairing(snaps.v.back(), Mp, snaps.u.back()) -
               pairing(snaps.v.front(), Mp, snaps.u.front());
  double i1 = 0.0, i2 = 0.0, i3 = 0.0;
  auto prev = rhs_at(0);
  for (size_t k = 1; k < snaps.times.size(); ++k) {
    auto cur = rhs_at(k);
    double h = snaps.times[k] - snaps.times[k - 1];
    i1 += 0.5 * h * (prev[0] + cur[0]);
    i2 += 0.5 * h * (prev[1] + cur[1]);
    i3 += 0.5 * h * (prev[2] + cur[2]);
    prev = cur;
  }
  double rhs = i1 - i2 - i3;
  double scale = std::max({std::abs(lhs), std::abs(i1), std::abs(i2), std::abs(i3), 1e-300});
  return std::abs(lhs - rhs) / scale;
}

FaceScalar e_density(const Surface& s, const MaterialParams& p, const ShellState& xi,
                     const TangentField& V) {
  p.validate();
  const double beta = p.beta();
  FaceMat DV = covariant_differential(s, V);
  auto dec = decompose_dv(DV);
  FaceMat dW1 = covariant_differential(s, xi.W1);
  FaceMat dW2 = covariant_differential(s, xi.W2);
  FaceVec phi = strain_phi0(s, xi);
  FaceVec dw2 = covariant_gradient(s, xi.w2);
  FaceScalar r(s.n_faces());
#pragma omp parallel for schedule(static)
  for (int f = 0; f < s.n_faces(); ++f) {
    Mat2 S1 = sym(dW1[f]), S2 = sym(dW2[f]);
    r[f] = 2.0 * b_form(S1, g_map(DV[f], dW1[f]), beta) +
           2.0 * b_form(S2, g_map(DV[f], dW2[f]), beta) +
           4.0 * dec.v[f] * dot(phi[f], phi[f]) + dec.v[f] * dot(dw2[f], dw2[f]);
  }
  return r;
}

DesBCertificate des_b_certificate(const Surface& s, const MaterialParams& p,
                                  const TangentField& V, double lambda0, std::uint64_t seed) {
  p.validate();
  auto cert = check_escape(s, V, lambda0, p.beta());
  if (!cert.pass)
    throw std::runtime_error("des_b_certificate: field is not a certified escape field "
                             "(residual " + std::to_string(cert.residual) + ", margin " +
                             std::to_string(cert.margin) + ")");
  DesBCertificate out;
  out.sigma1 = cert.v_min - (1.0 + 2.0 * p.beta()) * 0.5 * cert.l_max;

  TangentDofs dofs = TangentDofs::clamped(s.mesh);
  FaceMat DV = covariant_differential(s, V);
  Csr Ae = tangent_e_form(s, dofs, DV, p.beta());
  Csr As = tangent_b_form(s, dofs, p.beta());
  Csr Mw = tangent_mass(s, dofs);
  Csr P = csr_add(Ae, -out.sigma1, As);
  EigOptions opts;
  opts.seed = seed;
  out.min_eig = smallest_gen_eig_indefinite(P, Mw, opts).value;
  out.c_lo = std::max(0.0, -out.min_eig);
  return out;
}

}  // namespace naghdi
