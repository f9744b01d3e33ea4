// Timing comparison of the OpenMP kernels against their serial references,
// plus one end-to-end damped step on a plate system.

#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "naghdi/dynamics.hpp"
#include "naghdi/kernels.hpp"
#include "naghdi/mesh_gen.hpp"
#include "naghdi/solvers.hpp"

using namespace naghdi;
namespace ke = kernels;

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(clock::now().time_since_epoch()).count();
}

template <typename F>
double time_ms(int reps, F&& fn) {
  fn();  // warm up
  double t0 = now_ms();
  for (int r = 0; r < reps; ++r) fn();
  return (now_ms() - t0) / reps;
}

void report(const char* name, double serial_ms, double omp_ms) {
  std::printf("%-24s serial %10.3f ms   omp %10.3f ms   speedup %5.2fx\n", name, serial_ms,
              omp_ms, serial_ms / omp_ms);
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* threads = std::getenv("NAGHDI_THREADS")) set_thread_cap(std::atoi(threads));
  int res = argc > 1 ? std::atoi(argv[1]) : 64;
  int reps = argc > 2 ? std::atoi(argv[2]) : 20;

  Surface s = Surface::build(make_plate(res));
  MaterialParams p;
  ScalarField a(s.n_vertices(), 1.0);
  AssembledSystem sys = assemble(s, p, a);
  const int n = sys.n();
  std::printf("plate %dx%d: %d dofs, K nnz %d\n", res, res, n, sys.K.nnz());

  auto x = random_vector(n, 1);
  auto y = random_vector(n, 2);
  std::vector<double> out(n);

  report("dot", time_ms(reps, [&] { volatile double v = ke::ref::dot(x, y); (void)v; }),
         time_ms(reps, [&] { volatile double v = ke::dot(x, y); (void)v; }));
  report("axpy", time_ms(reps, [&] { ke::ref::axpy(0.5, x, out); }),
         time_ms(reps, [&] { ke::axpy(0.5, x, out); }));
  report("spmv(K)", time_ms(reps, [&] { ke::ref::spmv(sys.K, x, out); }),
         time_ms(reps, [&] { ke::spmv(sys.K, x, out); }));

  // Strain evaluation across faces (the j_density face loop), one thread vs all.
#ifdef _OPENMP
  int max_threads = omp_get_max_threads();
#else
  int max_threads = 1;
#endif
  ShellState st = unpack_state(sys.dofs, s.n_vertices(), x);
  double jd_serial = time_ms(reps, [&] {
    set_thread_cap(1);
    auto f = j_density(s, p, st, st);
    (void)f;
  });
  set_thread_cap(max_threads);
  double jd_omp = time_ms(reps, [&] {
    auto f = j_density(s, p, st, st);
    (void)f;
  });
  report("j_density", jd_serial, jd_omp);

  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1e-3;
  Stepper stepper(sys, cfg);
  auto u = random_vector(n, 3);
  auto v = std::vector<double>(n, 0.0);
  double step_ms = time_ms(reps, [&] { stepper.step(u, v); });
  std::printf("%-24s %10.3f ms per step\n", "newmark step (omp)", step_ms);
  return 0;
}
