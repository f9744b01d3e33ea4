#pragma once

#include <span>

#include "naghdi/sparse.hpp"

namespace naghdi {

// Data-parallel kernels. The OpenMP versions in naghdi::kernels are what the
// library calls; naghdi::kernels::ref holds the serial reference
// implementations used by the tests and the benchmark. Reductions are blocked
// so results do not depend on the thread count.
namespace kernels {

constexpr int kBlock = 1024;

double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y);   // y += a x
void xpay(std::span<const double> x, double alpha, std::span<double> y);   // y = x + a y
void scale(double alpha, std::span<double> x);
void copy(std::span<const double> x, std::span<double> y);
void spmv(const Csr& A, std::span<const double> x, std::span<double> y);   // y = A x
void mul_diag(std::span<const double> d, std::span<const double> x, std::span<double> y);

namespace ref {
double dot(std::span<const double> a, std::span<const double> b);
double sum(std::span<const double> a);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void spmv(const Csr& A, std::span<const double> x, std::span<double> y);
}  // namespace ref

}  // namespace kernels

// Caps OpenMP worker count (values < 1 leave the runtime default).
void set_thread_cap(int n);

}  // namespace naghdi
