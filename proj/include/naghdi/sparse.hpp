#pragma once

#include <tuple>
#include <vector>

namespace naghdi {

struct Triplet {
  int row = 0, col = 0;
  double val = 0.0;
};

// Square CSR matrix.
struct Csr {
  int n = 0;
  std::vector<int> rowptr;  // size n+1
  std::vector<int> col;
  std::vector<double> val;

  int nnz() const { return static_cast<int>(col.size()); }
  std::vector<double> diagonal() const;
  double max_abs() const;
  // max_ij |A_ij - A_ji|; n^2-free symmetric scan.
  double asymmetry() const;
};

Csr csr_from_triplets(int n, std::vector<Triplet> triplets);

// C = A + alpha * B (same dimension, possibly different patterns).
Csr csr_add(const Csr& A, double alpha, const Csr& B);

}  // namespace naghdi
