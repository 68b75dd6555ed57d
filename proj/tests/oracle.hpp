#pragma once

// Dense reference implementations used only by tests. These recompute kernel
// iterates, Dirichlet restrictions and Green sums with Eigen matrices, fully
// independent of the sparse CSR path in the library.

#include <Eigen/Dense>

#include "heatlab/kernel.hpp"

namespace heatlab::test_oracle {

struct Dense {
  Eigen::MatrixXd A;  // densities p(x,y)
  Eigen::VectorXd m;

  explicit Dense(const Kernel& k) {
    int n = k.size();
    A = Eigen::MatrixXd::Zero(n, n);
    m = Eigen::VectorXd(n);
    for (int i = 0; i < n; ++i) {
      m(i) = k.m[i];
      for (int t = k.row_ptr[i]; t < k.row_ptr[i + 1]; ++t) A(i, k.col[t]) = k.val[t];
    }
  }

  // density matrix of p_steps
  Eigen::MatrixXd power(int steps) const {
    Eigen::MatrixXd P = A;
    for (int s = 1; s < steps; ++s) P = P * m.asDiagonal() * A;
    return P;
  }

  Eigen::VectorXd apply(const Eigen::VectorXd& f) const { return A * m.asDiagonal() * f; }

  // restriction to a point subset (global indices)
  Dense restricted(const std::vector<int>& pts) const {
    Dense d(*this);
    int nb = static_cast<int>(pts.size());
    Eigen::MatrixXd B(nb, nb);
    Eigen::VectorXd mb(nb);
    for (int i = 0; i < nb; ++i) {
      mb(i) = m(pts[i]);
      for (int j = 0; j < nb; ++j) B(i, j) = A(pts[i], pts[j]);
    }
    d.A = B;
    d.m = mb;
    return d;
  }

  // G = sum_{k>=1} densities of p_k^B = (I - A D)^{-1} A
  Eigen::MatrixXd green_dirichlet() const {
    int n = static_cast<int>(m.size());
    Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
    return (I - A * m.asDiagonal()).partialPivLu().solve(A);
  }

  // h_n = 2^{-n} sum_i binom(n,i) p_{i+2}, evaluated directly
  Eigen::MatrixXd hk_binomial(int n) const {
    int N = static_cast<int>(m.size());
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(N, N);
    Eigen::MatrixXd p = power(2);
    double coef = std::pow(0.5, n);
    std::vector<double> binoms(n + 1);
    binoms[0] = 1;
    for (int i = 1; i <= n; ++i) binoms[i] = binoms[i - 1] * (n - i + 1) / i;
    for (int i = 0; i <= n; ++i) {
      acc += coef * binoms[i] * p;
      if (i < n) p = p * m.asDiagonal() * A;
    }
    return acc;
  }
};

}  // namespace heatlab::test_oracle
