#pragma once

// Random instance generators shared by the unit and acceptance suites.

#include <cmath>
#include <complex>
#include <filesystem>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "wlest/augmented.hpp"

namespace wlest::testing {

using Rng = std::mt19937_64;
using cd = std::complex<double>;

inline ComplexMatrix random_complex(Rng& rng, Eigen::Index rows,
                                    Eigen::Index cols) {
  std::normal_distribution<double> n;
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = {n(rng), n(rng)};
  return m;
}

inline RealVector random_real(Rng& rng, Eigen::Index size) {
  std::normal_distribution<double> n;
  RealVector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v[i] = n(rng);
  return v;
}

/// Hermitian PD with eigenvalues log-spaced in [1, cond].
inline ComplexMatrix random_hpd(Rng& rng, Eigen::Index n, double cond = 100.0) {
  const ComplexMatrix g = random_complex(rng, n, n);
  const Eigen::HouseholderQR<ComplexMatrix> qr(g);
  const ComplexMatrix q = qr.householderQ();
  RealVector eig(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = n > 1 ? static_cast<double>(i) / (n - 1) : 0.0;
    eig[i] = std::pow(cond, t);
  }
  ComplexMatrix a = q * eig.cast<cd>().asDiagonal() * q.adjoint();
  return (a + a.adjoint()) / 2.0;
}

/// Complex-symmetric matrix with |entries| scaled by `scale`.
inline ComplexMatrix random_complex_symmetric(Rng& rng, Eigen::Index n,
                                              double scale) {
  const ComplexMatrix g = random_complex(rng, n, n);
  return scale * (g + g.transpose()) / 2.0;
}

/// Relative difference max|a - b| / max(max|b|, 1e-300).
template <typename A, typename B>
double rel_diff(const A& a, const B& b) {
  const double denom = std::max(max_abs(b), 1e-300);
  return max_abs(a - b) / denom;
}

inline std::filesystem::path tmp_dir(const std::string& name) {
  const std::filesystem::path dir =
      std::filesystem::path(WLEST_TEST_TMPDIR) / name;
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace wlest::testing
