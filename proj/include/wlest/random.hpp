#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "wlest/augmented.hpp"

namespace wlest {

using RandomStream = std::mt19937_64;

/// Independent stream for trial `trial` at grid point `grid`. Depends only on
/// the triple, so any assignment of trials to workers draws the same numbers.
inline RandomStream derive_stream(std::uint64_t seed, std::uint64_t grid,
                                  std::uint64_t trial) {
  const auto lo = [](std::uint64_t v) {
    return static_cast<std::uint32_t>(v & 0xffffffffu);
  };
  const auto hi = [](std::uint64_t v) {
    return static_cast<std::uint32_t>(v >> 32);
  };
  std::seed_seq seq{lo(seed), hi(seed), lo(grid), hi(grid), lo(trial),
                    hi(trial)};
  return RandomStream(seq);
}

/// Draws n = L g with L L^H = C_nn and g having i.i.d. entries
/// (g_re + i g_im) / sqrt(2), g_re, g_im standard normal.
template <typename Scalar>
class ProperNoiseSampler {
 public:
  explicit ProperNoiseSampler(const ComplexMatrixX<Scalar>& c_nn)
      : factor_(HpdFactor<std::complex<Scalar>>(c_nn, "noise covariance C_nn")
                    .lower()) {}

  Eigen::Index size() const { return factor_.rows(); }

  template <typename Urbg>
  ComplexVectorX<Scalar> operator()(Urbg& rng) const {
    std::normal_distribution<Scalar> normal;
    const Scalar scale = Scalar(1) / std::sqrt(Scalar(2));
    ComplexVectorX<Scalar> g(size());
    for (Eigen::Index i = 0; i < g.size(); ++i) {
      const Scalar re = normal(rng);
      const Scalar im = normal(rng);
      g[i] = std::complex<Scalar>(re * scale, im * scale);
    }
    return factor_.template triangularView<Eigen::Lower>() * g;
  }

 private:
  ComplexMatrixX<Scalar> factor_;
};

template <typename Scalar, typename Urbg>
ComplexVectorX<Scalar> sample_proper_noise(const ComplexMatrixX<Scalar>& c_nn,
                                           Urbg& rng) {
  return ProperNoiseSampler<Scalar>(c_nn)(rng);
}

/// Zero-mean real Gaussian vector with covariance C_xx (real symmetric PSD,
/// possibly singular), returned with exactly zero imaginary parts.
template <typename Scalar>
class RealPriorSampler {
 public:
  explicit RealPriorSampler(const ComplexMatrixX<Scalar>& c_xx) {
    require_square(c_xx, "prior covariance C_xx");
    require_finite(c_xx, "prior covariance C_xx");
    const Scalar scale =
        std::max<Scalar>(max_abs(c_xx), Scalar(kSymmetryAbsFloor));
    if (max_abs(c_xx.imag()) > Scalar(kSymmetryTolerance) * scale) {
      throw ValidationError("prior covariance C_xx must be real");
    }
    const RealMatrixX<Scalar> c = c_xx.real();
    require_hermitian(c, "prior covariance C_xx");
    const Eigen::LDLT<RealMatrixX<Scalar>> ldlt(c);
    RealVectorX<Scalar> d = ldlt.vectorD();
    if (d.size() > 0 && d.minCoeff() < -Scalar(kSymmetryTolerance) * scale) {
      throw ValidationError("prior covariance C_xx is not positive semi-definite");
    }
    d = d.cwiseMax(Scalar(0)).cwiseSqrt();
    // C = P^T L D L^T P, so P^T L D^{1/2} is a square-root factor.
    const RealMatrixX<Scalar> l = ldlt.matrixL();
    factor_ = ldlt.transpositionsP().transpose() * (l * d.asDiagonal());
    if (max_abs(RealMatrixX<Scalar>(factor_ * factor_.transpose()) - c) >
        Scalar(kSymmetryTolerance) * scale) {
      throw ValidationError("prior covariance C_xx is not positive semi-definite");
    }
  }

  Eigen::Index size() const { return factor_.rows(); }

  template <typename Urbg>
  ComplexVectorX<Scalar> operator()(Urbg& rng) const {
    std::normal_distribution<Scalar> normal;
    RealVectorX<Scalar> g(size());
    for (Eigen::Index i = 0; i < g.size(); ++i) g[i] = normal(rng);
    const RealVectorX<Scalar> x = factor_ * g;
    return x.template cast<std::complex<Scalar>>();
  }

 private:
  RealMatrixX<Scalar> factor_;
};

template <typename Scalar, typename Urbg>
ComplexVectorX<Scalar> sample_real_prior(const ComplexMatrixX<Scalar>& c_xx,
                                         Urbg& rng) {
  return RealPriorSampler<Scalar>(c_xx)(rng);
}

}  // namespace wlest
