#pragma once

#include <cmath>
#include <cstdint>
#include <sstream>

#include "wlest/estimators.hpp"
#include "wlest/random.hpp"

namespace wlest {

template <typename Scalar>
struct UnbiasednessReport {
  ComplexVectorX<Scalar> mean;
  /// mean - x
  ComplexVectorX<Scalar> bias;
  RealVectorX<Scalar> standard_error_re;
  RealVectorX<Scalar> standard_error_im;
  std::size_t trials = 0;

  /// |Re bias| <= k SE_re and |Im bias| <= k SE_im for every element.
  bool within_standard_errors(Scalar k) const {
    for (Eigen::Index i = 0; i < bias.size(); ++i) {
      if (std::abs(bias[i].real()) > k * standard_error_re[i]) return false;
      if (std::abs(bias[i].imag()) > k * standard_error_im[i]) return false;
    }
    return true;
  }
};

/// Empirical mean of `estimator(y)` over `trials` proper-noise draws of
/// y = H x + n with n ~ CN(0, C_nn). Trial t uses derive_stream(seed, 0, t).
template <typename Scalar, typename EstimatorFn>
UnbiasednessReport<Scalar> check_unbiasedness(
    EstimatorFn&& estimator, const ComplexMatrixX<Scalar>& h,
    const ComplexMatrixX<Scalar>& c_nn, const RealVectorX<Scalar>& x,
    std::size_t trials, std::uint64_t seed) {
  if (trials < 100) {
    throw ConfigurationError("check_unbiasedness needs at least 100 trials");
  }
  if (x.size() != h.cols()) {
    throw DimensionError("parameter vector does not match columns of H");
  }
  const ProperNoiseSampler<Scalar> noise(c_nn);
  const ComplexVectorX<Scalar> clean = h * x.template cast<std::complex<Scalar>>();
  const Eigen::Index n = x.size();

  RealVectorX<Scalar> sum_re = RealVectorX<Scalar>::Zero(n);
  RealVectorX<Scalar> sum_im = RealVectorX<Scalar>::Zero(n);
  RealVectorX<Scalar> sq_re = RealVectorX<Scalar>::Zero(n);
  RealVectorX<Scalar> sq_im = RealVectorX<Scalar>::Zero(n);
  for (std::size_t t = 0; t < trials; ++t) {
    auto rng = derive_stream(seed, 0, t);
    const ComplexVectorX<Scalar> y = clean + noise(rng);
    const ComplexVectorX<Scalar> x_hat = estimator(y).x_hat;
    if (x_hat.size() != n) {
      throw DimensionError("estimator returned a vector of the wrong length");
    }
    // Deviations from x keep the sums well scaled.
    const RealVectorX<Scalar> d_re = x_hat.real() - x;
    const RealVectorX<Scalar> d_im = x_hat.imag();
    sum_re += d_re;
    sum_im += d_im;
    sq_re += d_re.cwiseAbs2();
    sq_im += d_im.cwiseAbs2();
  }

  const Scalar count = static_cast<Scalar>(trials);
  UnbiasednessReport<Scalar> report;
  report.trials = trials;
  const RealVectorX<Scalar> bias_re = sum_re / count;
  const RealVectorX<Scalar> bias_im = sum_im / count;
  report.bias.resize(n);
  report.bias.real() = bias_re;
  report.bias.imag() = bias_im;
  report.mean = report.bias + x.template cast<std::complex<Scalar>>();
  const auto stderr_of = [&](const RealVectorX<Scalar>& sq,
                             const RealVectorX<Scalar>& mean) {
    RealVectorX<Scalar> var =
        (sq - count * mean.cwiseAbs2()) / (count - Scalar(1));
    return RealVectorX<Scalar>(
        (var.cwiseMax(Scalar(0)) / count).cwiseSqrt());
  };
  report.standard_error_re = stderr_of(sq_re, bias_re);
  report.standard_error_im = stderr_of(sq_im, bias_im);
  return report;
}

/// Convenience form for one of the named estimators on a proper-noise model.
template <typename Scalar>
UnbiasednessReport<Scalar> check_unbiasedness(
    Estimator which, const ComplexMatrixX<Scalar>& h,
    const ComplexMatrixX<Scalar>& c_nn, const RealVectorX<Scalar>& x,
    std::size_t trials, std::uint64_t seed) {
  const LinearModel<Scalar> model = make_proper_model(h, c_nn);
  return check_unbiasedness<Scalar>(
      [&](const ComplexVectorX<Scalar>& y) { return estimate(which, model, y); },
      h, c_nn, x, trials, seed);
}

}  // namespace wlest
