#pragma once

// Linear and widely linear estimators for y = H x + n:
//   blue       (H^H C^-1 H)^-1 H^H C^-1 y
//   bwlue      the same on augmented quantities
//   wlmmse     C_xx H^H (H C_xx H^H + C_nn)^-1 y, augmented
//   re_blue    Re{blue}
//   rbwlue     widely linear, unbiased, real-valued output for real x under
//              proper noise: (Re{H^H C^-1 H})^-1 Re{H^H C^-1 y}

#include <array>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "wlest/augmented.hpp"
#include "wlest/linear_model.hpp"

namespace wlest {

/// Noise is treated as proper when every |C_tilde| entry is at most this.
inline constexpr double kPropernessTolerance = 1e-12;
/// Allowed mismatch between the bottom half of the augmented BWLUE estimate
/// and the conjugate of its top half, relative to max(1, |x|).
inline constexpr double kAugmentedConsistencyTolerance = 1e-8;

template <typename Scalar>
struct EstimateResult {
  ComplexVectorX<Scalar> x_hat;
  /// Estimator covariance; for wlmmse the Bayesian error covariance.
  std::optional<ComplexMatrixX<Scalar>> covariance;
};

/// x_hat = E y + F y*
template <typename Scalar>
struct WidelyLinearGains {
  ComplexMatrixX<Scalar> E;
  ComplexMatrixX<Scalar> F;

  ComplexVectorX<Scalar> apply(const ComplexVectorX<Scalar>& y) const {
    return E * y + F * y.conjugate();
  }
};

enum class Estimator { Blue, ReBlue, Bwlue, Wlmmse, Rbwlue };

inline constexpr std::array<Estimator, 5> kAllEstimators = {
    Estimator::Blue, Estimator::ReBlue, Estimator::Bwlue, Estimator::Wlmmse,
    Estimator::Rbwlue};

/// Column/header name: blue, re_blue, bwlue, wlmmse, rbwlue.
constexpr std::string_view estimator_name(Estimator e) {
  switch (e) {
    case Estimator::Blue:
      return "blue";
    case Estimator::ReBlue:
      return "re_blue";
    case Estimator::Bwlue:
      return "bwlue";
    case Estimator::Wlmmse:
      return "wlmmse";
    case Estimator::Rbwlue:
      return "rbwlue";
  }
  return "?";
}

/// Accepts the header names and the hyphenated CLI spelling `re-blue`.
inline Estimator parse_estimator(std::string_view name) {
  if (name == "re-blue") return Estimator::ReBlue;
  for (Estimator e : kAllEstimators) {
    if (estimator_name(e) == name) return e;
  }
  throw ConfigurationError("unknown estimator '" + std::string(name) +
                           "' (expected blue, re-blue, bwlue, wlmmse or "
                           "rbwlue)");
}

namespace detail {

template <typename MatScalar>
using Mat = Eigen::Matrix<MatScalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename MatScalar>
using Vec = Eigen::Matrix<MatScalar, Eigen::Dynamic, 1>;

template <typename MatScalar>
struct GaussMarkov {
  Vec<MatScalar> estimate;
  Mat<MatScalar> covariance;
};

/// (H^H C^-1 H)^-1 H^H C^-1 y through a whitened model. Works for real and
/// complex scalars alike.
template <typename MatScalar>
GaussMarkov<MatScalar> gauss_markov(const Mat<MatScalar>& h,
                                    const Mat<MatScalar>& c,
                                    const Vec<MatScalar>& y,
                                    std::string_view noise_name,
                                    std::string_view info_name) {
  if (c.rows() != h.rows() || y.size() != h.rows()) {
    std::ostringstream os;
    os << "inconsistent dimensions: H " << h.rows() << "x" << h.cols()
       << ", C " << c.rows() << "x" << c.cols() << ", y " << y.size();
    throw DimensionError(os.str());
  }
  const HpdFactor<MatScalar> noise(c, noise_name, ErrorKind::Singularity);
  const Mat<MatScalar> w = noise.whiten(h);
  const Vec<MatScalar> z = noise.whiten(y);
  const Mat<MatScalar> info = w.adjoint() * w;
  const HpdFactor<MatScalar> info_factor(info, info_name, ErrorKind::Rank);
  return {info_factor.solve(w.adjoint() * z), info_factor.inverse()};
}

/// Re{H^H C^-1 H} and Re{H^H C^-1 y}.
template <typename Scalar>
struct RealNormalEquations {
  RealMatrixX<Scalar> lhs;
  RealVectorX<Scalar> rhs;
};

template <typename Scalar>
RealMatrixX<Scalar> real_information(const ComplexMatrixX<Scalar>& h,
                                     const ComplexMatrixX<Scalar>& c_nn) {
  if (c_nn.rows() != h.rows()) {
    throw DimensionError("noise covariance does not match rows of H");
  }
  const HpdFactor<std::complex<Scalar>> noise(c_nn, "noise covariance C_nn");
  const ComplexMatrixX<Scalar> w = noise.whiten(h);
  return (w.adjoint() * w).real();
}

template <typename Scalar>
RealNormalEquations<Scalar> real_normal_equations(
    const ComplexMatrixX<Scalar>& h, const ComplexMatrixX<Scalar>& c_nn,
    const ComplexVectorX<Scalar>& y) {
  if (c_nn.rows() != h.rows() || y.size() != h.rows()) {
    std::ostringstream os;
    os << "inconsistent dimensions: H " << h.rows() << "x" << h.cols()
       << ", C_nn " << c_nn.rows() << "x" << c_nn.cols() << ", y "
       << y.size();
    throw DimensionError(os.str());
  }
  const HpdFactor<std::complex<Scalar>> noise(c_nn, "noise covariance C_nn");
  const ComplexMatrixX<Scalar> w = noise.whiten(h);
  const ComplexVectorX<Scalar> z = noise.whiten(y);
  return {(w.adjoint() * w).real(), (w.adjoint() * z).real()};
}

template <typename Scalar>
struct WlmmseSolution {
  WidelyLinearGains<Scalar> gains;
  ComplexMatrixX<Scalar> error_covariance;
};

// Innovation form only: the augmented prior covariance is singular for
// real x, so no information-form shortcut is available.
template <typename Scalar>
WlmmseSolution<Scalar> wlmmse_solution(const LinearModel<Scalar>& model) {
  if (!model.prior) {
    throw ConfigurationError("wlmmse requires a prior (C_xx, C_tilde_xx)");
  }
  const Eigen::Index nx = model.parameters();
  const Eigen::Index ny = model.measurements();
  if (model.prior->size() != nx || model.noise.size() != ny) {
    throw DimensionError("prior or noise covariance does not match H");
  }
  const ComplexMatrixX<Scalar> aug_h = augment_model_matrix(model.H);
  const ComplexMatrixX<Scalar> aug_cxx = model.prior->assemble();
  const ComplexMatrixX<Scalar> aug_cnn = model.noise.assemble();
  const ComplexMatrixX<Scalar> h_cxx = aug_h * aug_cxx;
  const ComplexMatrixX<Scalar> innovation =
      h_cxx * aug_h.adjoint() + aug_cnn;
  const HpdFactor<std::complex<Scalar>> factor(
      innovation, "innovation matrix H C_xx H^H + C_nn (augmented)");
  // gain^H = S^-1 H C_xx, using Hermitian S and C_xx.
  const ComplexMatrixX<Scalar> gain = factor.solve(h_cxx).adjoint();

  WlmmseSolution<Scalar> out;
  out.gains.E = gain.topLeftCorner(nx, ny);
  out.gains.F = gain.topRightCorner(nx, ny);
  const ComplexMatrixX<Scalar> aug_error = aug_cxx - gain * h_cxx;
  out.error_covariance = aug_error.topLeftCorner(nx, nx);
  return out;
}

}  // namespace detail

template <typename Scalar>
EstimateResult<Scalar> blue(const LinearModel<Scalar>& model,
                            const ComplexVectorX<Scalar>& y) {
  require_measurements(model, y);
  auto gm = detail::gauss_markov<std::complex<Scalar>>(
      model.H, model.noise.C, y, "noise covariance C_nn",
      "information matrix H^H C_nn^-1 H (H rank deficient?)");
  return {std::move(gm.estimate), std::move(gm.covariance)};
}

template <typename Scalar>
EstimateResult<Scalar> bwlue(const LinearModel<Scalar>& model,
                             const ComplexVectorX<Scalar>& y) {
  require_measurements(model, y);
  const Eigen::Index nx = model.parameters();
  auto gm = detail::gauss_markov<std::complex<Scalar>>(
      augment_model_matrix(model.H), model.noise.assemble(),
      augment_vector(y), "augmented noise covariance",
      "augmented information matrix (H rank deficient?)");

  const auto top = gm.estimate.head(nx);
  const Scalar dev = max_abs(gm.estimate.tail(nx) - top.conjugate());
  const Scalar scale = std::max<Scalar>(Scalar(1), max_abs(top));
  if (dev > Scalar(kAugmentedConsistencyTolerance) * scale) {
    std::ostringstream os;
    os << "augmented estimate is not conjugate-consistent (deviation " << dev
       << ")";
    throw ConsistencyError(os.str());
  }
  return {top, ComplexMatrixX<Scalar>(gm.covariance.topLeftCorner(nx, nx))};
}

template <typename Scalar>
WidelyLinearGains<Scalar> wlmmse_gains(const LinearModel<Scalar>& model) {
  return detail::wlmmse_solution(model).gains;
}

template <typename Scalar>
EstimateResult<Scalar> wlmmse(const LinearModel<Scalar>& model,
                              const ComplexVectorX<Scalar>& y) {
  require_measurements(model, y);
  auto sol = detail::wlmmse_solution(model);
  return {sol.gains.apply(y), std::move(sol.error_covariance)};
}

/// E = (H^H C^-1 H + H^T (C^-1)* H*)^-1 H^H C^-1. The complete widely linear
/// gain pair is (E, E*).
template <typename Scalar>
ComplexMatrixX<Scalar> rbwlue_gain(const ComplexMatrixX<Scalar>& h,
                                   const ComplexMatrixX<Scalar>& c_nn) {
  if (c_nn.rows() != h.rows()) {
    throw DimensionError("noise covariance does not match rows of H");
  }
  const HpdFactor<std::complex<Scalar>> noise(c_nn, "noise covariance C_nn");
  const ComplexMatrixX<Scalar> cinv_h = noise.solve(h);
  const ComplexMatrixX<Scalar> a = h.adjoint() * cinv_h;
  const RealMatrixX<Scalar> sum = (a + a.conjugate()).real();
  const HpdFactor<Scalar> factor(sum, "2 Re{H^H C_nn^-1 H}");
  const ComplexMatrixX<Scalar> rhs = cinv_h.adjoint();
  ComplexMatrixX<Scalar> e(h.cols(), h.rows());
  e.real() = factor.solve(rhs.real());
  e.imag() = factor.solve(rhs.imag());
  return e;
}

/// (2 Re{H^H C^-1 H})^-1; real, symmetric, positive definite.
template <typename Scalar>
ComplexMatrixX<Scalar> rbwlue_covariance(const ComplexMatrixX<Scalar>& h,
                                         const ComplexMatrixX<Scalar>& c_nn) {
  const HpdFactor<Scalar> factor(detail::real_information(h, c_nn),
                                 "Re{H^H C_nn^-1 H}");
  const RealMatrixX<Scalar> cov = Scalar(0.5) * factor.inverse();
  return cov.template cast<std::complex<Scalar>>();
}

/// Compact real-arithmetic form; the imaginary part of x_hat is exactly 0.
/// Assumes proper noise with covariance C_nn.
template <typename Scalar>
EstimateResult<Scalar> rbwlue(const ComplexMatrixX<Scalar>& h,
                              const ComplexMatrixX<Scalar>& c_nn,
                              const ComplexVectorX<Scalar>& y) {
  require_finite(y, "measurement vector y");
  const auto normal = detail::real_normal_equations(h, c_nn, y);
  const HpdFactor<Scalar> factor(normal.lhs, "Re{H^H C_nn^-1 H}");
  const RealVectorX<Scalar> x = factor.solve(normal.rhs);
  // (2 M)^-1 = M^-1 / 2; halving is exact.
  const RealMatrixX<Scalar> cov = Scalar(0.5) * factor.inverse();
  return {x.template cast<std::complex<Scalar>>(),
          cov.template cast<std::complex<Scalar>>()};
}

/// Model-level entry point; rejects improper noise.
template <typename Scalar>
EstimateResult<Scalar> rbwlue(const LinearModel<Scalar>& model,
                              const ComplexVectorX<Scalar>& y) {
  require_measurements(model, y);
  if (!model.has_proper_noise(Scalar(kPropernessTolerance))) {
    std::ostringstream os;
    os << "rbwlue requires proper noise; max |C_tilde_nn| = "
       << max_abs(model.noise.Ct);
    throw ValidationError(os.str());
  }
  return rbwlue(model.H, model.noise.C, y);
}

/// Elementwise real part of the BLUE. The attached covariance is that of
/// Re{x_hat}: 1/2 Re{C_blue + B C_tilde_nn B^T} with B the BLUE gain.
template <typename Scalar>
EstimateResult<Scalar> re_blue(const LinearModel<Scalar>& model,
                               const ComplexVectorX<Scalar>& y) {
  EstimateResult<Scalar> b = blue(model, y);
  ComplexMatrixX<Scalar> cov = *b.covariance;
  if (!model.has_proper_noise(Scalar(0))) {
    const HpdFactor<std::complex<Scalar>> noise(model.noise.C,
                                                "noise covariance C_nn");
    const ComplexMatrixX<Scalar> gain =
        cov * noise.solve(model.H).adjoint();
    cov += gain * model.noise.Ct * gain.transpose();
  }
  const RealMatrixX<Scalar> re_cov = Scalar(0.5) * cov.real();
  return {b.x_hat.real().template cast<std::complex<Scalar>>(),
          re_cov.template cast<std::complex<Scalar>>()};
}

/// BLUE on the stacked real model [Re y; Im y] = [Re H; Im H] x + [Re n; Im n]
/// with the covariance of [Re n; Im n] for proper n,
/// 1/2 [[Re C, -Im C], [Im C, Re C]].
template <typename Scalar>
EstimateResult<Scalar> real_model_blue(const ComplexMatrixX<Scalar>& h,
                                       const ComplexMatrixX<Scalar>& c_nn,
                                       const ComplexVectorX<Scalar>& y) {
  const Eigen::Index ny = h.rows();
  const Eigen::Index nx = h.cols();
  if (c_nn.rows() != ny || c_nn.cols() != ny || y.size() != ny) {
    throw DimensionError("real_model_blue: inconsistent dimensions");
  }
  RealMatrixX<Scalar> stacked_h(2 * ny, nx);
  stacked_h << h.real(), h.imag();
  RealVectorX<Scalar> stacked_y(2 * ny);
  stacked_y << y.real(), y.imag();
  RealMatrixX<Scalar> stacked_c(2 * ny, 2 * ny);
  stacked_c << c_nn.real(), -c_nn.imag(), c_nn.imag(), c_nn.real();
  stacked_c *= Scalar(0.5);

  auto gm = detail::gauss_markov<Scalar>(
      stacked_h, stacked_c, stacked_y, "stacked real noise covariance",
      "stacked real information matrix");
  return {gm.estimate.template cast<std::complex<Scalar>>(),
          gm.covariance.template cast<std::complex<Scalar>>()};
}

template <typename Scalar>
EstimateResult<Scalar> estimate(Estimator which,
                                const LinearModel<Scalar>& model,
                                const ComplexVectorX<Scalar>& y) {
  switch (which) {
    case Estimator::Blue:
      return blue(model, y);
    case Estimator::ReBlue:
      return re_blue(model, y);
    case Estimator::Bwlue:
      return bwlue(model, y);
    case Estimator::Wlmmse:
      return wlmmse(model, y);
    case Estimator::Rbwlue:
      return rbwlue(model, y);
  }
  throw ConfigurationError("unknown estimator");
}

}  // namespace wlest
