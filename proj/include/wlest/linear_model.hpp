#pragma once

#include <optional>
#include <sstream>
#include <utility>

#include "wlest/augmented.hpp"

namespace wlest {

/// y = H x + n, with second-order noise statistics and an optional zero-mean
/// prior on x.
template <typename Scalar>
struct LinearModel {
  ComplexMatrixX<Scalar> H;
  AugmentedCovariance<Scalar> noise;
  std::optional<AugmentedCovariance<Scalar>> prior;

  Eigen::Index measurements() const { return H.rows(); }
  Eigen::Index parameters() const { return H.cols(); }

  bool has_proper_noise(Scalar tol) const { return noise.is_proper(tol); }

  /// Shape and symmetry checks. Invertibility is left to the estimators,
  /// which detect it through factorization.
  void validate() const {
    if (H.rows() == 0 || H.cols() == 0) {
      throw DimensionError("model matrix H is empty");
    }
    require_finite(H, "model matrix H");
    if (H.rows() < H.cols()) {
      std::ostringstream os;
      os << "model matrix H is " << H.rows() << "x" << H.cols()
         << "; need at least as many measurements as parameters";
      throw DimensionError(os.str());
    }
    if (noise.C.rows() != H.rows() || noise.Ct.rows() != H.rows()) {
      std::ostringstream os;
      os << "noise covariance must be " << H.rows() << "x" << H.rows();
      throw DimensionError(os.str());
    }
    noise.validate("noise");
    if (prior) {
      if (prior->C.rows() != H.cols() || prior->Ct.rows() != H.cols()) {
        std::ostringstream os;
        os << "prior covariance must be " << H.cols() << "x" << H.cols();
        throw DimensionError(os.str());
      }
      prior->validate("prior");
    }
  }
};

/// Model with proper noise C_nn and no prior.
template <typename Scalar>
LinearModel<Scalar> make_proper_model(ComplexMatrixX<Scalar> h,
                                      ComplexMatrixX<Scalar> c_nn) {
  return {std::move(h), AugmentedCovariance<Scalar>::proper(std::move(c_nn)),
          std::nullopt};
}

template <typename Scalar>
void require_measurements(const LinearModel<Scalar>& model,
                          const ComplexVectorX<Scalar>& y) {
  if (y.size() != model.measurements()) {
    std::ostringstream os;
    os << "measurement vector has " << y.size() << " elements, model expects "
       << model.measurements();
    throw DimensionError(os.str());
  }
  require_finite(y, "measurement vector y");
}

}  // namespace wlest
