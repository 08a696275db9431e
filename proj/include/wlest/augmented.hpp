#pragma once

// Augmented complex algebra: [a; a*] stacking, the block-diagonal model
// matrix, augmented covariance assembly and the Hermitian PD factorization
// every estimator solves through.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "wlest/errors.hpp"

namespace wlest {

template <typename Scalar>
using ComplexMatrixX =
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using ComplexVectorX = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <typename Scalar>
using RealMatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using RealVectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using ComplexMatrix = ComplexMatrixX<double>;
using ComplexVector = ComplexVectorX<double>;
using RealMatrix = RealMatrixX<double>;
using RealVector = RealVectorX<double>;

/// Relative slack for Hermitian / complex-symmetric checks.
inline constexpr double kSymmetryTolerance = 1e-10;
/// Absolute floor on the reference magnitude of a symmetry check.
inline constexpr double kSymmetryAbsFloor = 1e-300;
/// Smallest accepted squared Cholesky pivot relative to the largest diagonal.
inline constexpr double kPivotFloor = 1e-13;

[[noreturn]] inline void throw_error(ErrorKind kind, const std::string& what) {
  switch (kind) {
    case ErrorKind::Usage:
      throw UsageError(what);
    case ErrorKind::Dimension:
      throw DimensionError(what);
    case ErrorKind::Validation:
      throw ValidationError(what);
    case ErrorKind::Parse:
      throw ParseError(what);
    case ErrorKind::Configuration:
      throw ConfigurationError(what);
    case ErrorKind::Singularity:
      throw SingularityError(what);
    case ErrorKind::Rank:
      throw RankError(what);
    case ErrorKind::Consistency:
      throw ConsistencyError(what);
  }
  throw Error(kind, what);
}

template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return typename Derived::RealScalar(0);
  return m.cwiseAbs().maxCoeff();
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m,
                    std::string_view what) {
  if (!m.allFinite()) {
    throw ValidationError(std::string(what) + " contains non-finite entries");
  }
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& m,
                    std::string_view what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << " must be square, got " << m.rows() << "x" << m.cols();
    throw DimensionError(os.str());
  }
}

/// Largest |A - A^H| entry.
template <typename Derived>
typename Derived::RealScalar hermitian_deviation(
    const Eigen::MatrixBase<Derived>& a) {
  return max_abs(a - a.adjoint());
}

/// Largest |A - A^T| entry.
template <typename Derived>
typename Derived::RealScalar symmetric_deviation(
    const Eigen::MatrixBase<Derived>& a) {
  return max_abs(a - a.transpose());
}

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& a,
                       std::string_view what) {
  require_square(a, what);
  using Real = typename Derived::RealScalar;
  const Real dev = hermitian_deviation(a);
  const Real scale = std::max<Real>(max_abs(a), Real(kSymmetryAbsFloor));
  if (dev > Real(kSymmetryTolerance) * scale) {
    std::ostringstream os;
    os << what << " is not Hermitian (max |A - A^H| = " << dev << ")";
    throw ValidationError(os.str());
  }
}

template <typename Derived>
void require_complex_symmetric(const Eigen::MatrixBase<Derived>& a,
                               std::string_view what) {
  require_square(a, what);
  using Real = typename Derived::RealScalar;
  const Real dev = symmetric_deviation(a);
  const Real scale = std::max<Real>(max_abs(a), Real(kSymmetryAbsFloor));
  if (dev > Real(kSymmetryTolerance) * scale) {
    std::ostringstream os;
    os << what << " is not complex-symmetric (max |A - A^T| = " << dev << ")";
    throw ValidationError(os.str());
  }
}

/// Positive semi-definiteness via pivoted LDL^H; D may dip below zero only
/// by rounding slack.
template <typename Derived>
void require_psd(const Eigen::MatrixBase<Derived>& a, std::string_view what) {
  using Real = typename Derived::RealScalar;
  using Plain = typename Derived::PlainObject;
  if (a.size() == 0) return;
  const Eigen::LDLT<Plain> ldlt(a.derived());
  const Real scale = max_abs(a);
  const Real min_d = ldlt.vectorD().real().minCoeff();
  // A zero pivot with a nonzero column below it is reported as a numerical
  // issue even for PSD input, so judge by pivots and reconstruction instead.
  const Real residual = max_abs(ldlt.reconstructedMatrix() - a);
  if (min_d < -Real(kSymmetryTolerance) * scale ||
      residual > Real(kSymmetryTolerance) * scale) {
    std::ostringstream os;
    os << what << " is not positive semi-definite (min pivot " << min_d
       << ")";
    throw ValidationError(os.str());
  }
}

/// [a; a*]
template <typename Derived>
ComplexVectorX<typename Derived::RealScalar> augment_vector(
    const Eigen::MatrixBase<Derived>& a) {
  using Real = typename Derived::RealScalar;
  static_assert(Derived::ColsAtCompileTime == 1 ||
                    Derived::ColsAtCompileTime == Eigen::Dynamic,
                "augment_vector expects a column vector");
  if (a.size() == 0) throw DimensionError("augment_vector: empty input");
  if (a.cols() != 1) throw DimensionError("augment_vector: expected a column");
  require_finite(a, "augment_vector input");
  const Eigen::Index n = a.rows();
  ComplexVectorX<Real> out(2 * n);
  out.head(n) = a.template cast<std::complex<Real>>();
  out.tail(n) = out.head(n).conjugate();
  return out;
}

/// Block diagonal [[H, 0], [0, H*]].
template <typename Derived>
ComplexMatrixX<typename Derived::RealScalar> augment_model_matrix(
    const Eigen::MatrixBase<Derived>& h) {
  using Real = typename Derived::RealScalar;
  require_finite(h, "model matrix H");
  const Eigen::Index m = h.rows();
  const Eigen::Index n = h.cols();
  ComplexMatrixX<Real> out = ComplexMatrixX<Real>::Zero(2 * m, 2 * n);
  out.topLeftCorner(m, n) = h.template cast<std::complex<Real>>();
  out.bottomRightCorner(m, n) = out.topLeftCorner(m, n).conjugate();
  return out;
}

/// [[C, Ct], [Ct*, C*]]. Hermitian by construction once C is Hermitian and
/// Ct is complex-symmetric; both are checked.
template <typename DerivedC, typename DerivedT>
ComplexMatrixX<typename DerivedC::RealScalar> assemble_augmented_covariance(
    const Eigen::MatrixBase<DerivedC>& c,
    const Eigen::MatrixBase<DerivedT>& ct) {
  using Real = typename DerivedC::RealScalar;
  require_square(c, "covariance block C");
  require_square(ct, "complementary covariance block C_tilde");
  if (c.rows() != ct.rows()) {
    std::ostringstream os;
    os << "covariance blocks differ in size: C is " << c.rows()
       << ", C_tilde is " << ct.rows();
    throw DimensionError(os.str());
  }
  require_finite(c, "covariance block C");
  require_finite(ct, "complementary covariance block C_tilde");
  require_hermitian(c, "covariance block C");
  require_complex_symmetric(ct, "complementary covariance block C_tilde");

  const Eigen::Index n = c.rows();
  ComplexMatrixX<Real> out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = c.template cast<std::complex<Real>>();
  out.topRightCorner(n, n) = ct.template cast<std::complex<Real>>();
  out.bottomLeftCorner(n, n) = out.topRightCorner(n, n).conjugate();
  out.bottomRightCorner(n, n) = out.topLeftCorner(n, n).conjugate();
  return out;
}

/// True iff every entry of the complementary covariance is within `tol`.
template <typename Derived>
bool is_proper(const Eigen::MatrixBase<Derived>& ct,
               typename Derived::RealScalar tol) {
  require_square(ct, "complementary covariance");
  return max_abs(ct) <= tol;
}

/// Second-order description (C, C_tilde) of a complex random vector.
template <typename Scalar>
struct AugmentedCovariance {
  ComplexMatrixX<Scalar> C;
  ComplexMatrixX<Scalar> Ct;

  static AugmentedCovariance proper(ComplexMatrixX<Scalar> c) {
    const Eigen::Index n = c.rows();
    return {std::move(c), ComplexMatrixX<Scalar>::Zero(n, n)};
  }

  /// Real random vector: C_tilde equals C.
  static AugmentedCovariance real(const ComplexMatrixX<Scalar>& c) {
    return {c, c};
  }

  Eigen::Index size() const { return C.rows(); }

  bool is_proper(Scalar tol) const { return wlest::is_proper(Ct, tol); }

  ComplexMatrixX<Scalar> assemble() const {
    return assemble_augmented_covariance(C, Ct);
  }

  /// Hermitian C, complex-symmetric Ct, PSD augmented matrix.
  void validate(std::string_view what) const {
    const ComplexMatrixX<Scalar> aug = assemble();
    require_psd(aug, std::string(what) + " augmented covariance");
  }
};

/// Cholesky factor of a Hermitian positive definite matrix. Failure to
/// factor (non-positive or negligible pivot) raises `on_failure`.
template <typename MatScalar>
class HpdFactor {
 public:
  using Matrix = Eigen::Matrix<MatScalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Real = typename Eigen::NumTraits<MatScalar>::Real;

  template <typename Derived>
  HpdFactor(const Eigen::MatrixBase<Derived>& a, std::string_view what,
            ErrorKind on_failure = ErrorKind::Singularity) {
    require_square(a, what);
    if (a.rows() == 0) throw DimensionError(std::string(what) + " is empty");
    require_finite(a, what);
    require_hermitian(a, what);
    llt_.compute(a.derived());
    bool ok = llt_.info() == Eigen::Success;
    if (ok) {
      const Real max_diag = a.diagonal().real().cwiseAbs().maxCoeff();
      const auto pivots = llt_.matrixLLT().diagonal().real();
      const Real min_pivot2 = pivots.cwiseAbs2().minCoeff();
      ok = max_diag > Real(0) && min_pivot2 > Real(kPivotFloor) * max_diag;
    }
    if (!ok) {
      throw_error(on_failure,
                  std::string(what) + " is singular or not positive definite");
    }
  }

  Eigen::Index size() const { return llt_.rows(); }

  /// A^{-1} B
  template <typename Rhs>
  auto solve(const Eigen::MatrixBase<Rhs>& b) const {
    check_rows(b.rows());
    return llt_.solve(b.derived()).eval();
  }

  /// L^{-1} B, with A = L L^H.
  template <typename Rhs>
  auto whiten(const Eigen::MatrixBase<Rhs>& b) const {
    check_rows(b.rows());
    return llt_.matrixL().solve(b.derived()).eval();
  }

  Matrix inverse() const {
    return llt_.solve(Matrix::Identity(size(), size()));
  }

  Matrix lower() const { return llt_.matrixL(); }

 private:
  void check_rows(Eigen::Index rows) const {
    if (rows != size()) {
      std::ostringstream os;
      os << "right-hand side has " << rows << " rows, expected " << size();
      throw DimensionError(os.str());
    }
  }

  Eigen::LLT<Matrix> llt_;
};

/// X with A X = B for Hermitian positive definite A.
template <typename DerivedA, typename DerivedB>
auto hermitian_pd_solve(const Eigen::MatrixBase<DerivedA>& a,
                        const Eigen::MatrixBase<DerivedB>& b) {
  using MatScalar = typename DerivedA::Scalar;
  const HpdFactor<MatScalar> factor(a, "hermitian_pd_solve matrix");
  return factor.solve(b);
}

}  // namespace wlest
