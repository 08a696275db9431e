#pragma once

// Impulse-response experiment: y = Ts H x + n with H a block of a DFT
// matrix, x ~ N(0, I) real, n proper with C_nn = sigma^2 I. The sweep
// reports average BMSE per estimator over a sigma^2 grid.

#include <cstdint>
#include <string>
#include <vector>

#include "wlest/estimators.hpp"
#include "wlest/linear_model.hpp"

namespace wlest {

struct SweepConfig {
  Eigen::Index dft_size = 40;
  Eigen::Index dft_rows = 20;
  Eigen::Index dft_cols = 5;
  double sampling_time = 1.0;
  double sigma2_min = 1e-3;
  double sigma2_max = 1e2;
  std::size_t sigma2_points = 11;
  bool log_scale = true;
  std::size_t trials = 2000;
  std::uint64_t seed = 12345;
  std::vector<Estimator> estimators{kAllEstimators.begin(),
                                    kAllEstimators.end()};
  /// Worker threads; 0 picks the hardware concurrency. Results do not
  /// depend on this value.
  unsigned workers = 0;

  void validate() const;
};

struct BmseRow {
  double sigma2 = 0.0;
  /// Average BMSE per estimator, in SweepConfig::estimators order.
  std::vector<double> bmse;
  /// Standard error of each BMSE value over trials.
  std::vector<double> standard_error;
};

struct BmseTable {
  std::vector<Estimator> estimators;
  std::vector<BmseRow> rows;

  /// Column index of `e`; throws ConfigurationError if absent.
  std::size_t column(Estimator e) const;
};

/// entry(n, k) = Ts exp(-i 2 pi n k / size), n < rows, k < cols.
ComplexMatrix dft_measurement_matrix(Eigen::Index size, Eigen::Index rows,
                                     Eigen::Index cols, double sampling_time);

/// sigma2_points values from sigma2_min to sigma2_max inclusive.
std::vector<double> sigma2_grid(const SweepConfig& config);

/// Model at one grid point: H = Ts * DFT block, C_nn = sigma^2 I proper,
/// prior C_xx = C_tilde_xx = I.
LinearModel<double> sweep_model(const SweepConfig& config, double sigma2);

/// Deterministic for a fixed config regardless of `config.workers`.
BmseTable run_sweep(const SweepConfig& config);

/// Mean of the diagonal of the estimator's (error) covariance.
double analytic_bmse(const LinearModel<double>& model, Estimator which);
/// Proper noise, no prior; wlmmse is therefore rejected.
double analytic_bmse(const ComplexMatrix& h, const ComplexMatrix& c_nn,
                     Estimator which);
double analytic_bmse(const ComplexMatrix& h, const ComplexMatrix& c_nn,
                     const std::string& estimator_name);

}  // namespace wlest
