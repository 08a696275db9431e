#include "wlest/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "wlest/random.hpp"

namespace wlest {

void SweepConfig::validate() const {
  const auto fail = [](const std::string& msg) {
    throw ConfigurationError("sweep config: " + msg);
  };
  if (dft_size <= 0 || dft_rows <= 0 || dft_cols <= 0) {
    fail("DFT dimensions must be positive");
  }
  if (dft_rows > dft_size || dft_cols > dft_size) {
    fail("DFT rows and cols must not exceed the DFT size");
  }
  if (dft_rows < dft_cols) fail("DFT rows must be at least DFT cols");
  if (!(sampling_time > 0.0) || !std::isfinite(sampling_time)) {
    fail("sampling time must be positive");
  }
  if (!(sigma2_min > 0.0) || !std::isfinite(sigma2_max)) {
    fail("sigma2 bounds must be positive and finite");
  }
  if (!(sigma2_min < sigma2_max)) fail("sigma2 min must be below max");
  if (sigma2_points == 0) fail("sigma2 points must be at least 1");
  if (trials == 0) fail("trials must be at least 1");
  if (estimators.empty()) fail("no estimators requested");
  for (std::size_t i = 0; i < estimators.size(); ++i) {
    for (std::size_t j = i + 1; j < estimators.size(); ++j) {
      if (estimators[i] == estimators[j]) {
        fail("estimator '" + std::string(estimator_name(estimators[i])) +
             "' listed twice");
      }
    }
  }
}

std::size_t BmseTable::column(Estimator e) const {
  const auto it = std::find(estimators.begin(), estimators.end(), e);
  if (it == estimators.end()) {
    throw ConfigurationError("estimator '" + std::string(estimator_name(e)) +
                             "' not in table");
  }
  return static_cast<std::size_t>(it - estimators.begin());
}

ComplexMatrix dft_measurement_matrix(Eigen::Index size, Eigen::Index rows,
                                     Eigen::Index cols, double sampling_time) {
  if (size <= 0 || rows <= 0 || cols <= 0 || rows > size || cols > size) {
    std::ostringstream os;
    os << "DFT block " << rows << "x" << cols << " does not fit a DFT of size "
       << size;
    throw DimensionError(os.str());
  }
  ComplexMatrix h(rows, cols);
  for (Eigen::Index n = 0; n < rows; ++n) {
    for (Eigen::Index k = 0; k < cols; ++k) {
      // Reduce n k modulo size so the phase stays exact for large indices.
      const auto nk = (n * k) % size;
      const double phase = -2.0 * std::numbers::pi * static_cast<double>(nk) /
                           static_cast<double>(size);
      h(n, k) = sampling_time * std::polar(1.0, phase);
    }
  }
  return h;
}

std::vector<double> sigma2_grid(const SweepConfig& config) {
  const std::size_t points = config.sigma2_points;
  std::vector<double> grid(points);
  if (points == 1) {
    grid[0] = config.sigma2_min;
    return grid;
  }
  const double span = static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / span;
    if (config.log_scale) {
      const double lo = std::log10(config.sigma2_min);
      const double hi = std::log10(config.sigma2_max);
      grid[i] = std::pow(10.0, lo + t * (hi - lo));
    } else {
      grid[i] = config.sigma2_min + t * (config.sigma2_max - config.sigma2_min);
    }
  }
  grid.front() = config.sigma2_min;
  grid.back() = config.sigma2_max;
  return grid;
}

LinearModel<double> sweep_model(const SweepConfig& config, double sigma2) {
  LinearModel<double> model;
  model.H = dft_measurement_matrix(config.dft_size, config.dft_rows,
                                   config.dft_cols, config.sampling_time);
  const Eigen::Index ny = model.H.rows();
  const Eigen::Index nx = model.H.cols();
  model.noise = AugmentedCovariance<double>::proper(
      sigma2 * ComplexMatrix::Identity(ny, ny));
  model.prior =
      AugmentedCovariance<double>::real(ComplexMatrix::Identity(nx, nx));
  return model;
}

namespace {

struct TrialFailure {
  std::size_t trial;
  ErrorKind kind;
  std::string message;
};

}  // namespace

BmseTable run_sweep(const SweepConfig& config) {
  config.validate();
  const std::vector<double> grid = sigma2_grid(config);
  const std::size_t n_est = config.estimators.size();
  const std::size_t trials = config.trials;

  unsigned workers = config.workers;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<std::size_t>(workers, trials));

  BmseTable table;
  table.estimators = config.estimators;
  table.rows.reserve(grid.size());

  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double sigma2 = grid[g];
    const LinearModel<double> model = sweep_model(config, sigma2);
    const ProperNoiseSampler<double> noise(model.noise.C);
    const RealPriorSampler<double> prior(model.prior->C);
    const double nx = static_cast<double>(model.parameters());

    // errors[t * n_est + j]: squared error of estimator j in trial t,
    // averaged over the parameter vector.
    std::vector<double> errors(trials * n_est);
    std::vector<std::optional<TrialFailure>> failures(workers);

    const auto work = [&](unsigned w) {
      for (std::size_t t = w; t < trials; t += workers) {
        try {
          auto rng = derive_stream(config.seed, g, t);
          const ComplexVector x = prior(rng);
          const ComplexVector y = model.H * x + noise(rng);
          for (std::size_t j = 0; j < n_est; ++j) {
            const ComplexVector x_hat =
                estimate(config.estimators[j], model, y).x_hat;
            errors[t * n_est + j] = (x_hat - x).squaredNorm() / nx;
          }
        } catch (const Error& e) {
          failures[w] = TrialFailure{t, e.kind(), e.what()};
          return;
        } catch (const std::exception& e) {
          failures[w] = TrialFailure{t, ErrorKind::Consistency, e.what()};
          return;
        }
      }
    };

    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      pool.reserve(workers);
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }

    // Report the earliest failing trial so the message is reproducible.
    const TrialFailure* first = nullptr;
    for (const auto& f : failures) {
      if (f && (!first || f->trial < first->trial)) first = &*f;
    }
    if (first) {
      std::ostringstream os;
      os << "sweep aborted at sigma2=" << sigma2 << ", trial " << first->trial
         << ": " << first->message;
      throw_error(first->kind, os.str());
    }

    BmseRow row;
    row.sigma2 = sigma2;
    row.bmse.assign(n_est, 0.0);
    row.standard_error.assign(n_est, 0.0);
    const double count = static_cast<double>(trials);
    for (std::size_t j = 0; j < n_est; ++j) {
      double sum = 0.0;
      for (std::size_t t = 0; t < trials; ++t) sum += errors[t * n_est + j];
      const double mean = sum / count;
      double sq = 0.0;
      for (std::size_t t = 0; t < trials; ++t) {
        const double d = errors[t * n_est + j] - mean;
        sq += d * d;
      }
      row.bmse[j] = mean;
      row.standard_error[j] =
          trials > 1 ? std::sqrt(sq / (count - 1.0) / count) : 0.0;
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

double analytic_bmse(const LinearModel<double>& model, Estimator which) {
  const ComplexVector zero = ComplexVector::Zero(model.measurements());
  const EstimateResult<double> result = estimate(which, model, zero);
  if (!result.covariance) {
    throw ConfigurationError("estimator '" +
                             std::string(estimator_name(which)) +
                             "' has no covariance");
  }
  return result.covariance->diagonal().real().mean();
}

double analytic_bmse(const ComplexMatrix& h, const ComplexMatrix& c_nn,
                     Estimator which) {
  return analytic_bmse(make_proper_model(h, c_nn), which);
}

double analytic_bmse(const ComplexMatrix& h, const ComplexMatrix& c_nn,
                     const std::string& name) {
  return analytic_bmse(h, c_nn, parse_estimator(name));
}

}  // namespace wlest
