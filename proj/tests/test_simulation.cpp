#include <doctest.h>

#include <numbers>

#include "test_support.hpp"
#include "wlest/random.hpp"
#include "wlest/simulation.hpp"

using namespace wlest;
using wlest::testing::cd;

namespace {

SweepConfig small_config() {
  SweepConfig config;
  config.sigma2_points = 4;
  config.trials = 200;
  config.seed = 99;
  return config;
}

}  // namespace

TEST_SUITE("simulation") {
  TEST_CASE("dft_measurement_matrix") {
    const ComplexMatrix h = dft_measurement_matrix(16, 9, 4, 2.5);
    CHECK((h.row(0).array() == cd(2.5)).all());
    CHECK((h.col(0).array() == cd(2.5)).all());

    const ComplexMatrix paper = dft_measurement_matrix(40, 20, 5, 1.0);
    CHECK(paper.rows() == 20);
    CHECK(paper.cols() == 5);
    CHECK((paper.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-15);
    for (Eigen::Index k = 0; k < 5; ++k) {
      CHECK(std::abs(paper.col(k).norm() - std::sqrt(20.0)) < 1e-13);
    }
    const cd expected = std::exp(cd(0.0, -std::numbers::pi / 20.0));
    CHECK(std::abs(paper(1, 1) - expected) < 1e-15);
    CHECK(std::abs(paper(1, 1) * std::conj(paper(1, 1)) - 1.0) < 1e-15);

    CHECK_THROWS_AS(dft_measurement_matrix(4, 5, 2, 1.0), DimensionError);
    CHECK_THROWS_AS(dft_measurement_matrix(4, 2, 5, 1.0), DimensionError);
  }

  TEST_CASE("sigma2 grid") {
    const SweepConfig config;
    const auto grid = sigma2_grid(config);
    REQUIRE(grid.size() == 11);
    CHECK(grid.front() == 1e-3);
    CHECK(grid.back() == 1e2);
    for (std::size_t i = 1; i < grid.size(); ++i) {
      CHECK(grid[i] > grid[i - 1]);
      CHECK(std::abs(std::log10(grid[i] / grid[i - 1]) - 0.5) < 1e-12);
    }
    SweepConfig linear = config;
    linear.log_scale = false;
    linear.sigma2_min = 1.0;
    linear.sigma2_max = 3.0;
    linear.sigma2_points = 3;
    CHECK(sigma2_grid(linear) == std::vector<double>{1.0, 2.0, 3.0});
  }

  TEST_CASE("config validation") {
    SweepConfig config;
    config.trials = 0;
    CHECK_THROWS_AS(config.validate(), ConfigurationError);
    config = SweepConfig{};
    config.sigma2_min = 10.0;
    config.sigma2_max = 1.0;
    CHECK_THROWS_AS(config.validate(), ConfigurationError);
    config = SweepConfig{};
    config.dft_rows = 41;
    CHECK_THROWS_AS(config.validate(), ConfigurationError);
    config = SweepConfig{};
    config.estimators = {Estimator::Blue, Estimator::Blue};
    CHECK_THROWS_AS(config.validate(), ConfigurationError);
  }

  TEST_CASE("run_sweep is deterministic and independent of worker count") {
    SweepConfig config = small_config();
    config.workers = 1;
    const BmseTable a = run_sweep(config);
    const BmseTable b = run_sweep(config);
    config.workers = 3;
    const BmseTable c = run_sweep(config);
    REQUIRE(a.rows.size() == 4);
    for (std::size_t r = 0; r < a.rows.size(); ++r) {
      CHECK(a.rows[r].bmse == b.rows[r].bmse);
      CHECK(a.rows[r].bmse == c.rows[r].bmse);
      CHECK(a.rows[r].standard_error == c.rows[r].standard_error);
      for (double v : a.rows[r].bmse) CHECK((v > 0.0 && std::isfinite(v)));
    }
    config.seed = 100;
    CHECK(run_sweep(config).rows[0].bmse != a.rows[0].bmse);
  }

  TEST_CASE("run_sweep ordering and monotonicity") {
    SweepConfig config;
    config.trials = 500;
    const BmseTable table = run_sweep(config);
    const std::size_t blue = table.column(Estimator::Blue);
    const std::size_t re = table.column(Estimator::ReBlue);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      const auto& row = table.rows[r];
      CHECK(row.bmse[re] <= row.bmse[blue]);
      if (r > 0) {
        for (std::size_t j = 0; j < row.bmse.size(); ++j) {
          CHECK(row.bmse[j] >= table.rows[r - 1].bmse[j]);
        }
      }
    }
  }

  TEST_CASE("analytic_bmse scalar values against Monte Carlo") {
    const ComplexMatrix one = ComplexMatrix::Identity(1, 1);
    CHECK(std::abs(analytic_bmse(one, one, "blue") - 1.0) < 1e-15);
    CHECK(std::abs(analytic_bmse(one, one, "rbwlue") - 0.5) < 1e-15);

    // Oracle: direct error sampling, y = n, errors x_hat - 0.
    const int trials = 100000;
    RandomStream rng(123);
    const ProperNoiseSampler<double> noise(one);
    double blue_mse = 0.0;
    double rb_mse = 0.0;
    for (int t = 0; t < trials; ++t) {
      const cd n = noise(rng)[0];
      blue_mse += std::norm(n);
      rb_mse += n.real() * n.real();
    }
    blue_mse /= trials;
    rb_mse /= trials;
    CHECK(std::abs(blue_mse - 1.0) <= 0.05);
    CHECK(std::abs(rb_mse - 0.5) <= 0.05 * 0.5);
  }

  TEST_CASE("analytic_bmse invariances and errors") {
    testing::Rng rng(5);
    const ComplexMatrix h = testing::random_complex(rng, 6, 3);
    const ComplexMatrix c = testing::random_hpd(rng, 6, 10.0);
    const ComplexMatrix rotated = std::polar(1.0, 0.7) * h;
    CHECK(std::abs(analytic_bmse(rotated, c, Estimator::Rbwlue) -
                   analytic_bmse(h, c, Estimator::Rbwlue)) <
          1e-12 * analytic_bmse(h, c, Estimator::Rbwlue));

    for (Estimator e : {Estimator::Blue, Estimator::Rbwlue}) {
      const double base = analytic_bmse(h, c, e);
      for (double s2 : {1e-3, 0.5, 40.0}) {
        CHECK(std::abs(analytic_bmse(h, ComplexMatrix(s2 * c), e) - s2 * base) <=
              1e-12 * s2 * base);
      }
    }

    CHECK_THROWS_AS(analytic_bmse(h, c, Estimator::Wlmmse), ConfigurationError);
    CHECK_THROWS_AS(analytic_bmse(h, c, "lmmse"), ConfigurationError);
  }

  TEST_CASE("run_sweep converges to analytic_bmse") {
    SweepConfig config;
    config.sigma2_points = 3;
    config.trials = 10000;
    config.estimators = {Estimator::Blue, Estimator::Rbwlue};
    const BmseTable table = run_sweep(config);
    for (const auto& row : table.rows) {
      const LinearModel<double> model = sweep_model(config, row.sigma2);
      for (std::size_t j = 0; j < 2; ++j) {
        const double exact = analytic_bmse(model, table.estimators[j]);
        CHECK(std::abs(row.bmse[j] - exact) <= 0.05 * exact);
      }
    }
  }

  TEST_CASE("BmseTable column lookup") {
    BmseTable table;
    table.estimators = {Estimator::Rbwlue, Estimator::Blue};
    CHECK(table.column(Estimator::Blue) == 1);
    CHECK_THROWS_AS(table.column(Estimator::Wlmmse), ConfigurationError);
  }
}
