#include <doctest.h>

#include "test_support.hpp"
#include "wlest/random.hpp"

using namespace wlest;
using wlest::testing::cd;

TEST_SUITE("sampling") {
  TEST_CASE("derive_stream depends only on (seed, grid, trial)") {
    auto a = derive_stream(1, 2, 3);
    auto b = derive_stream(1, 2, 3);
    auto c = derive_stream(1, 3, 2);
    auto d = derive_stream(2, 2, 3);
    const auto first = a();
    CHECK(first == b());
    CHECK(first != c());
    CHECK(first != d());
  }

  TEST_CASE("proper noise with C = sigma^2 I splits variance evenly") {
    const double sigma2 = 2.5;
    const int n = 100000;
    const ComplexMatrix c = sigma2 * ComplexMatrix::Identity(2, 2);
    const ProperNoiseSampler<double> sampler(c);
    RandomStream rng(42);
    RealVector var_re = RealVector::Zero(2);
    RealVector var_im = RealVector::Zero(2);
    ComplexVector comp = ComplexVector::Zero(2);
    for (int k = 0; k < n; ++k) {
      const ComplexVector v = sampler(rng);
      var_re += v.real().cwiseAbs2();
      var_im += v.imag().cwiseAbs2();
      comp += v.cwiseProduct(v);
    }
    var_re /= n;
    var_im /= n;
    comp /= n;
    // Var of a squared N(0, s) variable is 2 s^2.
    const double half = sigma2 / 2.0;
    const double se_var = half * std::sqrt(2.0 / n);
    // Re and Im of n^2 each have variance sigma^4.
    const double se_comp = sigma2 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < 2; ++i) {
      CHECK(std::abs(var_re[i] - half) <= 3.0 * se_var);
      CHECK(std::abs(var_im[i] - half) <= 3.0 * se_var);
      CHECK(std::abs(comp[i].real()) <= 3.0 * se_comp);
      CHECK(std::abs(comp[i].imag()) <= 3.0 * se_comp);
    }
  }

  TEST_CASE("proper noise reproduces a general covariance and passes the properness test") {
    testing::Rng gen(9);
    const ComplexMatrix c = testing::random_hpd(gen, 3, 10.0);
    const int n = 100000;
    const ProperNoiseSampler<double> sampler(c);
    RandomStream rng(43);
    ComplexMatrix emp = ComplexMatrix::Zero(3, 3);
    ComplexMatrix comp = ComplexMatrix::Zero(3, 3);
    for (int k = 0; k < n; ++k) {
      const ComplexVector v = sampler(rng);
      emp += v * v.adjoint();
      comp += v * v.transpose();
    }
    emp /= n;
    comp /= n;
    CHECK((emp - c).norm() / c.norm() <= 0.05);

    const ComplexMatrix white = ComplexMatrix::Identity(3, 3);
    const ProperNoiseSampler<double> white_sampler(white);
    ComplexMatrix white_comp = ComplexMatrix::Zero(3, 3);
    for (int k = 0; k < n; ++k) {
      const ComplexVector v = white_sampler(rng);
      white_comp += v * v.transpose();
    }
    white_comp /= n;
    CHECK(is_proper(white_comp, 4.0 / std::sqrt(static_cast<double>(n))));
  }

  TEST_CASE("proper noise rejects non-PD covariance") {
    RandomStream rng(1);
    CHECK_THROWS_AS(sample_proper_noise<double>(ComplexMatrix::Zero(2, 2), rng),
                    SingularityError);
  }

  TEST_CASE("real prior samples") {
    const int n = 100000;
    const ComplexMatrix c = ComplexMatrix::Identity(5, 5);
    const RealPriorSampler<double> sampler(c);
    RandomStream rng(44);
    ComplexMatrix emp = ComplexMatrix::Zero(5, 5);
    ComplexMatrix comp = ComplexMatrix::Zero(5, 5);
    for (int k = 0; k < n; ++k) {
      const ComplexVector x = sampler(rng);
      REQUIRE(x.imag().cwiseAbs().maxCoeff() == 0.0);
      emp += x * x.adjoint();
      comp += x * x.transpose();
    }
    emp /= n;
    comp /= n;
    CHECK((emp - c).norm() / c.norm() <= 0.05);
    CHECK(max_abs(comp - emp) == 0.0);

    CHECK(sample_real_prior<double>(ComplexMatrix::Zero(3, 3), rng) ==
          ComplexVector::Zero(3));
  }

  TEST_CASE("real prior with singular covariance") {
    // Rank one: x = [g, g].
    const ComplexMatrix c = ComplexMatrix::Ones(2, 2);
    const RealPriorSampler<double> sampler(c);
    RandomStream rng(45);
    for (int k = 0; k < 10; ++k) {
      const ComplexVector x = sampler(rng);
      CHECK(std::abs(x[0] - x[1]) < 1e-12);
    }
  }

  TEST_CASE("real prior validation") {
    RandomStream rng(1);
    ComplexMatrix complex_c = ComplexMatrix::Identity(2, 2);
    complex_c(0, 1) = cd(0, 0.5);
    complex_c(1, 0) = cd(0, -0.5);
    CHECK_THROWS_AS(sample_real_prior<double>(complex_c, rng), ValidationError);
    ComplexMatrix indefinite = ComplexMatrix::Identity(2, 2);
    indefinite(1, 1) = -1.0;
    CHECK_THROWS_AS(sample_real_prior<double>(indefinite, rng), ValidationError);
  }
}
