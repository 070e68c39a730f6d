#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "kqb/errors.hpp"
#include "kqb/thermal.hpp"
#include "oracles.hpp"

using namespace kqb;

namespace {

ModeSpec random_mode(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> g(-1.0, 1.0);
  std::uniform_real_distribution<double> k(0.01, std::numbers::pi - 0.01);
  return {k(rng), u(rng), g(rng), u(rng), g(rng), u(rng)};
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

}  // namespace

TEST_SUITE("thermal") {
  TEST_CASE("temperature validation") {
    CHECK_THROWS_AS(Temperature(0.0), NonPositiveTemperature);
    CHECK_THROWS_AS(Temperature(-1.0), NonPositiveTemperature);
    CHECK_THROWS_AS(Temperature(std::nan("")), NonPositiveTemperature);
    CHECK(Temperature(0.5).beta() == 2.0);
  }

  TEST_CASE("density matrix validation") {
    CHECK_NOTHROW(DensityMatrix(ComplexMatrix::identity(2) * 0.5));
    CHECK_THROWS_AS(DensityMatrix(ComplexMatrix::identity(2)), InvalidDensityMatrix);
    ComplexMatrix non_herm = ComplexMatrix::identity(2) * 0.5;
    non_herm(0, 1) = 0.1;
    CHECK_THROWS_AS(DensityMatrix{non_herm}, InvalidDensityMatrix);
    const double d[] = {1.5, -0.5};
    CHECK_THROWS_AS(DensityMatrix(ComplexMatrix::diagonal(std::span<const double>(d))), InvalidDensityMatrix);
  }

  TEST_CASE("gibbs_state examples") {
    const DensityMatrix flat = gibbs_state(ComplexMatrix(4), Temperature(0.3));
    CHECK(flat.mat().approx_equal(ComplexMatrix::identity(4) * 0.25, 1e-15));

    const DensityMatrix z = gibbs_state(pauli::z(), Temperature(1.0));
    CHECK(z.mat()(0, 0).real() == doctest::Approx(std::exp(-1.0) / (2 * std::cosh(1.0))).epsilon(1e-14));
    CHECK(z.mat()(0, 0).real() == doctest::Approx(0.11920).epsilon(1e-4));
    CHECK(z.mat()(1, 1).real() == doctest::Approx(0.88080).epsilon(1e-4));

    const ComplexMatrix h = build_h_qb({4, 1.2, 0.4, 0.8, -0.5, 0.6});
    REQUIRE(h.max_abs() <= 10.0);
    const DensityMatrix hot = gibbs_state(h, Temperature(1e6));
    CHECK(hot.mat().approx_equal(ComplexMatrix::identity(16) * (1.0 / 16), 1e-5));
  }

  TEST_CASE("gibbs_state matches the exponential oracle") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
      const auto h = oracle::random_hermitian(6, 2.0, rng);
      const double t = log_uniform(rng, 0.05, 20.0);
      const DensityMatrix rho = gibbs_state(oracle::to_matrix(h), Temperature(t));
      CHECK(frob_dist(rho.mat(), oracle::to_matrix(oracle::gibbs(h, 1.0 / t))) <= 1e-10);
    }
  }

  TEST_CASE("gibbs_state survives extreme beta * energy") {
    const DensityMatrix cold = gibbs_state(pauli::z() * 1000.0, Temperature(1e-3));
    CHECK(cold.mat()(1, 1).real() == doctest::Approx(1.0));
    CHECK(cold.mat()(0, 0).real() == 0.0);
  }

  TEST_CASE("property: gibbs_state is a valid, passive, commuting state") {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t n = 2 + static_cast<std::size_t>(trial % 7);
      ComplexMatrix h = oracle::to_matrix(oracle::random_hermitian(n, 10.0, rng));
      h *= 50.0 / std::max(50.0, frob_norm(h));
      const Temperature t(log_uniform(rng, 1e-3, 1e3));
      const DensityMatrix rho = gibbs_state(h, t);  // constructor checks the invariants

      const HermitianEig e = hermitian_eig(h);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const ComplexMatrix& v = e.eigenvectors;
        auto pop = [&](std::size_t col) {
          cplx s = 0.0;
          for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c) s += std::conj(v(r, col)) * rho.mat()(r, c) * v(c, col);
          return s.real();
        };
        CHECK(pop(i) >= pop(i + 1) - 1e-12);
      }
      CHECK(frob_norm(commutator(rho.mat(), h)) <= 1e-10 * std::max(1.0, frob_norm(h)));

      std::uniform_real_distribution<double> shift(-100.0, 100.0);
      const ComplexMatrix shifted = h + ComplexMatrix::identity(n) * cplx(shift(rng));
      CHECK(frob_dist(gibbs_state(shifted, t).mat(), rho.mat()) <= 1e-12);
    }
  }

  TEST_CASE("gibbs_mode_analytic examples") {
    CHECK(gibbs_mode_analytic({1.0, 0, 0, 0, 0, 0}, Temperature(0.1)).mat().approx_equal(
        ComplexMatrix::identity(4) * 0.25, 1e-15));
    const DensityMatrix hot = gibbs_mode_analytic({2.0, 1.5, 0.3, 2.0, 0.5, 1.0}, Temperature(1e6));
    CHECK(hot.mat().approx_equal(ComplexMatrix::identity(4) * 0.25, 1e-5));
  }

  TEST_CASE("property: analytic mode Gibbs state equals the numeric one") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 200; ++trial) {
      const ModeSpec m = random_mode(rng);
      const Temperature t(log_uniform(rng, 1e-2, 1e2));
      CAPTURE(trial);
      const ComplexMatrix h = build_h_mode(m);
      const DensityMatrix analytic = gibbs_mode_analytic(m, t);
      CHECK(frob_dist(analytic.mat(), gibbs_state(h, t).mat()) <= 1e-10);
      CHECK(frob_norm(commutator(analytic.mat(), h)) <= 1e-10 * std::max(1.0, frob_norm(h)));
    }
  }

  TEST_CASE("analytic mode Gibbs state at huge beta * Lambda stays finite") {
    const ModeSpec m{7 * std::numbers::pi / 8, 50.0, 0.0, 0.0, 0.0, 0.5};
    const DensityMatrix rho = gibbs_mode_analytic(m, Temperature(0.01));
    CHECK(frob_dist(rho.mat(), gibbs_state(build_h_mode(m), Temperature(0.01)).mat()) <= 1e-10);
  }
}
