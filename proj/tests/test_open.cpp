#include <cmath>
#include <random>

#include "doctest.h"
#include "kqb/errors.hpp"
#include "kqb/open_battery.hpp"
#include "oracles.hpp"

using namespace kqb;

namespace {

IntegratorConfig short_run(double t_max, double dt = 0.005) {
  IntegratorConfig c;
  c.dt = dt;
  c.t_max = t_max;
  return c;
}

Trajectory synthetic(std::vector<double> xi) {
  Trajectory t;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    t.times.push_back(0.1 * static_cast<double>(i));
    t.trace_err.push_back(0.0);
    t.min_eig.push_back(0.0);
    t.herm_err.push_back(0.0);
  }
  t.xi = std::move(xi);
  return t;
}

}  // namespace

TEST_SUITE("open_battery") {
  TEST_CASE("lindblad_rhs examples") {
    LindbladSpec single{ComplexMatrix(2), {pauli::x() * std::sqrt(0.2)}, 0.2};
    CHECK(lindblad_rhs(ComplexMatrix::identity(2) * 0.5, single).max_abs() <= 1e-16);

    const ChainSpec chain{3, 0.7, 0.3, 0.5, -1.0, 0.2};
    const LindbladSpec still = LindbladSpec::pauli_x_dephasing(chain, 0.0, 0.0);
    CHECK(still.jump_ops.empty());
    const DensityMatrix zeta = gibbs_state(build_h_qb(chain), Temperature(0.3));
    CHECK(lindblad_rhs(zeta.mat(), still).max_abs() <= 1e-12);
  }

  TEST_CASE("lindblad_rhs matches the literal formula") {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t n = 4 << (trial % 2);
      const auto h = oracle::random_hermitian(n, 1.0, rng);
      std::vector<oracle::Dense> jumps = {oracle::random_hermitian(n, 0.5, rng),
                                          oracle::from_matrix(site_operator(trial % 2 ? 3 : 2, 1, Axis::x))};
      // A non-Hermitian, non-monomial jump exercises the general path.
      jumps.push_back(oracle::mul(jumps[0], oracle::random_hermitian(n, 0.5, rng)));
      LindbladSpec spec{oracle::to_matrix(h), {}, 0.0};
      for (const auto& l : jumps) spec.jump_ops.push_back(oracle::to_matrix(l));
      const auto rho = oracle::random_density(n, rng);
      const ComplexMatrix got = lindblad_rhs(oracle::to_matrix(rho), spec);
      CHECK(frob_dist(got, oracle::to_matrix(oracle::lindblad(rho, h, jumps))) <= 1e-12);

      // Hermitian fast path.
      LindbladGenerator gen(spec);
      ComplexMatrix fast(n);
      gen.apply(oracle::to_matrix(rho), fast, true);
      CHECK(frob_dist(fast, got) <= 1e-12);

      // Non-Hermitian input through the general path.
      const auto x = oracle::mul(rho, h);
      CHECK(frob_dist(lindblad_rhs(oracle::to_matrix(x), spec), oracle::to_matrix(oracle::lindblad(x, h, jumps))) <=
            1e-12);
    }
  }

  TEST_CASE("property: generator is traceless and Hermiticity preserving") {
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 2 + trial % 3;
      const ChainSpec chain{n, u(rng), u(rng), u(rng), u(rng), u(rng)};
      const LindbladSpec spec = LindbladSpec::pauli_x_dephasing(chain, u(rng), std::abs(u(rng)));
      const ComplexMatrix rho = oracle::to_matrix(oracle::random_density(std::size_t{1} << n, rng));
      const ComplexMatrix out = lindblad_rhs(rho, spec);
      CHECK(std::abs(out.trace()) <= 1e-12);
      CHECK(out.hermiticity_error() <= 1e-12);
    }
  }

  TEST_CASE("spec validation") {
    CHECK_THROWS_AS(LindbladSpec::pauli_x_dephasing({2, 0, 0, 0, 0, 0}, 1.0, -0.1), InvalidArgument);
    LindbladSpec bad{ComplexMatrix(4), {ComplexMatrix(2)}, 0.1};
    CHECK_THROWS_AS(bad.validate(), DimensionMismatch);
    CHECK_THROWS_AS(lindblad_rhs(ComplexMatrix(2), LindbladSpec{ComplexMatrix(4), {}, 0.0}), DimensionMismatch);
    CHECK_THROWS_AS(short_run(1.0, 2.0).validate(), InvalidArgument);
    IntegratorConfig c;
    c.record_stride = 0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
  }

  TEST_CASE("integrate: stationary state stays put") {
    const ChainSpec chain{3, 0.5, 0.5, 0.3, 0.5, 0.2};
    const Trajectory t = charge_open_chain(chain, 0.0, 0.0, Temperature(0.1), short_run(3.0));
    for (double v : t.xi) CHECK(std::abs(v) <= 1e-8);
  }

  TEST_CASE("integrate agrees with the superoperator exponential") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 4; ++trial) {
      const ChainSpec chain{2, u(rng), u(rng), u(rng), u(rng), u(rng)};
      const double omega = 0.5 + std::abs(u(rng)), g = 0.2;
      const LindbladSpec spec = LindbladSpec::pauli_x_dephasing(chain, omega, g);
      const ComplexMatrix h_qb = build_h_qb(chain);
      const DensityMatrix zeta = gibbs_state(h_qb, Temperature(0.2));
      IntegratorConfig cfg = short_run(4.0, 0.002);
      cfg.record_stride = 500;
      const Trajectory traj = integrate(zeta, spec, h_qb, cfg);
      REQUIRE(traj.times.size() == 5);
      std::vector<oracle::Dense> jumps;
      for (const auto& l : spec.jump_ops) jumps.push_back(oracle::from_matrix(l));
      const auto h0 = oracle::from_matrix(h_qb);
      const auto z0 = oracle::from_matrix(zeta.mat());
      for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto rho = oracle::lindblad_evolve(z0, oracle::from_matrix(spec.h_total), jumps, traj.times[i]);
        const double xi = oracle::trace(oracle::mul(oracle::add(rho, z0, -1.0), h0)).real();
        CHECK(traj.xi[i] == doctest::Approx(xi).epsilon(1e-9).scale(1.0));
      }
    }
  }

  TEST_CASE("integrate: small open chain rises to the infinite-temperature plateau") {
    const ChainSpec chain{2, 0, 0, 0, 0, 0.25};
    IntegratorConfig cfg = short_run(60.0);
    const Trajectory t = charge_open_chain(chain, 0.25, 0.2, Temperature(0.1), cfg);
    CHECK(t.xi.front() == 0.0);
    CHECK(t.xi.size() == t.times.size());
    CHECK(t.trace_err.size() == t.times.size());
    CHECK(t.min_eig.size() == t.times.size());
    // sigma^x noise is unital: the state relaxes to I/d and xi to -Tr[zeta H].
    const double plateau = 2 * 0.25 * std::tanh(0.25 / 0.1);
    const Peak p = peak_ergotropy(t);
    CHECK(p.xi_max == doctest::Approx(plateau).epsilon(1e-3));
    CHECK(steady_state_reached(t, 100, 1e-4));
    for (std::size_t i = 0; i < t.times.size(); ++i) {
      CHECK(std::abs(t.trace_err[i]) <= 1e-7);
      CHECK(t.min_eig[i] >= -1e-6);
      CHECK(t.herm_err[i] <= 1e-10);
    }
  }

  TEST_CASE("integrate: halving dt barely moves the result") {
    const ChainSpec chain{3, 0.5, 0.5, 0.5, -1.0, 0.2};
    IntegratorConfig coarse = short_run(5.0, 0.01);
    coarse.record_stride = 10;
    IntegratorConfig fine = short_run(5.0, 0.005);
    fine.record_stride = 20;
    const Trajectory a = charge_open_chain(chain, 0.2, 0.2, Temperature(0.1), coarse);
    const Trajectory b = charge_open_chain(chain, 0.2, 0.2, Temperature(0.1), fine);
    REQUIRE(a.xi.size() == b.xi.size());
    CHECK(a.times.back() == doctest::Approx(b.times.back()));
    CHECK(std::abs(a.xi.back() - b.xi.back()) <= 1e-6 * std::abs(b.xi.back()));
  }

  TEST_CASE("integrate: unitary limit conserves the spectrum") {
    const ChainSpec chain{3, 0.8, 0.2, 0.4, 0.5, 0.3};
    const ComplexMatrix h = build_h_qb(chain);
    const DensityMatrix zeta = gibbs_state(h, Temperature(0.5));
    const LindbladSpec spec = LindbladSpec::pauli_x_dephasing(chain, 0.6, 0.0);
    IntegratorConfig cfg = short_run(10.0);
    cfg.record_stride = 100;
    const Trajectory t = integrate(zeta, spec, h, cfg);
    const double lowest = hermitian_eigenvalues(zeta.mat()).front();
    for (double m : t.min_eig) CHECK(std::abs(m - lowest) <= 1e-6);
  }

  TEST_CASE("integrate is deterministic") {
    const ChainSpec chain{3, 0.5, 0.5, 0.5, -1.0, 0.2};
    const Trajectory a = charge_open_chain(chain, 0.2, 0.2, Temperature(0.1), short_run(2.0));
    const Trajectory b = charge_open_chain(chain, 0.2, 0.2, Temperature(0.1), short_run(2.0));
    CHECK(a.xi == b.xi);
    CHECK(a.times == b.times);
  }

  TEST_CASE("integrate records every stride plus the last step") {
    IntegratorConfig cfg = short_run(1.0, 0.01);
    cfg.record_stride = 30;
    const Trajectory t = charge_open_chain({2, 0, 0, 0, 0, 0.25}, 0.25, 0.2, Temperature(0.1), cfg);
    REQUIRE(t.times.size() == 5);
    CHECK(t.times[1] == doctest::Approx(0.3));
    CHECK(t.times.back() == doctest::Approx(1.0));
  }

  TEST_CASE("integrate stops early once steady") {
    IntegratorConfig cfg = short_run(200.0);
    cfg.early_stop = true;
    const Trajectory t = charge_open_chain({2, 0, 0, 0, 0, 0.25}, 0.25, 0.2, Temperature(0.1), cfg);
    CHECK(t.stopped_early);
    CHECK(t.times.back() < 200.0);
    CHECK(steady_state_reached(t, cfg.steady_window, cfg.steady_rel_tol));
  }

  TEST_CASE("integrate reports blowup") {
    IntegratorConfig cfg = short_run(50.0, 1.0);
    CHECK_THROWS_AS(charge_open_chain({2, 1, 0, 0, 0, 1}, 20.0, 0.2, Temperature(0.1), cfg), NumericalBlowup);
    try {
      charge_open_chain({2, 1, 0, 0, 0, 1}, 20.0, 0.2, Temperature(0.1), cfg);
    } catch (const NumericalBlowup& e) {
      CHECK(e.time() > 0.0);
    }
  }

  TEST_CASE("integrate validates inputs") {
    const DensityMatrix zeta(ComplexMatrix::identity(4) * 0.25);
    const LindbladSpec spec = LindbladSpec::pauli_x_dephasing({2, 0, 0, 0, 0, 1}, 1.0, 0.2);
    CHECK_THROWS_AS(integrate(zeta, spec, ComplexMatrix(2), short_run(1.0)), DimensionMismatch);
    ComplexMatrix non_herm(4);
    non_herm(0, 1) = 1.0;
    CHECK_THROWS_AS(integrate(zeta, spec, non_herm, short_run(1.0)), NonHermitianInput);
  }

  TEST_CASE("peak_ergotropy") {
    CHECK(peak_ergotropy(synthetic({0, 0, 0})).xi_max == 0.0);
    CHECK(peak_ergotropy(synthetic({0, 0, 0})).t_star == 0.0);
    const Trajectory sat = synthetic({0.0, 0.5, 0.75, 0.875, 0.9375});
    CHECK(peak_ergotropy(sat).t_star == sat.times.back());
    CHECK_THROWS_AS(peak_ergotropy(Trajectory{}), InvalidArgument);
  }

  TEST_CASE("steady_state_reached") {
    CHECK(steady_state_reached(synthetic({0, 1, 1, 1, 1}), 3, 1e-12));
    CHECK_FALSE(steady_state_reached(synthetic({0, 1, 2, 3, 4}), 3, 1e-3));
    CHECK_FALSE(steady_state_reached(synthetic({1, 1}), 3, 1e-3));
    CHECK_THROWS_AS(steady_state_reached(synthetic({1, 1}), 1, 1e-3), InvalidArgument);
  }
}
