#include <doctest.h>

#include <cmath>

#include "qmmsim/oracle_suite.hpp"
#include "qmmsim/oracles.hpp"

using namespace qmm;

TEST_CASE("vacuum Rabi closed form") {
  const double g = 0.01;
  SUBCASE("starts as photon times both qubits in the ground state") {
    const StateVector psi = vacuum_rabi_state(g, 0.0);
    CHECK(std::abs(psi.amps(1) - Cx(1, 0)) < 1e-15);  // |g g> x |1>
    CHECK(psi.norm() == doctest::Approx(1.0));
  }
  SUBCASE("normalized at all times") {
    for (double t : {13.0, 77.7, 500.0}) CHECK(vacuum_rabi_state(g, t).norm() == doctest::Approx(1.0));
  }
  SUBCASE("Bell branch at the first readout time") {
    const double t0 = bell_readout_times(g, 0);
    CHECK(t0 == doctest::Approx(111.072073454).epsilon(1e-9));
    const StateVector psi = vacuum_rabi_state(g, t0);
    const int m_a = 2;
    CHECK(std::abs(psi.amps(0 * m_a + 1)) < 1e-12);  // photon branch gone
    CHECK(std::abs(psi.amps(1 * m_a + 0) - Cx(0, 1.0 / std::sqrt(2.0))) < 1e-12);
    CHECK(std::abs(psi.amps(2 * m_a + 0) - Cx(0, 1.0 / std::sqrt(2.0))) < 1e-12);
  }
  SUBCASE("readout times are evenly spaced") {
    const double d1 = bell_readout_times(g, 1) - bell_readout_times(g, 0);
    const double d2 = bell_readout_times(g, 2) - bell_readout_times(g, 1);
    CHECK(d1 == doctest::Approx(3.141592653589793 / (std::sqrt(2.0) * g)));
    CHECK(d1 == doctest::Approx(d2));
  }
  SUBCASE("photon number at readout times is numerically zero") {
    for (int n = 0; n < 3; ++n) {
      const StateVector psi = vacuum_rabi_state(g, bell_readout_times(g, n));
      const double nbar = expectation(psi, embed(number_op(2), "A", psi.layout)).real();
      CHECK(nbar < 1e-12);
    }
  }
  SUBCASE("invalid coupling rejected") {
    CHECK_THROWS_AS(bell_readout_times(0.0, 0), std::invalid_argument);
  }
  SUBCASE("matches exact propagation of the rotating-wave model") {
    const int m_a = 3;
    const Operator h = rabi_rwa_hamiltonian(g, 1.0, 1.0, m_a);
    CHECK(h.is_hermitian());
    const ExactPropagator prop(h);
    const StateVector psi0 = vacuum_rabi_state(g, 0.0, m_a);
    for (double frac : {0.25, 0.5, 1.0, 1.75}) {
      const double t = frac * bell_readout_times(g, 0);
      CHECK(fidelity(prop.evolve(psi0, t), vacuum_rabi_state(g, t, m_a)) > 1.0 - 1e-6);
    }
  }
}

TEST_CASE("displacement operator") {
  const int m = 16;
  const HilbertLayout lay = HilbertLayout::single_mode(m);
  const StateVector vac = StateVector::basis_state(lay, {0});

  SUBCASE("D(0) is the identity") {
    const StateVector out = displacement_apply(Cx(0, 0), vac);
    CHECK((out.amps - vac.amps).norm() < 1e-13);
  }
  SUBCASE("coherent state photon number") {
    const Cx alpha(0.9, -0.5);
    const StateVector coh = displacement_apply(alpha, vac);
    CHECK(expectation(coh, number_op(m)).real() ==
          doctest::Approx(std::norm(alpha)).epsilon(1e-8));
  }
  SUBCASE("round trip up to a global phase") {
    const Cx alpha(1.1, 0.4);
    const StateVector coh = displacement_apply(alpha, vac);
    const StateVector back = displacement_apply(-alpha, coh);
    CHECK(fidelity(back, vac) > 1.0 - 1e-10);
  }
  SUBCASE("insufficient truncation rejected") {
    const HilbertLayout tiny = HilbertLayout::single_mode(4);
    CHECK_THROWS_AS(displacement_apply(Cx(2.0, 0.0), StateVector::basis_state(tiny, {0})),
                    std::invalid_argument);
  }
}

TEST_CASE("oracle suite aggregates to all-pass") {
  const auto checks = run_oracle_suite();
  for (const auto& c : checks) {
    INFO(c.name, " value=", c.value, " threshold=", c.threshold);
    CHECK(c.pass);
  }
  CHECK(all_passed(checks));
  const std::string table = format_oracle_table(checks);
  CHECK(table.find("vacuum_rabi_fidelity") != std::string::npos);
  CHECK(table.find("FAIL") == std::string::npos);
}
