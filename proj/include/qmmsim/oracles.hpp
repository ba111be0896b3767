#pragma once

#include "qmmsim/operators.hpp"

namespace qmm {

// Closed-form two-branch state of one photon resonantly exchanged with two
// identical qubits (readout off):
//   |Psi(t)> = cos(sqrt2 g t) |gg> (x) |1>_A
//            + i sin(sqrt2 g t) (|ge> + |eg>)/sqrt2 (x) |0>_A,
// on the layout (q0, q1, A) with m_a levels (>= 2). Ground |g> is the
// sigma_z = +1 basis state.
StateVector vacuum_rabi_state(double g_a, double t, int m_a = 2);

// t_n = (pi/2 + pi n) / (sqrt2 g): the photon branch vanishes and the qubits
// sit in the symmetric Bell state.
double bell_readout_times(double g_a, int n);

// Rotating-wave single-excitation Hamiltonian used to cross-check the closed
// form: H = omega_a (n_a + 1/2) - eps/2 (sz_1 + sz_2)
//          - g [ a (r_1 + r_2) + a^dag (r_1^dag + r_2^dag) ],
// where r = |e><g| raises the qubit. The coupling sign fixes the interaction
// phase so the evolved state matches the +i sin convention of the closed form.
Operator rabi_rwa_hamiltonian(double g_a, double omega_a, double eps, int m_a = 2);

// Displacement D(alpha) = exp(alpha a^dag - alpha^* a) on the state's mode,
// by scaling-and-squaring matrix exponential of the truncated generator.
// Requires truncation M >= |alpha|^2 + 6 sqrt(|alpha|^2 + 1).
StateVector displacement_apply(Cx alpha, const StateVector& state);

// exp(-i H t)|psi> through the eigendecomposition of a Hermitian H; exact
// propagation used as the unitary ground truth in tests.
class ExactPropagator {
 public:
  explicit ExactPropagator(const Operator& h);
  StateVector evolve(const StateVector& psi0, double t) const;

 private:
  HilbertLayout layout_;
  CMat vectors_;
  Eigen::VectorXd values_;
};

// |<a|b>| with both states normalized.
double fidelity(const StateVector& a, const StateVector& b);

}  // namespace qmm
