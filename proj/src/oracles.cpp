#include "qmmsim/oracles.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace qmm {

StateVector vacuum_rabi_state(double g_a, double t, int m_a) {
  if (m_a < 2) throw std::invalid_argument("vacuum_rabi_state: m_a must be >= 2");
  const HilbertLayout lay = HilbertLayout::detector(2, m_a, 0);
  const double phase = std::sqrt(2.0) * g_a * t;
  CVec amps = CVec::Zero(lay.total_dim());
  // basis index of |q0 q1 n_A>: (q0*2 + q1)*m_a + n
  amps((0 * 2 + 0) * m_a + 1) = std::cos(phase);                       // |g g 1>
  const Cx s = kI * std::sin(phase) / std::sqrt(2.0);
  amps((0 * 2 + 1) * m_a + 0) = s;                                     // |g e 0>
  amps((1 * 2 + 0) * m_a + 0) = s;                                     // |e g 0>
  return StateVector(lay, std::move(amps));
}

double bell_readout_times(double g_a, int n) {
  if (g_a <= 0) throw std::invalid_argument("bell_readout_times: g_a must be > 0");
  if (n < 0) throw std::invalid_argument("bell_readout_times: n must be >= 0");
  constexpr double kPi = 3.141592653589793238462643383279502884;
  return (kPi / 2.0 + kPi * double(n)) / (std::sqrt(2.0) * g_a);
}

Operator rabi_rwa_hamiltonian(double g_a, double omega_a, double eps, int m_a) {
  const HilbertLayout lay = HilbertLayout::detector(2, m_a, 0);
  const int ia = lay.index_of("A");
  const Operator a = annihilation(m_a);
  const CMat na = a.mat.adjoint() * a.mat;

  CMat h = omega_a * embed(Operator(a.layout, CMat(na + 0.5 * CMat::Identity(m_a, m_a))), ia, lay).mat;
  const Operator raise = pauli(PauliAxis::Minus);  // |e><g| in this basis
  const CMat a_full = embed(a, ia, lay).mat;
  for (int j = 0; j < 2; ++j) {
    h += -0.5 * eps * embed(pauli(PauliAxis::Z), j, lay).mat;
    const CMat r = embed(raise, j, lay).mat;
    h += -g_a * (a_full * r + r.adjoint() * a_full.adjoint());
  }
  return Operator(lay, std::move(h));
}

StateVector displacement_apply(Cx alpha, const StateVector& state) {
  const auto& lay = state.layout;
  if (lay.n_subsystems() != 1)
    throw std::invalid_argument("displacement_apply: single-mode layout required");
  const int m = lay.total_dim();
  const double asq = std::norm(alpha);
  if (double(m) < asq + 6.0 * std::sqrt(asq + 1.0))
    throw std::invalid_argument(
        "displacement_apply: truncation too small for requested displacement");
  const CMat a = annihilation(m).mat;
  const CMat gen = alpha * a.adjoint() - std::conj(alpha) * a;
  const CMat d = gen.exp();  // scaling-and-squaring
  return StateVector(lay, d * state.amps);
}

ExactPropagator::ExactPropagator(const Operator& h) : layout_(h.layout) {
  if (!h.is_hermitian(1e-10))
    throw std::invalid_argument("ExactPropagator: Hamiltonian must be Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> es(h.mat);
  vectors_ = es.eigenvectors();
  values_ = es.eigenvalues();
}

StateVector ExactPropagator::evolve(const StateVector& psi0, double t) const {
  if (psi0.layout != layout_)
    throw std::invalid_argument("ExactPropagator: state layout mismatch");
  CVec coeffs = vectors_.adjoint() * psi0.amps;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k)
    coeffs(k) *= std::exp(Cx(0, -values_(k) * t));
  return StateVector(layout_, vectors_ * coeffs);
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.layout != b.layout) throw std::invalid_argument("fidelity: layout mismatch");
  return std::abs(a.amps.dot(b.amps)) / (a.norm() * b.norm());
}

}  // namespace qmm
