#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qmmsim/operators.hpp"

namespace qmm {

// All physical constants of the detector and chain models, in units where
// hbar = 1 and the reference qubit splitting eps = 1. Frequencies and rates
// are dimensionless ratios; time is measured in 1/eps.
struct ModelParams {
  int n_qubits = 2;
  std::vector<double> eps;    // per-qubit bias, default 1.0
  std::vector<double> delta;  // per-qubit tunneling, default 0.0
  double omega_a = 0.5;
  double omega_b = 0.5;
  std::vector<double> g_a;  // per-qubit coupling to the input mode, default 0.01
  std::vector<double> g_b;  // per-qubit coupling to the readout mode, default 0.01
  double gamma_z = 1e-3;
  double gamma_xy = 1e-3;
  double gamma_b = 1e-3 * 0.5;  // readout decay, default 1e-3 * omega_b
  double g_qq = 0.0;            // nearest-neighbor sigma_z sigma_z coupling
  bool chain_periodic = false;  // close the chain with a j=N-1 to j=0 bond
  double noise_d = 0.0;         // white-noise intensity D
  double drive_amp = 0.05;      // harmonic bias drive amplitude
  double drive_freq = 0.8;      // harmonic bias drive frequency (off-resonance)
  int m_a = 8;
  int m_b = 6;
  // Mode drive envelopes f(t), h(t); empty means zero.
  std::function<double(double)> f_envelope;
  std::function<double(double)> h_envelope;

  static ModelParams defaults(int n_qubits = 2);
  void validate() const;
  HilbertLayout layout() const;

  double eps_j(int j) const { return eps.empty() ? 1.0 : eps.at(j); }
  double delta_j(int j) const { return delta.empty() ? 0.0 : delta.at(j); }
  double g_a_j(int j) const { return g_a.empty() ? 0.0 : g_a.at(j); }
  double g_b_j(int j) const { return g_b.empty() ? 0.0 : g_b.at(j); }
};

struct LindbladChannel {
  std::string label;
  Operator op;    // rate folded in: L = sqrt(2*Gamma) * (bare operator)
  double rate;    // the bare Gamma, kept for reporting
};

using LindbladSet = std::vector<LindbladChannel>;

// Full detector Hamiltonian of the qubits + input mode A + readout mode B,
// H = H_a + V_a + H_qb + V_b + H_b, materialized at time t.
Operator build_full_hamiltonian(const ModelParams& params, double t);

// Time-independent split H(t) = h_static + f(t)*x_a + h(t)*x_b used by the
// evolution engines. x_a/x_b are only built when an envelope is set.
struct HamiltonianParts {
  HilbertLayout layout;
  Operator h_static;
  std::optional<Operator> x_a;  // a + a^dag, embedded
  std::optional<Operator> x_b;  // b + b^dag, embedded
  std::function<double(double)> f_envelope;
  std::function<double(double)> h_envelope;

  CMat at(double t) const;
  bool time_dependent() const { return x_a.has_value() || x_b.has_value(); }
};
HamiltonianParts build_hamiltonian_parts(const ModelParams& params);

// Per-qubit relaxation L_z = sqrt(2 Gamma_z) sigma_-, dephasing
// L_xy = sqrt(2 Gamma_xy) sigma_+ sigma_-, and readout measurement
// L_b = sqrt(2 Gamma_b) b. Channels with zero rate are dropped.
LindbladSet build_lindblads(const ModelParams& params);
// Same set restricted to an arbitrary layout (used for chain models with no
// bosonic modes).
LindbladSet build_qubit_lindblads(const ModelParams& params, const HilbertLayout& lay);

// Driven noisy chain, H = -1/2 sum_j [Delta_j sx_j + eps_j(t) sz_j]
//                       + g sum_j sz_j sz_{j+1}   (open boundary),
// with eps_j(t) = drive_amp*sin(drive_freq*t) + noise_samples[j].
// noise_samples are the per-step realizations of sqrt(2D) xi_j(t).
Operator build_chain_hamiltonian(const ModelParams& params, double t,
                                 const std::vector<double>& noise_samples);

// Dispersive Lamb-shift coefficient gamma_j = (g_j^a)^2 / |omega_a - sqrt(Delta_j^2+eps_j^2)|.
// Writes a diagnostic to stderr when the detuning-to-coupling ratio drops
// below 10; throws std::domain_error at exact resonance.
double dispersive_shift(const ModelParams& params, int j);

// Effective qubit-qubit coupling through the vacuum input mode,
// (g^a)^2 / (2 deltaOmega), for identical qubits and couplings.
double effective_xx_coupling(const ModelParams& params);

// Per-step noise value sqrt(2D) xi(t) realized as a Gaussian of variance
// 2D/dt, so that the increment over dt has variance 2D*dt.
double sample_bias_noise(class Rng& rng, double noise_d, double dt);

}  // namespace qmm
