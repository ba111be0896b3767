#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qmm {

// Classical Bloch vectors for N qubits.
struct SpinState {
  std::vector<double> sx, sy, sz;

  explicit SpinState(int n = 0, double sx0 = 1.0) : sx(n, sx0), sy(n, 0.0), sz(n, 0.0) {}
  int size() const { return static_cast<int>(sx.size()); }
  double norm(int j) const;
  double sz_total() const;
};

// Resonant input drive with slow real envelope f_e(t); the induced coherent
// amplitude is alpha(t) = -i * integral of f_e, so <a^dag a> = [int f_e]^2.
struct DriveProfile {
  std::function<double(double)> f_envelope;  // empty means zero
  double quad_dt = 1e-3;

  double envelope_integral(double t) const;   // int_0^t f_e
  double alpha_sq(double t) const;            // photon number [int f_e]^2
};

// <a^dag a> produced on the input mode by the envelope up to time t.
double coherent_photon_number(const DriveProfile& profile, double t);

// ds_x/dt =  2 [gamma |alpha|^2 + eta] s_y
// ds_y/dt = -2 [gamma |alpha|^2 + eta] s_x - Delta_eff s_z
// ds_z/dt =    Delta_eff s_y
// (zero-bias, z-noise-only regime; generator is antisymmetric, so |s_j| is
// conserved by the continuous flow)
SpinState bloch_rhs(const SpinState& state, const std::vector<double>& gammas, double alpha_sq,
                    const std::vector<double>& noise, double delta_eff);

// First-order perturbative z-component for one qubit:
//   s_z^(1)(t) = -2 Delta_eff s_x(0) int_0^t int_0^t' [gamma |alpha|^2 + eta] dt'' dt'
// eta_path holds per-step noise samples on a uniform grid of step dt.
double perturbative_sz(double gamma, const std::function<double(double)>& alpha_sq,
                       const std::vector<double>& eta_path, double delta_eff, double t,
                       double dt, double s_x0);
std::vector<double> perturbative_sz_series(double gamma,
                                           const std::function<double(double)>& alpha_sq,
                                           const std::vector<double>& eta_path, double delta_eff,
                                           double dt, double s_x0);

// Collective first-order S^z for N identical qubits, split into the coherent
// and noise double integrals of the perturbative solution:
//   coherent_bracket = int int |alpha|^2,  noise_bracket = (1/N) sum_j int int eta_j.
struct CollectiveSz {
  double total = 0;             // sum of per-qubit first-order s_z
  double coherent_term = 0;     // -2 gamma Delta_eff s_x0 * N * coherent_bracket
  double noise_term = 0;        // -2 Delta_eff s_x0 * sum_j (int int eta_j)
  double coherent_bracket = 0;
  double noise_bracket = 0;
};
CollectiveSz collective_sz(double gamma, const std::function<double(double)>& alpha_sq,
                           const std::vector<std::vector<double>>& eta_paths, double delta_eff,
                           double t, double dt, double s_x0);

// RK4 integration of the Bloch flow for N qubits with per-qubit white
// z-noise and a common |alpha(t)|^2 drive. Delta_eff is either held fixed or
// refreshed each step from the mean field kappa * sum_k s_x_k.
struct SpinEnsembleOptions {
  int n_qubits = 1;
  double gamma = 0;
  double delta_eff = 0;
  bool mean_field = false;
  double kappa = 0;
  std::function<double(double)> alpha_sq;  // empty means zero
  double noise_d = 0;
  double duration = 0;
  double dt = 0;
  int stride = 1;
  std::uint64_t seed = 0;
  double sx0 = 1.0;
};
struct SpinEnsembleRun {
  std::vector<double> times;
  std::vector<double> sz;            // collective S^z
  SpinState final_state{0};
};
SpinEnsembleRun run_spin_ensemble(const SpinEnsembleOptions& opts);

// Time series of the first-order collective solution and its coherent/noise
// split, as CSV columns (time, total, coherent_term, noise_term).
void write_collective_sz_csv(const std::string& path, double gamma,
                             const std::function<double(double)>& alpha_sq,
                             const std::vector<std::vector<double>>& eta_paths, double delta_eff,
                             double dt, double s_x0);

}  // namespace qmm
