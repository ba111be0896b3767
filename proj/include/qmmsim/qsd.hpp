#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmmsim/model.hpp"
#include "qmmsim/operators.hpp"
#include "qmmsim/rng.hpp"

namespace qmm {

constexpr double kTwoPi = 6.283185307179586476925286766559;

enum class QsdScheme {
  // Plain Euler-Maruyama on the full drift of the diffusion equation.
  EulerMaruyama,
  // Unitary part applied through a precomputed exp(-iH dt); dissipative and
  // stochastic terms Euler. Exact for zero dissipation, same weak order
  // otherwise. Default for production runs.
  ExponentialEuler,
};

enum class QubitInit { SuperpositionPlus, Ground, Excited };
QubitInit qubit_init_from_string(const std::string& tag);

struct RunConfig {
  ModelParams params = ModelParams::defaults();
  int initial_photons = 0;                 // Fock occupation of mode A
  std::optional<Cx> initial_alpha;         // coherent |alpha> instead, if set
  QubitInit initial_qubits = QubitInit::SuperpositionPlus;
  double duration_periods = 600;           // in periods of eps (2*pi)
  double warmup_periods = 300;             // excluded from spectral analysis
  double dt = kTwoPi / 200.0;              // 200 steps per qubit period
  int record_stride = 8;
  std::uint64_t seed = 1;
  QsdScheme scheme = QsdScheme::ExponentialEuler;
  double leakage_threshold = 1e-4;

  void validate() const;
};

struct TrajectoryRecord {
  std::uint64_t seed = 0;
  double dt = 0;
  int stride = 1;
  std::vector<double> times;
  std::vector<std::string> names;                // observable names
  std::vector<std::vector<double>> series;       // one series per name
  std::vector<char> in_window;                   // analysis-window flag per sample
  bool flagged = false;                          // leakage monitor tripped
  double max_leakage = 0;
  double max_norm_drift = 0;                     // pre-renormalization, per step

  const std::vector<double>& column(const std::string& name) const;
  // Samples of `name` restricted to the analysis window.
  std::vector<double> windowed(const std::string& name) const;
};

struct EnsembleResult {
  std::vector<TrajectoryRecord> trajectories;
  TrajectoryRecord mean;                         // same columns, ensemble mean
  std::vector<std::vector<double>> stderr_;      // standard error per column
};

// One Euler-Maruyama step of the quantum state diffusion equation:
//   |dpsi> = -iH|psi>dt
//          + sum_j [ <L_j^dag> L_j - 1/2 L_j^dag L_j - 1/2 <L_j^dag><L_j> ] |psi> dt
//          + sum_j [ L_j - <L_j> ] |psi> dxi_j,
// with complex Wiener increments dxi = (u+iv)sqrt(dt/2), followed by explicit
// renormalization. Draws one increment per channel from `rng`, in order.
StateVector qsd_step(const StateVector& state, const Operator& h, const LindbladSet& lindblads,
                     double dt, Rng& rng);

// Prepared fixed-step integrator; immutable and shareable across trajectory
// threads. ExponentialEuler applies exp(-iH dt)(1 - dt/2 sum L^dag L) in one
// matrix-vector product; drive envelopes enter through an Euler term.
class QsdStepper {
 public:
  QsdStepper(const HamiltonianParts& parts, const LindbladSet& lindblads, double dt,
             QsdScheme scheme);
  QsdStepper(const Operator& h, const LindbladSet& lindblads, double dt, QsdScheme scheme);

  // Advances psi by dt from time t; renormalizes; returns |norm - 1| before
  // renormalization. Throws IntegrationError on norm collapse.
  double step(CVec& psi, double t, Rng& rng) const;

  double dt() const { return dt_; }
  int n_channels() const { return static_cast<int>(ls_.size()); }
  const HilbertLayout& layout() const { return layout_; }

 private:
  HilbertLayout layout_;
  CMat matrix_;  // propagator (exponential scheme) or drift generator (Euler)
  std::vector<CMat> ls_;
  std::optional<CMat> x_a_, x_b_;
  std::function<double(double)> f_env_, h_env_;
  double dt_;
  QsdScheme scheme_;
};

// Full trajectory of the detector model described by config.params; records
// <x_b>, <p_b>, <sigma_z_j>, Sz, <a^dag a>, <b^dag b> and the norm drift every
// record_stride steps. Deterministic given the seed.
TrajectoryRecord run_trajectory(const RunConfig& config);

// Trajectories i = 0..n-1 use seeds config.seed + i and run concurrently.
EnsembleResult run_ensemble(const RunConfig& config, int n_traj, unsigned max_threads = 0);

StateVector initial_state(const RunConfig& config);

}  // namespace qmm
