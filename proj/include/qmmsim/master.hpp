#pragma once

#include <cstdint>
#include <vector>

#include "qmmsim/model.hpp"
#include "qmmsim/operators.hpp"

namespace qmm {

struct DensityOp {
  HilbertLayout layout;
  CMat mat;

  DensityOp() = default;
  DensityOp(HilbertLayout lay, CMat m);

  static DensityOp pure(const StateVector& psi);
  static DensityOp maximally_mixed(const HilbertLayout& lay);

  double trace_error() const { return std::abs(mat.trace().real() - 1.0) + std::abs(mat.trace().imag()); }
  double hermiticity_error() const { return (mat - mat.adjoint()).cwiseAbs().maxCoeff(); }
  double min_eigenvalue() const;
};

// Real coefficients of rho = 1/4 sum_{a,b} Pi_ab sigma^1_a x sigma^2_b,
// a,b in {0,x,y,z}. Pi_00 = 1 for a unit-trace state.
struct BlochTensor {
  Eigen::Matrix4d pi = Eigen::Matrix4d::Zero();
  double sz_total() const { return pi(3, 0) + pi(0, 3); }
};

BlochTensor bloch_encode(const DensityOp& rho);
DensityOp bloch_decode(const BlochTensor& pi);

// dr/dt = -i[H,rho] + sum_j (L_j rho L_j^dag - 1/2 {L_j^dag L_j, rho})
CMat lindblad_rhs(const DensityOp& rho, const Operator& h, const LindbladSet& lindblads);

// RK4 propagation of a static-Hamiltonian master equation, recording
// expectation values of `observables` every `stride` steps (sample 0 included).
struct MasterRun {
  std::vector<double> times;
  std::vector<std::vector<double>> observables;  // one series per requested operator
  DensityOp final_state;
};
MasterRun master_evolve(const Operator& h, const LindbladSet& lindblads, const DensityOp& rho0,
                        double duration, double dt, int stride,
                        const std::vector<Operator>& observables);

// --- Fig. 3 style runs -------------------------------------------------

struct ScalingRunOptions {
  double duration = 0;   // total integration time (not periods)
  double dt = 0;
  int stride = 4;
  std::uint64_t seed = 0;
  // initial single-qubit Bloch vector, default +x eigenstate
  double r0_x = 1.0, r0_y = 0.0, r0_z = 0.0;
};

struct SzSeries {
  std::vector<double> times;
  std::vector<double> sz;
};

// N independent single-qubit master equations sharing the common harmonic
// drive, each with its own bias-noise realization; returns the summed
// <sigma_z>. Qubit j draws from the stream derive_seed(opts.seed, j), so
// enlarging N keeps the first j streams unchanged.
SzSeries run_uncoupled_ensemble(const ModelParams& params, int n_qubits,
                                const ScalingRunOptions& opts);

// Two coupled qubits (sigma_z sigma_z coupling g_qq) with common drive,
// per-qubit noise, and the per-qubit Lindblad set; full 4x4 density matrix,
// recorded as a generalized Bloch tensor trajectory.
struct CoupledPairRun {
  std::vector<double> times;
  std::vector<double> sz;
  std::vector<BlochTensor> bloch;
};
CoupledPairRun run_coupled_pair(const ModelParams& params, const ScalingRunOptions& opts);

}  // namespace qmm
