#include "qmmsim/master.hpp"

#include <cmath>

#include "qmmsim/errors.hpp"
#include "qmmsim/rng.hpp"

namespace qmm {

namespace {

using Eigen::Matrix2cd;
using Eigen::Matrix4cd;

const Matrix2cd kSx = (Matrix2cd() << 0, 1, 1, 0).finished();
const Matrix2cd kSy = (Matrix2cd() << 0, Cx(0, -1), Cx(0, 1), 0).finished();
const Matrix2cd kSz = (Matrix2cd() << 1, 0, 0, -1).finished();
const Matrix2cd kSm = (Matrix2cd() << 0, 0, 1, 0).finished();
const Matrix2cd kId2 = Matrix2cd::Identity();

Matrix2cd pauli_by_index(int a) {
  switch (a) {
    case 0: return kId2;
    case 1: return kSx;
    case 2: return kSy;
    default: return kSz;
  }
}

// fixed-size Lindblad RHS used by the scaling runs
template <typename M>
M rhs_fixed(const M& h, const std::vector<M>& ls, const std::vector<M>& ldl, const M& rho) {
  M d = Cx(0, -1) * (h * rho - rho * h);
  for (std::size_t j = 0; j < ls.size(); ++j)
    d += ls[j] * rho * ls[j].adjoint() - 0.5 * (ldl[j] * rho + rho * ldl[j]);
  return d;
}

template <typename M, typename HFn>
void rk4_step(const HFn& h_at, const std::vector<M>& ls, const std::vector<M>& ldl, double t,
              double dt, M& rho) {
  const M k1 = rhs_fixed(h_at(t), ls, ldl, rho);
  const M k2 = rhs_fixed(h_at(t + 0.5 * dt), ls, ldl, M(rho + 0.5 * dt * k1));
  const M k3 = rhs_fixed(h_at(t + 0.5 * dt), ls, ldl, M(rho + 0.5 * dt * k2));
  const M k4 = rhs_fixed(h_at(t + dt), ls, ldl, M(rho + dt * k3));
  rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Relaxation and dephasing for the chain runs, in the eigenbasis of the
// qubit Hamiltonian -Delta/2 sigma_x (ground state +x). A stationary
// polarized state is what makes the drive response phase-stable; damping
// along a transverse axis would let the polarization phase-diffuse and
// erase the collective signal.
std::vector<Matrix2cd> chain_qubit_lindblads(const ModelParams& p) {
  std::vector<Matrix2cd> ls;
  if (p.gamma_z > 0) {
    Matrix2cd lower;  // |+x><-x| = (sigma_z - i sigma_y)/2
    lower << 0.5, -0.5, 0.5, -0.5;
    ls.push_back(std::sqrt(2.0 * p.gamma_z) * lower);
  }
  if (p.gamma_xy > 0) {
    Matrix2cd deph;  // |-x><-x|
    deph << 0.5, -0.5, -0.5, 0.5;
    ls.push_back(std::sqrt(2.0 * p.gamma_xy) * deph);
  }
  return ls;
}

}  // namespace

DensityOp::DensityOp(HilbertLayout lay, CMat m) : layout(std::move(lay)), mat(std::move(m)) {
  if (mat.rows() != mat.cols() || mat.rows() != layout.total_dim())
    throw std::invalid_argument("DensityOp: matrix does not match layout dimension");
}

DensityOp DensityOp::pure(const StateVector& psi) {
  return DensityOp(psi.layout, psi.amps * psi.amps.adjoint());
}

DensityOp DensityOp::maximally_mixed(const HilbertLayout& lay) {
  const int d = lay.total_dim();
  return DensityOp(lay, CMat::Identity(d, d) / double(d));
}

double DensityOp::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (mat + mat.adjoint()),
                                         Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

BlochTensor bloch_encode(const DensityOp& rho) {
  if (rho.layout.total_dim() != 4 || rho.layout.n_qubits() != 2)
    throw std::invalid_argument("bloch_encode: two-qubit layout required");
  BlochTensor out;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Matrix4cd sab = Matrix4cd::Zero();
      const Matrix2cd sa = pauli_by_index(a), sb = pauli_by_index(b);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l) sab(2 * i + k, 2 * j + l) = sa(i, j) * sb(k, l);
      out.pi(a, b) = (rho.mat * sab).trace().real();
    }
  return out;
}

DensityOp bloch_decode(const BlochTensor& pi) {
  CMat rho = CMat::Zero(4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const Matrix2cd sa = pauli_by_index(a), sb = pauli_by_index(b);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          for (int k = 0; k < 2; ++k)
            for (int l = 0; l < 2; ++l)
              rho(2 * i + k, 2 * j + l) += 0.25 * pi.pi(a, b) * sa(i, j) * sb(k, l);
    }
  return DensityOp(HilbertLayout::qubits(2), std::move(rho));
}

CMat lindblad_rhs(const DensityOp& rho, const Operator& h, const LindbladSet& lindblads) {
  if (rho.layout != h.layout) throw std::invalid_argument("lindblad_rhs: layout mismatch");
  CMat d = Cx(0, -1) * (h.mat * rho.mat - rho.mat * h.mat);
  for (const auto& ch : lindblads) {
    const CMat ldl = ch.op.mat.adjoint() * ch.op.mat;
    d += ch.op.mat * rho.mat * ch.op.mat.adjoint() - 0.5 * (ldl * rho.mat + rho.mat * ldl);
  }
  return d;
}

MasterRun master_evolve(const Operator& h, const LindbladSet& lindblads, const DensityOp& rho0,
                        double duration, double dt, int stride,
                        const std::vector<Operator>& observables) {
  if (dt <= 0 || duration < 0) throw std::invalid_argument("master_evolve: bad time step");
  if (stride < 1) stride = 1;
  std::vector<CMat> ls, ldl;
  for (const auto& ch : lindblads) {
    ls.push_back(ch.op.mat);
    ldl.push_back(ch.op.mat.adjoint() * ch.op.mat);
  }
  auto h_at = [&](double) -> const CMat& { return h.mat; };

  MasterRun run;
  CMat rho = rho0.mat;
  const long n_steps = std::lround(duration / dt);
  for (long step = 0; step <= n_steps; ++step) {
    const double t = step * dt;
    if (step % stride == 0) {
      run.times.push_back(t);
      if (run.observables.size() != observables.size()) run.observables.resize(observables.size());
      for (std::size_t o = 0; o < observables.size(); ++o)
        run.observables[o].push_back((rho * observables[o].mat).trace().real());
    }
    if (step == n_steps) break;
    rk4_step(h_at, ls, ldl, t, dt, rho);
  }
  run.final_state = DensityOp(rho0.layout, std::move(rho));
  return run;
}

SzSeries run_uncoupled_ensemble(const ModelParams& params, int n_qubits,
                                const ScalingRunOptions& opts) {
  params.validate();
  if (n_qubits < 1) throw std::invalid_argument("run_uncoupled_ensemble: n_qubits >= 1");
  if (params.g_qq != 0.0)
    throw std::invalid_argument("run_uncoupled_ensemble: requires g_qq = 0");
  if (opts.dt <= 0) throw std::invalid_argument("run_uncoupled_ensemble: dt must be > 0");

  const long n_steps = std::lround(opts.duration / opts.dt);
  const long n_samples = n_steps / opts.stride + 1;
  SzSeries out;
  out.times.resize(n_samples);
  out.sz.assign(n_samples, 0.0);
  for (long s = 0; s < n_samples; ++s) out.times[s] = s * opts.stride * opts.dt;

  const auto ls = chain_qubit_lindblads(params);
  std::vector<Matrix2cd> ldl;
  for (const auto& l : ls) ldl.push_back(l.adjoint() * l);

  const Matrix2cd rho_init =
      0.5 * (kId2 + opts.r0_x * kSx + opts.r0_y * kSy + opts.r0_z * kSz);

  for (int j = 0; j < n_qubits; ++j) {
    Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(j)));
    const double delta = params.delta_j(std::min(j, params.n_qubits - 1));
    Matrix2cd rho = rho_init;
    long sample = 0;
    for (long step = 0; step <= n_steps; ++step) {
      if (step % opts.stride == 0) out.sz[sample++] += (rho * kSz).trace().real();
      if (step == n_steps) break;
      const double t = step * opts.dt;
      const double noise = sample_bias_noise(rng, params.noise_d, opts.dt);
      auto h_at = [&](double tt) -> Matrix2cd {
        const double bias = params.drive_amp * std::sin(params.drive_freq * tt) + noise;
        return -0.5 * (delta * kSx + bias * kSz);
      };
      rk4_step(h_at, ls, ldl, t, opts.dt, rho);
    }
  }
  return out;
}

CoupledPairRun run_coupled_pair(const ModelParams& params, const ScalingRunOptions& opts) {
  params.validate();
  if (params.n_qubits != 2) throw std::invalid_argument("run_coupled_pair: n_qubits must be 2");
  if (opts.dt <= 0) throw std::invalid_argument("run_coupled_pair: dt must be > 0");

  // two-qubit operators, qubit 0 slowest
  auto kron2 = [](const Matrix2cd& a, const Matrix2cd& b) {
    Matrix4cd m;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return m;
  };
  const Matrix4cd sx1 = kron2(kSx, kId2), sx2 = kron2(kId2, kSx);
  const Matrix4cd sz1 = kron2(kSz, kId2), sz2 = kron2(kId2, kSz);
  const Matrix4cd zz = kron2(kSz, kSz);

  std::vector<Matrix4cd> ls, ldl;
  for (const auto& l2 : chain_qubit_lindblads(params)) {
    ls.push_back(kron2(l2, kId2));
    ls.push_back(kron2(kId2, l2));
  }
  for (const auto& l : ls) ldl.push_back(l.adjoint() * l);

  const Matrix2cd rho1 =
      0.5 * (kId2 + opts.r0_x * kSx + opts.r0_y * kSy + opts.r0_z * kSz);
  Matrix4cd rho = kron2(rho1, rho1);

  Rng rng0(derive_seed(opts.seed, 0));
  Rng rng1(derive_seed(opts.seed, 1));

  const long n_steps = std::lround(opts.duration / opts.dt);
  CoupledPairRun out;
  const HilbertLayout lay2 = HilbertLayout::qubits(2);
  for (long step = 0; step <= n_steps; ++step) {
    const double t = step * opts.dt;
    if (step % opts.stride == 0) {
      DensityOp rho_op(lay2, CMat(rho));
      BlochTensor pi = bloch_encode(rho_op);
      if (rho_op.min_eigenvalue() < -1e-6)
        throw IntegrationError("run_coupled_pair: positivity violated, reduce dt");
      out.times.push_back(t);
      out.sz.push_back(pi.sz_total());
      out.bloch.push_back(pi);
    }
    if (step == n_steps) break;
    const double noise0 = sample_bias_noise(rng0, params.noise_d, opts.dt);
    const double noise1 = sample_bias_noise(rng1, params.noise_d, opts.dt);
    auto h_at = [&](double tt) -> Matrix4cd {
      const double drive = params.drive_amp * std::sin(params.drive_freq * tt);
      return -0.5 * (params.delta_j(0) * sx1 + params.delta_j(1) * sx2 +
                     (drive + noise0) * sz1 + (drive + noise1) * sz2) +
             params.g_qq * zz;
    };
    rk4_step(h_at, ls, ldl, t, opts.dt, rho);
  }
  return out;
}

}  // namespace qmm
