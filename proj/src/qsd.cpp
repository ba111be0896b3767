#include "qmmsim/qsd.hpp"

#include <cmath>
#include <memory>

#include <unsupported/Eigen/MatrixFunctions>

#include "qmmsim/errors.hpp"
#include "qmmsim/parallel.hpp"

namespace qmm {

QubitInit qubit_init_from_string(const std::string& tag) {
  if (tag == "plus" || tag == "superposition") return QubitInit::SuperpositionPlus;
  if (tag == "ground" || tag == "zero") return QubitInit::Ground;
  if (tag == "excited" || tag == "one") return QubitInit::Excited;
  throw std::invalid_argument("RunConfig: unknown initial qubit state '" + tag + "'");
}

void RunConfig::validate() const {
  params.validate();
  if (dt <= 0) throw std::invalid_argument("RunConfig: dt must be > 0");
  if (duration_periods < warmup_periods)
    throw std::invalid_argument("RunConfig: duration must cover the warmup");
  if (record_stride < 1) throw std::invalid_argument("RunConfig: record_stride must be >= 1");
  if (initial_photons < 0 || initial_photons >= params.m_a)
    throw std::invalid_argument("RunConfig: initial photon number outside truncation");
  // dt must resolve every model frequency with at least 50 steps per cycle
  double f_max = std::max(params.omega_a, params.omega_b);
  for (int j = 0; j < params.n_qubits; ++j)
    f_max = std::max(f_max, std::hypot(params.delta_j(j), params.eps_j(j)));
  if (f_max > 0 && dt > kTwoPi / f_max / 50.0)
    throw std::invalid_argument("RunConfig: dt too coarse for the fastest model frequency");
}

const std::vector<double>& TrajectoryRecord::column(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return series[i];
  throw std::invalid_argument("TrajectoryRecord: no column named '" + name + "'");
}

std::vector<double> TrajectoryRecord::windowed(const std::string& name) const {
  const auto& col = column(name);
  std::vector<double> out;
  out.reserve(col.size());
  for (std::size_t i = 0; i < col.size(); ++i)
    if (in_window[i]) out.push_back(col[i]);
  return out;
}

StateVector initial_state(const RunConfig& config) {
  const auto& p = config.params;
  const HilbertLayout lay = p.layout();
  CVec qubit(2);
  switch (config.initial_qubits) {
    case QubitInit::SuperpositionPlus:
      qubit << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
      break;
    case QubitInit::Ground:
      qubit << 1.0, 0.0;
      break;
    case QubitInit::Excited:
      qubit << 0.0, 1.0;
      break;
  }
  CVec mode_a;
  if (config.initial_alpha) {
    mode_a = StateVector::coherent(HilbertLayout::single_mode(p.m_a), *config.initial_alpha).amps;
  } else {
    mode_a = CVec::Zero(p.m_a);
    mode_a(config.initial_photons) = 1.0;
  }
  CVec mode_b = CVec::Zero(p.m_b);
  mode_b(0) = 1.0;

  CVec amps = CVec::Ones(1);
  auto kron_vec = [](const CVec& a, const CVec& b) {
    CVec out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
      out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
  };
  for (int j = 0; j < p.n_qubits; ++j) amps = kron_vec(amps, qubit);
  amps = kron_vec(amps, mode_a);
  amps = kron_vec(amps, mode_b);
  return StateVector(lay, std::move(amps));
}

StateVector qsd_step(const StateVector& state, const Operator& h, const LindbladSet& lindblads,
                     double dt, Rng& rng) {
  if (state.layout != h.layout) throw std::invalid_argument("qsd_step: layout mismatch");
  const CVec& psi = state.amps;
  CVec dpsi = Cx(0, -1) * (h.mat * psi) * dt;
  for (const auto& ch : lindblads) {
    const CVec w = ch.op.mat * psi;
    const Cx l = psi.dot(w);
    const Cx ldag = std::conj(l);
    dpsi += (ldag * w - 0.5 * (ch.op.mat.adjoint() * w) - 0.5 * ldag * l * psi) * dt;
    const Cx dxi = rng.wiener(dt);
    dpsi += (w - l * psi) * dxi;
  }
  CVec next = psi + dpsi;
  const double nrm = next.norm();
  if (nrm < 1e-8) throw IntegrationError("qsd_step: norm collapsed");
  next /= nrm;
  return StateVector(state.layout, std::move(next));
}

QsdStepper::QsdStepper(const HamiltonianParts& parts, const LindbladSet& lindblads, double dt,
                       QsdScheme scheme)
    : layout_(parts.layout), dt_(dt), scheme_(scheme) {
  if (dt <= 0) throw std::invalid_argument("QsdStepper: dt must be > 0");
  const int dim = layout_.total_dim();
  CMat ldl_sum = CMat::Zero(dim, dim);
  for (const auto& ch : lindblads) {
    if (ch.op.layout != layout_) throw std::invalid_argument("QsdStepper: lindblad layout mismatch");
    ls_.push_back(ch.op.mat);
    ldl_sum += ch.op.mat.adjoint() * ch.op.mat;
  }
  if (scheme == QsdScheme::ExponentialEuler) {
    const CMat u = (Cx(0, -1) * dt * parts.h_static.mat).exp();
    matrix_ = u * (CMat::Identity(dim, dim) - 0.5 * dt * ldl_sum);
  } else {
    matrix_ = Cx(0, -1) * parts.h_static.mat - 0.5 * ldl_sum;
  }
  if (parts.x_a) {
    x_a_ = parts.x_a->mat;
    f_env_ = parts.f_envelope;
  }
  if (parts.x_b) {
    x_b_ = parts.x_b->mat;
    h_env_ = parts.h_envelope;
  }
}

QsdStepper::QsdStepper(const Operator& h, const LindbladSet& lindblads, double dt,
                       QsdScheme scheme)
    : QsdStepper(
          [&] {
            HamiltonianParts parts;
            parts.layout = h.layout;
            parts.h_static = h;
            return parts;
          }(),
          lindblads, dt, scheme) {}

double QsdStepper::step(CVec& psi, double t, Rng& rng) const {
  thread_local CVec next, w;
  if (scheme_ == QsdScheme::ExponentialEuler) {
    next.noalias() = matrix_ * psi;
  } else {
    next = psi;
    next.noalias() += dt_ * (matrix_ * psi);
  }
  if (x_a_) next.noalias() += Cx(0, -dt_) * f_env_(t) * (*x_a_ * psi);
  if (x_b_) next.noalias() += Cx(0, -dt_) * h_env_(t) * (*x_b_ * psi);

  for (const auto& l : ls_) {
    w.noalias() = l * psi;
    const Cx lv = psi.dot(w);
    next += (std::conj(lv) * dt_) * w - (0.5 * std::norm(lv) * dt_) * psi;
    const Cx dxi = rng.wiener(dt_);
    next += dxi * w - (lv * dxi) * psi;
  }

  const double nrm = next.norm();
  if (nrm < 1e-8) throw IntegrationError("QsdStepper: norm collapsed");
  psi = next / nrm;
  return std::abs(nrm - 1.0);
}

namespace {

// Prepared per-config machinery, shared read-only across trajectories.
struct QsdWorkspace {
  HilbertLayout lay;
  std::unique_ptr<QsdStepper> stepper;
  std::vector<std::string> obs_names;
  std::vector<CMat> obs;
  int ia = -1, ib = -1;
};

QsdWorkspace prepare(const RunConfig& config) {
  const auto& p = config.params;
  QsdWorkspace ws;
  auto parts = build_hamiltonian_parts(p);
  ws.lay = parts.layout;
  ws.stepper =
      std::make_unique<QsdStepper>(parts, build_lindblads(p), config.dt, config.scheme);

  ws.ia = ws.lay.index_of("A");
  ws.ib = ws.lay.index_of("B");
  const Operator b = annihilation(p.m_b);
  const CMat bmat = b.mat;
  const CMat x_b_local = std::sqrt(1.0 / (2.0 * p.omega_b)) * (bmat + bmat.adjoint());
  const CMat p_b_local = Cx(0, 1) * std::sqrt(p.omega_b / 2.0) * (bmat.adjoint() - bmat);

  ws.obs_names.push_back("x_b");
  ws.obs.push_back(embed(Operator(b.layout, x_b_local), ws.ib, ws.lay).mat);
  ws.obs_names.push_back("p_b");
  ws.obs.push_back(embed(Operator(b.layout, p_b_local), ws.ib, ws.lay).mat);
  for (int j = 0; j < p.n_qubits; ++j) {
    ws.obs_names.push_back("sz_q" + std::to_string(j));
    ws.obs.push_back(embed(pauli(PauliAxis::Z), j, ws.lay).mat);
  }
  ws.obs_names.push_back("n_a");
  ws.obs.push_back(embed(number_op(p.m_a), ws.ia, ws.lay).mat);
  ws.obs_names.push_back("n_b");
  ws.obs.push_back(embed(number_op(p.m_b), ws.ib, ws.lay).mat);
  return ws;
}

TrajectoryRecord run_one(const RunConfig& config, const QsdWorkspace& ws, std::uint64_t seed) {
  const double dt = config.dt;
  const long n_steps = std::lround(config.duration_periods * kTwoPi / dt);
  const double t_warm = config.warmup_periods * kTwoPi;

  TrajectoryRecord rec;
  rec.seed = seed;
  rec.dt = dt;
  rec.stride = config.record_stride;
  rec.names = ws.obs_names;
  rec.names.push_back("Sz");
  rec.names.push_back("norm_drift");
  rec.series.resize(rec.names.size());

  Rng rng(seed);
  CVec psi = initial_state(config).amps;

  double norm_drift = 0.0;
  for (long step = 0; step <= n_steps; ++step) {
    const double t = step * dt;
    if (step % config.record_stride == 0) {
      rec.times.push_back(t);
      rec.in_window.push_back(t >= t_warm ? 1 : 0);
      double sz_total = 0.0;
      for (std::size_t o = 0; o < ws.obs.size(); ++o) {
        const double v = psi.dot(ws.obs[o] * psi).real();
        rec.series[o].push_back(v);
        if (ws.obs_names[o].rfind("sz_q", 0) == 0) sz_total += v;
      }
      rec.series[ws.obs.size()].push_back(sz_total);
      rec.series[ws.obs.size() + 1].push_back(norm_drift);
      StateVector sv(ws.lay, psi);
      const double leak =
          std::max(top_level_population(sv, ws.ia), top_level_population(sv, ws.ib));
      rec.max_leakage = std::max(rec.max_leakage, leak);
      if (leak > config.leakage_threshold) rec.flagged = true;
    }
    if (step == n_steps) break;
    norm_drift = ws.stepper->step(psi, t, rng);
    rec.max_norm_drift = std::max(rec.max_norm_drift, norm_drift);
  }
  return rec;
}

}  // namespace

TrajectoryRecord run_trajectory(const RunConfig& config) {
  config.validate();
  const QsdWorkspace ws = prepare(config);
  return run_one(config, ws, config.seed);
}

EnsembleResult run_ensemble(const RunConfig& config, int n_traj, unsigned max_threads) {
  config.validate();
  if (n_traj < 1) throw std::invalid_argument("run_ensemble: n_traj must be >= 1");
  const QsdWorkspace ws = prepare(config);

  EnsembleResult result;
  result.trajectories.resize(n_traj);
  parallel_for(
      n_traj,
      [&](std::size_t i) { result.trajectories[i] = run_one(config, ws, config.seed + i); },
      max_threads);

  const TrajectoryRecord& first = result.trajectories.front();
  TrajectoryRecord mean;
  mean.seed = config.seed;
  mean.dt = first.dt;
  mean.stride = first.stride;
  mean.times = first.times;
  mean.in_window = first.in_window;
  mean.names = first.names;
  mean.series.assign(first.names.size(), std::vector<double>(first.times.size(), 0.0));
  result.stderr_.assign(first.names.size(), std::vector<double>(first.times.size(), 0.0));
  for (const auto& tr : result.trajectories) {
    mean.flagged = mean.flagged || tr.flagged;
    mean.max_leakage = std::max(mean.max_leakage, tr.max_leakage);
    mean.max_norm_drift = std::max(mean.max_norm_drift, tr.max_norm_drift);
    for (std::size_t c = 0; c < mean.series.size(); ++c)
      for (std::size_t s = 0; s < mean.times.size(); ++s) mean.series[c][s] += tr.series[c][s];
  }
  for (auto& col : mean.series)
    for (auto& v : col) v /= double(n_traj);
  if (n_traj > 1) {
    for (std::size_t c = 0; c < mean.series.size(); ++c)
      for (std::size_t s = 0; s < mean.times.size(); ++s) {
        double ss = 0.0;
        for (const auto& tr : result.trajectories) {
          const double d = tr.series[c][s] - mean.series[c][s];
          ss += d * d;
        }
        result.stderr_[c][s] = std::sqrt(ss / (double(n_traj) * double(n_traj - 1)));
      }
  }
  result.mean = std::move(mean);
  return result;
}

}  // namespace qmm
