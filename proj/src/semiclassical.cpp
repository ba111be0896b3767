#include "qmmsim/semiclassical.hpp"

#include <cmath>
#include <stdexcept>

#include "qmmsim/io.hpp"
#include "qmmsim/model.hpp"
#include "qmmsim/rng.hpp"

namespace qmm {

double SpinState::norm(int j) const {
  return std::sqrt(sx[j] * sx[j] + sy[j] * sy[j] + sz[j] * sz[j]);
}

double SpinState::sz_total() const {
  double acc = 0.0;
  for (double v : sz) acc += v;
  return acc;
}

double DriveProfile::envelope_integral(double t) const {
  if (!f_envelope || t == 0.0) return 0.0;
  // composite Simpson on an even number of sub-intervals
  long n = std::lround(std::ceil(std::abs(t) / quad_dt));
  if (n % 2 == 1) ++n;
  if (n < 2) n = 2;
  const double h = t / double(n);
  double acc = f_envelope(0.0) + f_envelope(t);
  for (long i = 1; i < n; ++i) acc += f_envelope(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

double DriveProfile::alpha_sq(double t) const {
  const double integral = envelope_integral(t);
  return integral * integral;
}

double coherent_photon_number(const DriveProfile& profile, double t) {
  return profile.alpha_sq(t);
}

SpinState bloch_rhs(const SpinState& state, const std::vector<double>& gammas, double alpha_sq,
                    const std::vector<double>& noise, double delta_eff) {
  const int n = state.size();
  if (static_cast<int>(gammas.size()) != n || static_cast<int>(noise.size()) != n)
    throw std::invalid_argument("bloch_rhs: per-qubit parameter count mismatch");
  SpinState d(n);
  for (int j = 0; j < n; ++j) {
    const double u = gammas[j] * alpha_sq + noise[j];
    d.sx[j] = 2.0 * u * state.sy[j];
    d.sy[j] = -2.0 * u * state.sx[j] - delta_eff * state.sz[j];
    d.sz[j] = delta_eff * state.sy[j];
  }
  return d;
}

namespace {

// cumulative double integral of u(t) = gamma*alpha_sq(t) + eta(t) by the
// trapezoid rule on the sampling grid of eta
std::vector<double> double_integral(double gamma, const std::function<double(double)>& alpha_sq,
                                    const std::vector<double>& eta_path, double dt) {
  const std::size_t n = eta_path.size();
  std::vector<double> inner(n + 1, 0.0), outer(n + 1, 0.0);
  auto u = [&](std::size_t i) {
    const double a = alpha_sq ? alpha_sq(i * dt) : 0.0;
    const double eta = i < n ? eta_path[i] : (n ? eta_path[n - 1] : 0.0);
    return gamma * a + eta;
  };
  for (std::size_t i = 0; i < n; ++i) inner[i + 1] = inner[i] + 0.5 * dt * (u(i) + u(i + 1));
  for (std::size_t i = 0; i < n; ++i) outer[i + 1] = outer[i] + 0.5 * dt * (inner[i] + inner[i + 1]);
  return outer;
}

}  // namespace

std::vector<double> perturbative_sz_series(double gamma,
                                           const std::function<double(double)>& alpha_sq,
                                           const std::vector<double>& eta_path, double delta_eff,
                                           double dt, double s_x0) {
  auto outer = double_integral(gamma, alpha_sq, eta_path, dt);
  for (auto& v : outer) v *= -2.0 * delta_eff * s_x0;
  return outer;
}

double perturbative_sz(double gamma, const std::function<double(double)>& alpha_sq,
                       const std::vector<double>& eta_path, double delta_eff, double t, double dt,
                       double s_x0) {
  const auto series = perturbative_sz_series(gamma, alpha_sq, eta_path, delta_eff, dt, s_x0);
  std::size_t idx = static_cast<std::size_t>(std::lround(t / dt));
  if (idx >= series.size()) idx = series.size() - 1;
  return series[idx];
}

CollectiveSz collective_sz(double gamma, const std::function<double(double)>& alpha_sq,
                           const std::vector<std::vector<double>>& eta_paths, double delta_eff,
                           double t, double dt, double s_x0) {
  if (eta_paths.empty()) throw std::invalid_argument("collective_sz: no qubits");
  const int n = static_cast<int>(eta_paths.size());
  const std::size_t steps = eta_paths.front().size();
  for (const auto& p : eta_paths)
    if (p.size() != steps) throw std::invalid_argument("collective_sz: path length mismatch");

  std::size_t idx = static_cast<std::size_t>(std::lround(t / dt));
  if (idx > steps) idx = steps;

  CollectiveSz out;
  const std::vector<double> zero_path(steps, 0.0);
  out.coherent_bracket = double_integral(1.0, alpha_sq, zero_path, dt)[idx];
  double noise_sum = 0.0;
  for (const auto& path : eta_paths) noise_sum += double_integral(0.0, nullptr, path, dt)[idx];
  out.noise_bracket = noise_sum / double(n);
  out.coherent_term = -2.0 * gamma * delta_eff * s_x0 * double(n) * out.coherent_bracket;
  out.noise_term = -2.0 * delta_eff * s_x0 * noise_sum;
  out.total = out.coherent_term + out.noise_term;
  return out;
}

void write_collective_sz_csv(const std::string& path, double gamma,
                             const std::function<double(double)>& alpha_sq,
                             const std::vector<std::vector<double>>& eta_paths, double delta_eff,
                             double dt, double s_x0) {
  if (eta_paths.empty()) throw std::invalid_argument("write_collective_sz_csv: no qubits");
  const std::size_t steps = eta_paths.front().size();
  const int n = static_cast<int>(eta_paths.size());
  std::vector<double> total(steps + 1, 0.0);
  for (const auto& p : eta_paths) {
    const auto series = perturbative_sz_series(0.0, nullptr, p, delta_eff, dt, s_x0);
    for (std::size_t i = 0; i <= steps; ++i) total[i] += series[i];
  }
  const std::vector<double> zero_path(steps, 0.0);
  auto coherent = perturbative_sz_series(gamma, alpha_sq, zero_path, delta_eff, dt, s_x0);
  std::vector<double> times(steps + 1), noise(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    times[i] = i * dt;
    coherent[i] *= double(n);
    noise[i] = total[i];
    total[i] += coherent[i];
  }
  write_csv(path, {"time", "Sz_total", "coherent_term", "noise_term"},
            {times, total, coherent, noise});
}

SpinEnsembleRun run_spin_ensemble(const SpinEnsembleOptions& opts) {
  if (opts.n_qubits < 1) throw std::invalid_argument("run_spin_ensemble: n_qubits >= 1");
  if (opts.dt <= 0) throw std::invalid_argument("run_spin_ensemble: dt must be > 0");

  const int n = opts.n_qubits;
  SpinState s(n, opts.sx0);
  std::vector<Rng> rngs;
  rngs.reserve(n);
  for (int j = 0; j < n; ++j) rngs.emplace_back(derive_seed(opts.seed, j));

  const long n_steps = std::lround(opts.duration / opts.dt);
  SpinEnsembleRun run;
  std::vector<double> eta(n, 0.0);
  for (long step = 0; step <= n_steps; ++step) {
    const double t = step * opts.dt;
    if (step % opts.stride == 0) {
      run.times.push_back(t);
      run.sz.push_back(s.sz_total());
    }
    if (step == n_steps) break;

    for (int j = 0; j < n; ++j) eta[j] = sample_bias_noise(rngs[j], opts.noise_d, opts.dt);
    double delta_eff = opts.delta_eff;
    if (opts.mean_field) {
      double sx_sum = 0.0;
      for (int j = 0; j < n; ++j) sx_sum += s.sx[j];
      delta_eff = opts.kappa * sx_sum;
    }

    // RK4 per qubit, noise and Delta_eff frozen across stages
    for (int j = 0; j < n; ++j) {
      auto rhs = [&](double tt, double x, double y, double z, double& dx, double& dy,
                     double& dz) {
        const double a = opts.alpha_sq ? opts.alpha_sq(tt) : 0.0;
        const double u = opts.gamma * a + eta[j];
        dx = 2.0 * u * y;
        dy = -2.0 * u * x - delta_eff * z;
        dz = delta_eff * y;
      };
      double k1x, k1y, k1z, k2x, k2y, k2z, k3x, k3y, k3z, k4x, k4y, k4z;
      const double x = s.sx[j], y = s.sy[j], z = s.sz[j], h = opts.dt;
      rhs(t, x, y, z, k1x, k1y, k1z);
      rhs(t + 0.5 * h, x + 0.5 * h * k1x, y + 0.5 * h * k1y, z + 0.5 * h * k1z, k2x, k2y, k2z);
      rhs(t + 0.5 * h, x + 0.5 * h * k2x, y + 0.5 * h * k2y, z + 0.5 * h * k2z, k3x, k3y, k3z);
      rhs(t + h, x + h * k3x, y + h * k3y, z + h * k3z, k4x, k4y, k4z);
      s.sx[j] = x + h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
      s.sy[j] = y + h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
      s.sz[j] = z + h / 6.0 * (k1z + 2 * k2z + 2 * k3z + k4z);
    }
  }
  run.final_state = s;
  return run;
}

}  // namespace qmm
