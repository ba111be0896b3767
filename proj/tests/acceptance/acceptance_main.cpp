// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Heavier than the unit tests; runtimes are dominated by the
// detector ensembles (criteria 1-2) and the scaling sweeps (criteria 3-4).

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "qmmsim/experiment.hpp"
#include "qmmsim/master.hpp"
#include "qmmsim/oracle_suite.hpp"
#include "qmmsim/parallel.hpp"
#include "qmmsim/qsd.hpp"
#include "qmmsim/rng.hpp"
#include "qmmsim/semiclassical.hpp"
#include "qmmsim/spectral.hpp"

using namespace qmm;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s  criterion %d  %-28s  %s\n", pass ? "PASS" : "FAIL", criterion, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

fs::path outdir(const std::string& leaf) {
  const fs::path dir = fs::temp_directory_path() / "qmmsim_acceptance" / leaf;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// ---- criterion 1: Fig. 2 resonant readout ------------------------------

void criterion_1() {
  auto cfg = ExperimentConfig::for_tag("fig2-resonant");
  cfg.photons = {0, 1};
  cfg.n_traj = 20;
  cfg.seed = 20250811;
  const auto summary = run_experiment(cfg, outdir("fig2_resonant").string());
  const double rx = summary.metric("photons_1", "ratio_x_vs_0");
  const double rp = summary.metric("photons_1", "ratio_p_vs_0");
  const bool pass = rx >= 10.0 && rp >= 10.0 && !summary.any_flagged;
  report(1, "fig2 resonant >= 10x", pass,
         fmt("ratio_x=%.2f ratio_p=%.2f flagged=%d (threshold 10)", rx, rp,
             summary.any_flagged ? 1 : 0));
}

// ---- criterion 2: Fig. 2 mismatched frequencies ------------------------

void criterion_2() {
  auto cfg = ExperimentConfig::for_tag("fig2-mismatch");
  cfg.photons = {0, 1};
  cfg.n_traj = 20;
  cfg.seed = 20250812;
  const auto summary = run_experiment(cfg, outdir("fig2_mismatch").string());
  const double rp = summary.metric("photons_1", "ratio_p_vs_0");
  const bool pass = rp >= 5.0 && !summary.any_flagged;
  report(2, "fig2 mismatch p >= 5x", pass,
         fmt("ratio_p=%.2f flagged=%d (threshold 5)", rp, summary.any_flagged ? 1 : 0));
}

// ---- criterion 3: Fig. 3a scaling with N -------------------------------

void criterion_3() {
  auto cfg = ExperimentConfig::for_tag("fig3-uncoupled");
  cfg.seed = 20250813;
  std::vector<double> ns;
  for (int n = 1; n <= 9; ++n) ns.push_back(n);
  const SweepResult r = sweep(cfg, "n_qubits", ns, outdir("fig3_uncoupled").string());

  bool monotone = true;
  for (std::size_t i = 1; i < r.snr.size(); ++i)
    if (r.snr[i] < r.snr[i - 1]) monotone = false;
  const double ratio = r.snr.back() / r.snr.front();
  const bool pass = monotone && ratio >= 1.4 && ratio <= 3.2;
  std::string snrs;
  for (double v : r.snr) snrs += fmt("%.2f ", v);
  report(3, "fig3a snr scaling", pass,
         fmt("snr(9)/snr(1)=%.2f in [1.4,3.2], monotone=%d; snr(N)= %s", ratio,
             monotone ? 1 : 0, snrs.c_str()));
}

// ---- criterion 4: Fig. 3c coupled pair ---------------------------------

void criterion_4() {
  auto cfg = ExperimentConfig::for_tag("fig3-coupled");
  cfg.seed = 20250814;
  const std::vector<double> gs{0.0, 0.04, 0.08, 0.12};
  const SweepResult r = sweep(cfg, "g_qq", gs, outdir("fig3_coupled").string());

  // (a) dominant noise-response frequency shifts monotonically
  bool freq_monotone = true;
  const double dir = r.peak_freq.back() - r.peak_freq.front();
  for (std::size_t i = 1; i < r.peak_freq.size(); ++i) {
    const double step = r.peak_freq[i] - r.peak_freq[i - 1];
    if (dir >= 0 ? step < 0 : step > 0) freq_monotone = false;
  }
  const bool freq_shifts = std::abs(dir) > 0.02;
  // (b) SNR increases relative to g_qq = 0
  bool snr_up = true;
  for (std::size_t i = 1; i < r.snr.size(); ++i)
    if (r.snr[i] <= r.snr.front()) snr_up = false;
  // (c) raw signal amplitude decreases
  bool amp_down = true;
  for (std::size_t i = 1; i < r.signal_amplitude.size(); ++i)
    if (r.signal_amplitude[i] > 1.05 * r.signal_amplitude[i - 1]) amp_down = false;
  if (!(r.signal_amplitude.back() < 0.9 * r.signal_amplitude.front())) amp_down = false;

  std::string detail = "peaks= ";
  for (double v : r.peak_freq) detail += fmt("%.3f ", v);
  detail += " snr= ";
  for (double v : r.snr) detail += fmt("%.2f ", v);
  detail += " amp= ";
  for (double v : r.signal_amplitude) detail += fmt("%.3g ", v);
  report(4, "fig3c coupled-pair trends", freq_monotone && freq_shifts && snr_up && amp_down,
         detail);
}

// ---- criterion 5: oracle equivalence suite ------------------------------

void criterion_5() {
  const auto checks = run_oracle_suite(20250815);
  bool pass = all_passed(checks);
  std::string detail;
  for (const auto& c : checks)
    if (!c.pass) detail += c.name + fmt("=%.3g ", c.value);
  if (pass) detail = fmt("%zu checks green", checks.size());
  report(5, "oracle equivalence suite", pass, detail);
}

// ---- criterion 6: sqrt(N) suppression -----------------------------------

void criterion_6() {
  const double dt = 0.02, t_end = 20.0;
  const std::size_t steps = std::size_t(t_end / dt);
  const std::vector<double> ns{4, 16, 64, 256};
  const int n_paths = 1000;
  const double noise_d = 1e-3, gamma = 1.0, delta_eff = 0.2, sx0 = 1.0;
  auto alpha_sq = [](double t) { return 0.05 * t; };

  // Monte Carlo over noise paths: std of the noise bracket vs N
  std::vector<double> stds, coherent_terms;
  std::uint64_t stream = 1;
  for (double nd : ns) {
    const int n = int(nd);
    double acc = 0, acc2 = 0, coh = 0;
    for (int rep = 0; rep < n_paths; ++rep) {
      std::vector<std::vector<double>> paths(n);
      for (int j = 0; j < n; ++j) {
        Rng rng(derive_seed(998877, stream++));
        paths[j].resize(steps);
        const double sd = std::sqrt(2.0 * noise_d / dt);
        for (auto& v : paths[j]) v = sd * rng.normal();
      }
      const CollectiveSz out = collective_sz(gamma, alpha_sq, paths, delta_eff, t_end, dt, sx0);
      acc += out.noise_bracket;
      acc2 += out.noise_bracket * out.noise_bracket;
      if (rep == 0) coh = out.coherent_term;
    }
    stds.push_back(std::sqrt(std::max(0.0, acc2 / n_paths - (acc / n_paths) * (acc / n_paths))));
    coherent_terms.push_back(coh);
  }
  const double noise_slope = fit_loglog_slope(ns, stds);
  bool coherent_linear = true;
  for (std::size_t i = 0; i < ns.size(); ++i)
    if (std::abs(coherent_terms[i] / coherent_terms[0] - ns[i] / ns[0]) > 1e-9)
      coherent_linear = false;

  // spectral powers from integrated Bloch time series
  const double a0 = 2e-4, omega_m = 0.05, spec_d = 5e-7, spec_T = 2000.0, spec_dt = 0.05;
  const int spec_R = 12, stride = 2;
  std::vector<double> sig_powers, floor_psd;
  for (double nd : ns) {
    std::vector<Spectrum> spectra(spec_R);
    parallel_for(spec_R, [&](std::size_t r) {
      SpinEnsembleOptions opts;
      opts.n_qubits = int(nd);
      opts.gamma = 1.0;
      opts.delta_eff = 0.2;
      opts.alpha_sq = [a0, omega_m](double t) { return a0 * (1.0 - std::cos(omega_m * t)); };
      opts.noise_d = spec_d;
      opts.duration = spec_T;
      opts.dt = spec_dt;
      opts.stride = stride;
      opts.seed = derive_seed(445566 + int(nd), r);
      const SpinEnsembleRun run = run_spin_ensemble(opts);
      spectra[r] = psd(run.sz, spec_dt * stride, WindowKind::Hann, 8);
    });
    const Spectrum mean = average_spectra(spectra);
    const SnrReport rep = snr(mean, omega_m, 2, 0.5, 1.0);
    sig_powers.push_back(rep.signal_power);
    floor_psd.push_back(rep.baseline_power);
  }
  const double sig_slope = fit_loglog_slope(ns, sig_powers);
  const double floor_slope = fit_loglog_slope(ns, floor_psd);

  const bool pass = std::abs(noise_slope + 0.5) <= 0.1 && coherent_linear &&
                    std::abs(sig_slope - 2.0) <= 0.2 && std::abs(floor_slope - 1.0) <= 0.2;
  report(6, "sqrt(N) suppression", pass,
         fmt("noise std slope=%.3f (-0.5+-0.1), coherent prop N=%d, signal slope=%.2f "
             "(2.0+-0.2), floor slope=%.2f (1.0+-0.2)",
             noise_slope, coherent_linear ? 1 : 0, sig_slope, floor_slope));
}

// ---- criterion 7: perturbative solution ---------------------------------

void criterion_7() {
  const double c = 0.001, delta = 0.02, t_end = 25.0, dt = 1e-3;  // phase 2ct = 0.05, Delta_eff t = 0.5
  SpinEnsembleOptions opts;
  opts.n_qubits = 1;
  opts.gamma = 1.0;
  opts.delta_eff = delta;
  opts.alpha_sq = [c](double) { return c; };
  opts.duration = t_end;
  opts.dt = dt;
  const SpinEnsembleRun full = run_spin_ensemble(opts);
  const std::vector<double> eta(std::size_t(t_end / dt), 0.0);
  const double approx = perturbative_sz(1.0, [c](double) { return c; }, eta, delta, t_end, dt, 1.0);
  const double rel = std::abs(approx - full.sz.back()) / std::abs(full.sz.back());
  report(7, "perturbative s_z", rel < 0.05,
         fmt("relative error %.4f at accumulated phase 0.05 (threshold 0.05)", rel));
}

// ---- criterion 8: statistical convergence to the master equation --------

void criterion_8() {
  ModelParams p = ModelParams::defaults(1);
  p.delta = {0.4};
  p.eps = {1.0};
  p.gamma_z = 0.03;
  p.gamma_xy = 0.015;

  const HilbertLayout lay = HilbertLayout::qubits(1);
  Operator h(lay, CMat((-0.5 * (0.4 * pauli(PauliAxis::X).mat + 1.0 * pauli(PauliAxis::Z).mat))));
  const LindbladSet lindblads = build_qubit_lindblads(p, lay);

  const double dt = kTwoPi / 1600.0, t_end = 60.0;
  const long n_steps = std::lround(t_end / dt);
  const int stride = 10;

  CVec plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const StateVector psi0(lay, plus);
  const auto master =
      master_evolve(h, lindblads, DensityOp::pure(psi0), t_end, dt, stride, {pauli(PauliAxis::Z)});

  const QsdStepper stepper(h, lindblads, dt, QsdScheme::ExponentialEuler);
  const std::vector<int> ensembles{100, 400, 1600};
  const int repeats = 4;  // disjoint seed blocks averaged to steady the fit
  std::vector<double> rms;
  std::uint64_t block = 0;
  for (int n_traj : ensembles) {
    double ms_acc = 0.0;
    for (int rep = 0; rep < repeats; ++rep) {
      std::vector<std::vector<double>> sums(n_traj);
      const std::uint64_t base = 777000 + (block++) * 100000;
      parallel_for(n_traj, [&](std::size_t i) {
        Rng rng(derive_seed(base, i));
        CVec psi = psi0.amps;
        std::vector<double> sz;
        for (long s = 0; s <= n_steps; ++s) {
          if (s % stride == 0) {
            const double v = (psi.adjoint() * (pauli(PauliAxis::Z).mat * psi))(0).real();
            sz.push_back(v);
          }
          if (s == n_steps) break;
          stepper.step(psi, s * dt, rng);
        }
        sums[i] = std::move(sz);
      });
      double acc = 0.0;
      const std::size_t n_pts = master.times.size();
      for (std::size_t k = 0; k < n_pts; ++k) {
        double mean = 0.0;
        for (int i = 0; i < n_traj; ++i) mean += sums[i][k];
        mean /= n_traj;
        const double d = mean - master.observables[0][k];
        acc += d * d;
      }
      ms_acc += acc / double(n_pts);
    }
    rms.push_back(std::sqrt(ms_acc / repeats));
  }
  std::vector<double> ns(ensembles.begin(), ensembles.end());
  const double slope = fit_loglog_slope(ns, rms);
  report(8, "qsd-master convergence", std::abs(slope + 0.5) <= 0.15,
         fmt("rms=[%.4g %.4g %.4g], slope=%.3f (-0.5+-0.15)", rms[0], rms[1], rms[2], slope));
}

}  // namespace

int main(int argc, char** argv) {
  // optional arguments select individual criteria, e.g. "acceptance 3 4"
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
  auto selected = [&](int c) {
    return wanted.empty() || std::find(wanted.begin(), wanted.end(), c) != wanted.end();
  };
  std::printf("qmmsim acceptance suite\n");
  if (selected(5)) criterion_5();
  if (selected(7)) criterion_7();
  if (selected(6)) criterion_6();
  if (selected(8)) criterion_8();
  if (selected(3)) criterion_3();
  if (selected(4)) criterion_4();
  if (selected(2)) criterion_2();
  if (selected(1)) criterion_1();
  std::printf("%s (%d failure%s)\n", g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES PRESENT",
              g_failures, g_failures == 1 ? "" : "s");
  return g_failures == 0 ? 0 : 1;
}
