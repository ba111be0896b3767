#include "qmmsim/oracle_suite.hpp"

#include <cmath>
#include <sstream>

#include "qmmsim/model.hpp"
#include "qmmsim/operators.hpp"
#include "qmmsim/oracles.hpp"
#include "qmmsim/parallel.hpp"
#include "qmmsim/qsd.hpp"
#include "qmmsim/rng.hpp"

namespace qmm {

namespace {

OracleCheck make_check(std::string name, double value, double threshold, bool greater_is_pass,
                       std::string detail = "") {
  OracleCheck c;
  c.name = std::move(name);
  c.value = value;
  c.threshold = threshold;
  c.greater_is_pass = greater_is_pass;
  c.pass = greater_is_pass ? (value >= threshold) : (value < threshold);
  c.detail = std::move(detail);
  return c;
}

StateVector random_state(const HilbertLayout& lay, Rng& rng) {
  CVec v(lay.total_dim());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Cx(rng.normal(), rng.normal());
  v /= v.norm();
  return StateVector(lay, std::move(v));
}

}  // namespace

std::vector<OracleCheck> run_oracle_suite(std::uint64_t seed, unsigned max_threads) {
  std::vector<OracleCheck> checks;

  // --- vacuum Rabi closed form vs rotating-wave model -------------------
  {
    const double g = 0.01, omega = 1.0, eps = 1.0;
    const int m_a = 3;
    const Operator h = rabi_rwa_hamiltonian(g, omega, eps, m_a);
    const ExactPropagator prop(h);
    const StateVector psi0 = vacuum_rabi_state(g, 0.0, m_a);
    const double period = 2.0 * bell_readout_times(g, 1);  // full Rabi cycle
    double min_fid = 1.0;
    for (int k = 1; k <= 40; ++k) {
      const double t = period * k / 40.0;
      min_fid = std::min(min_fid, fidelity(prop.evolve(psi0, t), vacuum_rabi_state(g, t, m_a)));
    }
    checks.push_back(make_check("vacuum_rabi_fidelity", min_fid, 1.0 - 1e-6, true,
                                "min over one Rabi cycle"));

    const Operator n_a = embed(number_op(m_a), "A", h.layout);
    const Operator sz01 =
        embed(pauli(PauliAxis::Z), 0, h.layout) + embed(pauli(PauliAxis::Z), 1, h.layout);
    double max_photon_oracle = 0, max_photon_num = 0, max_sz = 0;
    for (int n = 0; n < 3; ++n) {
      const double tn = bell_readout_times(g, n);
      const StateVector oracle = vacuum_rabi_state(g, tn, m_a);
      max_photon_oracle = std::max(max_photon_oracle, expectation(oracle, n_a).real());
      max_sz = std::max(max_sz, std::abs(expectation(oracle, sz01).real()));
      const StateVector evolved = prop.evolve(psi0, tn);
      max_photon_num = std::max(max_photon_num, expectation(evolved, n_a).real());
    }
    checks.push_back(
        make_check("bell_time_photon_oracle", max_photon_oracle, 1e-12, false, "t_0..t_2"));
    checks.push_back(
        make_check("bell_time_photon_numeric", max_photon_num, 1e-3, false, "t_0..t_2"));
    checks.push_back(make_check("bell_time_sz_oracle", max_sz, 1e-12, false, "<S^z> at t_n"));

    // symmetric Bell state content at t_0
    CVec bell = CVec::Zero(h.layout.total_dim());
    bell(1 * m_a + 0) = 1.0 / std::sqrt(2.0);  // |g e 0>
    bell(2 * m_a + 0) = 1.0 / std::sqrt(2.0);  // |e g 0>
    const StateVector bell_state(h.layout, std::move(bell));
    const double bell_fid = fidelity(prop.evolve(psi0, bell_readout_times(g, 0)), bell_state);
    checks.push_back(make_check("bell_state_fidelity", bell_fid, 1.0 - 1e-6, true));
  }

  // --- displacement operator --------------------------------------------
  {
    const int m = 16;
    const Cx alpha(1.3, 0.7);
    const HilbertLayout lay = HilbertLayout::single_mode(m);
    const StateVector vac = StateVector::basis_state(lay, {0});

    const StateVector disp0 = displacement_apply(Cx(0, 0), vac);
    checks.push_back(make_check("displacement_identity", (disp0.amps - vac.amps).norm(), 1e-12,
                                false, "||D(0)|0> - |0>||"));

    const StateVector coh = displacement_apply(alpha, vac);
    // analytic coherent amplitudes e^{-|a|^2/2} a^n / sqrt(n!)
    CVec ref(m);
    Cx amp = std::exp(-0.5 * std::norm(alpha));
    for (int n = 0; n < m; ++n) {
      ref(n) = amp;
      amp *= alpha / std::sqrt(double(n + 1));
    }
    const double overlap = std::abs(coh.amps.dot(ref));
    checks.push_back(make_check("displacement_coherent_overlap", overlap, 1.0 - 1e-8, true));

    const double nbar = expectation(coh, number_op(m)).real();
    checks.push_back(make_check("displacement_photon_number",
                                std::abs(nbar - std::norm(alpha)) / std::norm(alpha), 1e-6, false,
                                "relative error vs |alpha|^2"));

    Rng rng(derive_seed(seed, 7));
    const StateVector psi = random_state(lay, rng);
    const StateVector back = displacement_apply(-alpha, displacement_apply(alpha, psi));
    checks.push_back(
        make_check("displacement_roundtrip", fidelity(back, psi), 1.0 - 1e-10, true));
  }

  // --- diffusion integrator reduces to unitary evolution -----------------
  {
    ModelParams p = ModelParams::defaults(2);
    p.m_a = 4;
    p.m_b = 4;
    p.gamma_z = p.gamma_xy = p.gamma_b = 0.0;
    RunConfig cfg;
    cfg.params = p;
    cfg.initial_photons = 1;
    cfg.scheme = QsdScheme::ExponentialEuler;

    const auto parts = build_hamiltonian_parts(p);
    const QsdStepper stepper(parts, build_lindblads(p), cfg.dt, cfg.scheme);
    const ExactPropagator prop(parts.h_static);
    const StateVector psi0 = initial_state(cfg);

    Rng rng(derive_seed(seed, 11));
    CVec psi = psi0.amps;
    double min_fid = 1.0;
    const long steps_per_period = std::lround(kTwoPi / cfg.dt);
    for (int period = 1; period <= 50; ++period) {
      for (long s = 0; s < steps_per_period; ++s)
        stepper.step(psi, (period - 1) * kTwoPi + s * cfg.dt, rng);
      const StateVector exact = prop.evolve(psi0, period * kTwoPi);
      min_fid = std::min(min_fid, std::abs(exact.amps.dot(psi)));
    }
    checks.push_back(make_check("qsd_unitary_fidelity", min_fid, 1.0 - 1e-6, true,
                                "50 periods, zero dissipation"));
  }

  // --- amplitude-damping ensemble law ------------------------------------
  {
    const double gamma_z = 0.01;
    const double dt = 0.04;  // keeps the Euler weak bias well under one SE
    const double t_max = 300.0;
    const int n_traj = 2000;
    const long n_steps = std::lround(t_max / dt);
    const long checkpoint_every = n_steps / 12;

    const HilbertLayout lay = HilbertLayout::qubits(1);
    const Operator h(lay, CMat((-0.5 * pauli(PauliAxis::Z).mat)));
    LindbladSet ls;
    {
      Operator l = pauli(PauliAxis::Minus);
      l.mat *= std::sqrt(2.0 * gamma_z);
      ls.push_back({"L_z", Operator(lay, l.mat), gamma_z});
    }

    std::vector<std::vector<double>> pop(n_traj);
    parallel_for(
        n_traj,
        [&](std::size_t i) {
          Rng rng(derive_seed(seed, 1000 + i));
          StateVector psi = StateVector::basis_state(lay, {0});  // decaying state
          std::vector<double> p_i;
          for (long s = 0; s <= n_steps; ++s) {
            if (s % checkpoint_every == 0) p_i.push_back(std::norm(psi.amps(0)));
            if (s == n_steps) break;
            psi = qsd_step(psi, h, ls, dt, rng);
          }
          pop[i] = std::move(p_i);
        },
        max_threads);

    double worst_sigmas = 0.0;
    const std::size_t n_checks = pop.front().size();
    for (std::size_t c = 1; c < n_checks; ++c) {
      double mean = 0;
      for (int i = 0; i < n_traj; ++i) mean += pop[i][c];
      mean /= n_traj;
      double var = 0;
      for (int i = 0; i < n_traj; ++i) var += (pop[i][c] - mean) * (pop[i][c] - mean);
      const double se = std::sqrt(var / (double(n_traj) * double(n_traj - 1)));
      const double exact = std::exp(-2.0 * gamma_z * double(c * checkpoint_every) * dt);
      if (se > 0) worst_sigmas = std::max(worst_sigmas, std::abs(mean - exact) / se);
    }
    checks.push_back(make_check("amplitude_damping_3sigma", worst_sigmas, 3.0, false,
                                "max |mean - exp(-2G t)| / SE, 2000 trajectories"));
  }

  return checks;
}

bool all_passed(const std::vector<OracleCheck>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string format_oracle_table(const std::vector<OracleCheck>& checks) {
  std::ostringstream os;
  os.precision(12);
  for (const auto& c : checks) {
    os << (c.pass ? "PASS" : "FAIL") << "  " << c.name << "  value=" << c.value
       << (c.greater_is_pass ? "  >=  " : "  <  ") << c.threshold;
    if (!c.detail.empty()) os << "  (" << c.detail << ")";
    os << "\n";
  }
  return os.str();
}

}  // namespace qmm
