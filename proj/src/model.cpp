#include "qmmsim/model.hpp"

#include <cmath>
#include <iostream>

#include "qmmsim/rng.hpp"

namespace qmm {

ModelParams ModelParams::defaults(int n_qubits) {
  ModelParams p;
  p.n_qubits = n_qubits;
  p.eps.assign(n_qubits, 1.0);
  p.delta.assign(n_qubits, 0.0);
  p.g_a.assign(n_qubits, 0.01);
  p.g_b.assign(n_qubits, 0.01);
  return p;
}

void ModelParams::validate() const {
  if (n_qubits < 1) throw std::invalid_argument("ModelParams: n_qubits must be >= 1");
  auto check_len = [&](const std::vector<double>& v, const char* name) {
    if (!v.empty() && static_cast<int>(v.size()) != n_qubits)
      throw std::invalid_argument(std::string("ModelParams: ") + name +
                                  " must have one entry per qubit");
  };
  check_len(eps, "eps");
  check_len(delta, "delta");
  check_len(g_a, "g_a");
  check_len(g_b, "g_b");
  if (omega_a < 0 || omega_b < 0)
    throw std::invalid_argument("ModelParams: mode frequencies must be >= 0");
  if (gamma_z < 0 || gamma_xy < 0 || gamma_b < 0 || noise_d < 0)
    throw std::invalid_argument("ModelParams: rates and noise intensity must be >= 0");
  if (m_a < 2 || m_b < 2)
    throw std::invalid_argument("ModelParams: truncations must be >= 2");
}

HilbertLayout ModelParams::layout() const { return HilbertLayout::detector(n_qubits, m_a, m_b); }

Operator build_full_hamiltonian(const ModelParams& params, double t) {
  auto parts = build_hamiltonian_parts(params);
  return Operator(parts.layout, parts.at(t));
}

HamiltonianParts build_hamiltonian_parts(const ModelParams& params) {
  params.validate();
  const HilbertLayout lay = params.layout();
  const int ia = lay.index_of("A");
  const int ib = lay.index_of("B");

  const Operator a = annihilation(params.m_a);
  const Operator b = annihilation(params.m_b);
  const Operator na_full = embed(number_op(params.m_a), ia, lay);
  const Operator nb_full = embed(number_op(params.m_b), ib, lay);
  Operator xa = embed(Operator(a.layout, CMat(a.mat + a.mat.adjoint())), ia, lay);
  Operator xb = embed(Operator(b.layout, CMat(b.mat + b.mat.adjoint())), ib, lay);

  CMat h = params.omega_a * (na_full.mat + 0.5 * CMat::Identity(lay.total_dim(), lay.total_dim()));
  h += params.omega_b * (nb_full.mat + 0.5 * CMat::Identity(lay.total_dim(), lay.total_dim()));

  const Operator sx = pauli(PauliAxis::X);
  const Operator sz = pauli(PauliAxis::Z);
  for (int j = 0; j < params.n_qubits; ++j) {
    const Operator sxj = embed(sx, j, lay);
    const Operator szj = embed(sz, j, lay);
    h += -0.5 * (params.delta_j(j) * sxj.mat + params.eps_j(j) * szj.mat);
    h += params.g_a_j(j) * (xa.mat * sxj.mat);
    h += params.g_b_j(j) * (xb.mat * sxj.mat);
  }

  HamiltonianParts parts;
  parts.layout = lay;
  parts.h_static = Operator(lay, std::move(h));
  if (params.f_envelope) {
    parts.x_a = std::move(xa);
    parts.f_envelope = params.f_envelope;
  }
  if (params.h_envelope) {
    parts.x_b = std::move(xb);
    parts.h_envelope = params.h_envelope;
  }
  return parts;
}

CMat HamiltonianParts::at(double t) const {
  CMat h = h_static.mat;
  if (x_a) h += f_envelope(t) * x_a->mat;
  if (x_b) h += h_envelope(t) * x_b->mat;
  return h;
}

LindbladSet build_qubit_lindblads(const ModelParams& params, const HilbertLayout& lay) {
  LindbladSet set;
  const Operator sm = pauli(PauliAxis::Minus);
  const Operator sp = pauli(PauliAxis::Plus);
  const Operator deph(sm.layout, CMat(sp.mat * sm.mat));
  for (int j = 0; j < std::min(params.n_qubits, lay.n_qubits()); ++j) {
    if (params.gamma_z > 0) {
      Operator l = embed(sm, j, lay);
      l.mat *= std::sqrt(2.0 * params.gamma_z);
      set.push_back({"L_z[q" + std::to_string(j) + "]", std::move(l), params.gamma_z});
    }
    if (params.gamma_xy > 0) {
      Operator l = embed(deph, j, lay);
      l.mat *= std::sqrt(2.0 * params.gamma_xy);
      set.push_back({"L_xy[q" + std::to_string(j) + "]", std::move(l), params.gamma_xy});
    }
  }
  return set;
}

LindbladSet build_lindblads(const ModelParams& params) {
  params.validate();
  const HilbertLayout lay = params.layout();
  LindbladSet set = build_qubit_lindblads(params, lay);
  if (params.gamma_b > 0) {
    Operator l = embed(annihilation(params.m_b), lay.index_of("B"), lay);
    l.mat *= std::sqrt(2.0 * params.gamma_b);
    set.push_back({"L_b", std::move(l), params.gamma_b});
  }
  return set;
}

Operator build_chain_hamiltonian(const ModelParams& params, double t,
                                 const std::vector<double>& noise_samples) {
  params.validate();
  if (static_cast<int>(noise_samples.size()) != params.n_qubits)
    throw std::invalid_argument("build_chain_hamiltonian: one noise sample per qubit required");
  const HilbertLayout lay = HilbertLayout::qubits(params.n_qubits);
  const Operator sx = pauli(PauliAxis::X);
  const Operator sz = pauli(PauliAxis::Z);

  CMat h = CMat::Zero(lay.total_dim(), lay.total_dim());
  const double drive = params.drive_amp * std::sin(params.drive_freq * t);
  std::vector<CMat> szj(params.n_qubits);
  for (int j = 0; j < params.n_qubits; ++j) {
    szj[j] = embed(sz, j, lay).mat;
    const double eps_t = drive + noise_samples[j];
    h += -0.5 * (params.delta_j(j) * embed(sx, j, lay).mat + eps_t * szj[j]);
  }
  for (int j = 0; j + 1 < params.n_qubits; ++j) h += params.g_qq * (szj[j] * szj[j + 1]);
  // optional closure bond; a two-site ring would double-count the single bond
  if (params.chain_periodic && params.n_qubits > 2)
    h += params.g_qq * (szj[params.n_qubits - 1] * szj[0]);
  return Operator(lay, std::move(h));
}

double dispersive_shift(const ModelParams& params, int j) {
  params.validate();
  if (j < 0 || j >= params.n_qubits) throw std::invalid_argument("dispersive_shift: bad qubit index");
  const double split = std::sqrt(params.delta_j(j) * params.delta_j(j) +
                                 params.eps_j(j) * params.eps_j(j));
  const double detuning = std::abs(params.omega_a - split);
  if (detuning == 0.0)
    throw std::domain_error("dispersive_shift: qubit resonant with input mode");
  const double g = params.g_a_j(j);
  if (g > 0 && detuning / g < 10.0)
    std::cerr << "[qmmsim] warning: dispersive regime marginal for qubit " << j
              << " (detuning/coupling = " << detuning / g << " < 10)\n";
  return g * g / detuning;
}

double effective_xx_coupling(const ModelParams& params) {
  params.validate();
  const double split =
      std::sqrt(params.delta_j(0) * params.delta_j(0) + params.eps_j(0) * params.eps_j(0));
  const double detuning = std::abs(params.omega_a - split);
  if (detuning == 0.0)
    throw std::domain_error("effective_xx_coupling: qubit resonant with input mode");
  const double g = params.g_a_j(0);
  return g * g / (2.0 * detuning);
}

double sample_bias_noise(Rng& rng, double noise_d, double dt) {
  if (noise_d <= 0) return 0.0;
  return rng.normal() * std::sqrt(2.0 * noise_d / dt);
}

}  // namespace qmm
