#include "qmmsim/operators.hpp"

#include <cmath>
#include <numeric>

namespace qmm {

HilbertLayout::HilbertLayout(std::vector<int> dims, std::vector<std::string> labels)
    : dims_(std::move(dims)), labels_(std::move(labels)) {
  if (dims_.empty() || dims_.size() != labels_.size())
    throw std::invalid_argument("HilbertLayout: dims/labels size mismatch");
  total_ = 1;
  for (int d : dims_) {
    if (d < 2) throw std::invalid_argument("HilbertLayout: every dim must be >= 2");
    total_ *= d;
  }
  bool seen_mode = false;
  for (const auto& l : labels_) {
    if (l == "A" || l == "B") {
      seen_mode = true;
    } else {
      if (seen_mode)
        throw std::invalid_argument("HilbertLayout: qubits must precede modes");
      ++n_qubits_;
    }
  }
}

HilbertLayout HilbertLayout::detector(int n_qubits, int m_a, int m_b) {
  if (n_qubits < 0) throw std::invalid_argument("detector: n_qubits < 0");
  std::vector<int> dims;
  std::vector<std::string> labels;
  for (int j = 0; j < n_qubits; ++j) {
    dims.push_back(2);
    labels.push_back("q" + std::to_string(j));
  }
  if (m_a > 0) {
    dims.push_back(m_a);
    labels.push_back("A");
  }
  if (m_b > 0) {
    dims.push_back(m_b);
    labels.push_back("B");
  }
  return HilbertLayout(std::move(dims), std::move(labels));
}

HilbertLayout HilbertLayout::qubits(int n_qubits) { return detector(n_qubits, 0, 0); }

HilbertLayout HilbertLayout::single_mode(int levels) {
  return HilbertLayout({levels}, {"A"});
}

int HilbertLayout::index_of(const std::string& label) const {
  for (int k = 0; k < n_subsystems(); ++k)
    if (labels_[k] == label) return k;
  throw std::invalid_argument("HilbertLayout: no subsystem labeled '" + label + "'");
}

Operator::Operator(HilbertLayout lay, CMat m) : layout(std::move(lay)), mat(std::move(m)) {
  if (mat.rows() != mat.cols() || mat.rows() != layout.total_dim())
    throw std::invalid_argument("Operator: matrix does not match layout dimension");
}

bool Operator::is_hermitian(double tol) const {
  return (mat - mat.adjoint()).cwiseAbs().maxCoeff() < tol;
}

static void check_same_layout(const Operator& a, const Operator& b) {
  if (a.layout != b.layout) throw std::invalid_argument("Operator: layout mismatch");
}

Operator operator+(const Operator& a, const Operator& b) {
  check_same_layout(a, b);
  return Operator(a.layout, a.mat + b.mat);
}
Operator operator-(const Operator& a, const Operator& b) {
  check_same_layout(a, b);
  return Operator(a.layout, a.mat - b.mat);
}
Operator operator*(const Operator& a, const Operator& b) {
  check_same_layout(a, b);
  return Operator(a.layout, a.mat * b.mat);
}
Operator operator*(Cx s, const Operator& a) { return Operator(a.layout, s * a.mat); }
Operator operator*(double s, const Operator& a) { return Operator(a.layout, s * a.mat); }

Operator commutator(const Operator& a, const Operator& b) {
  check_same_layout(a, b);
  return Operator(a.layout, a.mat * b.mat - b.mat * a.mat);
}

StateVector::StateVector(HilbertLayout lay, CVec a) : layout(std::move(lay)), amps(std::move(a)) {
  if (amps.size() != layout.total_dim())
    throw std::invalid_argument("StateVector: amplitude count does not match layout");
}

StateVector StateVector::basis_state(const HilbertLayout& lay, const std::vector<int>& occ) {
  if (static_cast<int>(occ.size()) != lay.n_subsystems())
    throw std::invalid_argument("basis_state: one occupation per subsystem required");
  int idx = 0;
  for (int k = 0; k < lay.n_subsystems(); ++k) {
    if (occ[k] < 0 || occ[k] >= lay.dim(k))
      throw std::invalid_argument("basis_state: occupation out of range");
    idx = idx * lay.dim(k) + occ[k];
  }
  CVec v = CVec::Zero(lay.total_dim());
  v(idx) = 1.0;
  return StateVector(lay, std::move(v));
}

StateVector StateVector::coherent(const HilbertLayout& lay, Cx alpha) {
  if (lay.n_subsystems() != 1)
    throw std::invalid_argument("coherent: single-mode layout required");
  const int m = lay.total_dim();
  CVec v(m);
  // amplitudes alpha^n / sqrt(n!), normalized over the truncated space
  Cx amp = 1.0;
  for (int n = 0; n < m; ++n) {
    v(n) = amp;
    amp *= alpha / std::sqrt(double(n + 1));
  }
  v /= v.norm();
  return StateVector(lay, std::move(v));
}

PauliAxis pauli_axis_from_string(const std::string& tag) {
  if (tag == "x") return PauliAxis::X;
  if (tag == "y") return PauliAxis::Y;
  if (tag == "z") return PauliAxis::Z;
  if (tag == "+" || tag == "plus" || tag == "raising") return PauliAxis::Plus;
  if (tag == "-" || tag == "minus" || tag == "lowering") return PauliAxis::Minus;
  throw std::invalid_argument("pauli: unknown axis tag '" + tag + "'");
}

Operator annihilation(int levels) {
  if (levels < 2) throw std::invalid_argument("annihilation: levels must be >= 2");
  CMat m = CMat::Zero(levels, levels);
  for (int n = 1; n < levels; ++n) m(n - 1, n) = std::sqrt(double(n));
  return Operator(HilbertLayout::single_mode(levels), std::move(m));
}

Operator creation(int levels) { return annihilation(levels).dagger(); }

Operator number_op(int levels) {
  Operator a = annihilation(levels);
  return Operator(a.layout, a.mat.adjoint() * a.mat);
}

Operator pauli(PauliAxis axis) {
  CMat m = CMat::Zero(2, 2);
  switch (axis) {
    case PauliAxis::X:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case PauliAxis::Y:
      m(0, 1) = -kI;
      m(1, 0) = kI;
      break;
    case PauliAxis::Z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
    case PauliAxis::Plus:
      m(0, 1) = 1.0;
      break;
    case PauliAxis::Minus:
      m(1, 0) = 1.0;
      break;
  }
  return Operator(HilbertLayout({2}, {"q0"}), std::move(m));
}

Operator pauli(const std::string& tag) { return pauli(pauli_axis_from_string(tag)); }

Operator identity(const HilbertLayout& lay) {
  return Operator(lay, CMat::Identity(lay.total_dim(), lay.total_dim()));
}

Operator embed(const Operator& op, int index, const HilbertLayout& layout) {
  if (index < 0 || index >= layout.n_subsystems())
    throw std::invalid_argument("embed: subsystem index out of range");
  const int d = layout.dim(index);
  if (op.dim() != d)
    throw std::invalid_argument("embed: operator dimension does not match subsystem");
  int left = 1, right = 1;
  for (int k = 0; k < index; ++k) left *= layout.dim(k);
  for (int k = index + 1; k < layout.n_subsystems(); ++k) right *= layout.dim(k);

  CMat full = CMat::Zero(layout.total_dim(), layout.total_dim());
  for (int l = 0; l < left; ++l)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const Cx v = op.mat(a, b);
        if (v == Cx(0.0)) continue;
        const int row0 = (l * d + a) * right;
        const int col0 = (l * d + b) * right;
        for (int r = 0; r < right; ++r) full(row0 + r, col0 + r) = v;
      }
  return Operator(layout, std::move(full));
}

Operator embed(const Operator& op, const std::string& label, const HilbertLayout& layout) {
  return embed(op, layout.index_of(label), layout);
}

Cx expectation(const StateVector& state, const Operator& op) {
  if (state.layout != op.layout)
    throw std::invalid_argument("expectation: state/operator layout mismatch");
  return state.amps.dot(op.mat * state.amps);  // dot() conjugates the left argument
}

double top_level_population(const StateVector& state, int index) {
  const auto& lay = state.layout;
  if (index < 0 || index >= lay.n_subsystems())
    throw std::invalid_argument("top_level_population: index out of range");
  const int d = lay.dim(index);
  int right = 1;
  for (int k = index + 1; k < lay.n_subsystems(); ++k) right *= lay.dim(k);
  const int left = lay.total_dim() / (d * right);
  double p = 0.0;
  for (int l = 0; l < left; ++l) {
    const int base = (l * d + (d - 1)) * right;
    for (int r = 0; r < right; ++r) p += std::norm(state.amps(base + r));
  }
  return p;
}

}  // namespace qmm
