#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qmm {

using Cx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

constexpr Cx kI{0.0, 1.0};

// Ordered tensor factors of the composite space. Qubits always come first,
// then the input mode "A", then the readout mode "B".
class HilbertLayout {
 public:
  HilbertLayout() = default;
  HilbertLayout(std::vector<int> dims, std::vector<std::string> labels);

  // n qubits, then mode A with m_a levels, then mode B with m_b levels.
  // Pass m_a or m_b = 0 to omit that mode.
  static HilbertLayout detector(int n_qubits, int m_a, int m_b);
  static HilbertLayout qubits(int n_qubits);
  static HilbertLayout single_mode(int levels);

  int total_dim() const { return total_; }
  int n_subsystems() const { return static_cast<int>(dims_.size()); }
  int dim(int k) const { return dims_.at(k); }
  const std::vector<int>& dims() const { return dims_; }
  const std::string& label(int k) const { return labels_.at(k); }
  const std::vector<std::string>& labels() const { return labels_; }
  int index_of(const std::string& label) const;
  int n_qubits() const { return n_qubits_; }

  bool operator==(const HilbertLayout& o) const {
    return dims_ == o.dims_ && labels_ == o.labels_;
  }
  bool operator!=(const HilbertLayout& o) const { return !(*this == o); }

 private:
  std::vector<int> dims_;
  std::vector<std::string> labels_;
  int total_ = 0;
  int n_qubits_ = 0;
};

// Dense operator on a composite space. Immutable after construction by
// convention; shareable across threads.
struct Operator {
  HilbertLayout layout;
  CMat mat;

  Operator() = default;
  Operator(HilbertLayout lay, CMat m);

  int dim() const { return static_cast<int>(mat.rows()); }
  bool is_hermitian(double tol = 1e-12) const;
  Operator dagger() const { return Operator(layout, mat.adjoint()); }
};

Operator operator+(const Operator& a, const Operator& b);
Operator operator-(const Operator& a, const Operator& b);
Operator operator*(const Operator& a, const Operator& b);
Operator operator*(Cx s, const Operator& a);
Operator operator*(double s, const Operator& a);
Operator commutator(const Operator& a, const Operator& b);

// Normalized pure state over a layout.
struct StateVector {
  HilbertLayout layout;
  CVec amps;

  StateVector() = default;
  StateVector(HilbertLayout lay, CVec a);

  double norm() const { return amps.norm(); }
  void normalize() { amps /= amps.norm(); }

  // |i_0 i_1 ... i_{K-1}> with the first subsystem slowest-varying.
  static StateVector basis_state(const HilbertLayout& lay, const std::vector<int>& occ);
  // Truncated coherent state on a single-mode layout.
  static StateVector coherent(const HilbertLayout& lay, Cx alpha);
};

enum class PauliAxis { X, Y, Z, Plus, Minus };
PauliAxis pauli_axis_from_string(const std::string& tag);

// Truncated ladder operator: <n-1|a|n> = sqrt(n).
Operator annihilation(int levels);
Operator creation(int levels);
Operator number_op(int levels);

// 2x2 Pauli operators in the basis where sigma_z|0> = +|0>, sigma_z|1> = -|1>.
// sigma_minus = (sigma_x - i sigma_y)/2 maps the sigma_z = +1 eigenstate to
// the sigma_z = -1 eigenstate (and annihilates the latter).
Operator pauli(PauliAxis axis);
Operator pauli(const std::string& tag);

Operator identity(const HilbertLayout& lay);

// Tensor-embed a single-subsystem operator at position `index` of `layout`,
// identity on every other factor.
Operator embed(const Operator& op, int index, const HilbertLayout& layout);
Operator embed(const Operator& op, const std::string& label, const HilbertLayout& layout);

Cx expectation(const StateVector& state, const Operator& op);

// Population of the top level of subsystem `index`; used by the truncation
// leakage monitor.
double top_level_population(const StateVector& state, int index);

}  // namespace qmm
