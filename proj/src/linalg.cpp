#include "ccc/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

namespace ccc {

namespace {
constexpr Complex kI{0.0, 1.0};

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(what) + ": shape mismatch " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                         "x" + std::to_string(b.cols()));
  }
}

bool is_power_of_two(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }
}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_) {
    throw DimensionError("ComplexMatrix: entry count does not match rows*cols");
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionError("ComplexMatrix: ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

Complex ComplexMatrix::trace() const {
  if (!is_square()) throw DimensionError("trace of non-square matrix");
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

Complex ComplexMatrix::determinant() const {
  if (!is_square()) throw DimensionError("determinant of non-square matrix");
  const std::size_t n = rows_;
  if (n == 0) return 1.0;
  if (n == 1) return data_[0];
  if (n == 2) return data_[0] * data_[3] - data_[1] * data_[2];
  // LU with partial pivoting.
  std::vector<Complex> lu = data_;
  Complex det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::abs(lu[r * n + k]) > std::abs(lu[pivot * n + k])) pivot = r;
    if (std::abs(lu[pivot * n + k]) == 0.0) return 0.0;
    if (pivot != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(lu[k * n + c], lu[pivot * n + c]);
      det = -det;
    }
    const Complex p = lu[k * n + k];
    det *= p;
    for (std::size_t r = k + 1; r < n; ++r) {
      const Complex f = lu[r * n + k] / p;
      for (std::size_t c = k; c < n; ++c) lu[r * n + c] -= f * lu[k * n + c];
    }
  }
  return det;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require_same_shape(*this, o, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require_same_shape(*this, o, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex v = a(r, k);
      if (v == 0.0) continue;
      for (std::size_t c = 0; c < b.cols(); ++c) out(r, c) += v * b(k, c);
    }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t ar = 0; ar < a.rows(); ++ar)
    for (std::size_t ac = 0; ac < a.cols(); ++ac)
      for (std::size_t br = 0; br < b.rows(); ++br)
        for (std::size_t bc = 0; bc < b.cols(); ++bc)
          out(ar * b.rows() + br, ac * b.cols() + bc) = a(ar, ac) * b(br, bc);
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

namespace gates {
ComplexMatrix I() { return ComplexMatrix::identity(2); }
ComplexMatrix X() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix Y() { return {{0.0, -kI}, {kI, 0.0}}; }
ComplexMatrix Z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
ComplexMatrix H() {
  const double s = std::numbers::sqrt2 / 2.0;
  return {{s, s}, {s, -s}};
}
ComplexMatrix S() { return {{1.0, 0.0}, {0.0, kI}}; }
ComplexMatrix Sdg() { return {{1.0, 0.0}, {0.0, -kI}}; }
ComplexMatrix T() { return {{1.0, 0.0}, {0.0, std::polar(1.0, std::numbers::pi / 4.0)}}; }
ComplexMatrix CNOT() {
  return {{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 1.0}, {0.0, 0.0, 1.0, 0.0}};
}
ComplexMatrix CZ() {
  return {{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 1.0, 0.0}, {0.0, 0.0, 0.0, -1.0}};
}
ComplexMatrix SWAP() {
  return {{1.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 1.0, 0.0}, {0.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 1.0}};
}
ComplexMatrix Rz(double theta) {
  return {{std::polar(1.0, -theta / 2.0), 0.0}, {0.0, std::polar(1.0, theta / 2.0)}};
}
ComplexMatrix Rx(double theta) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  return {{c, -kI * s}, {-kI * s, c}};
}
ComplexMatrix Ry(double theta) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  return {{c, -s}, {s, c}};
}

ComplexMatrix by_name(std::string_view name) {
  std::string up(name);
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char ch) { return std::toupper(ch); });
  if (up == "I" || up == "ID") return I();
  if (up == "X") return X();
  if (up == "Y") return Y();
  if (up == "Z") return Z();
  if (up == "H") return H();
  if (up == "S") return S();
  if (up == "SDG" || up == "S_DAG") return Sdg();
  if (up == "T") return T();
  if (up == "TDG" || up == "T_DAG") return T().adjoint();
  if (up == "CNOT" || up == "CX") return CNOT();
  if (up == "CZ") return CZ();
  if (up == "SWAP") return SWAP();
  throw ParseError("unknown gate name '" + std::string(name) + "'");
}
}  // namespace gates

namespace {
std::atomic<int>& cap_storage() {
  static std::atomic<int> cap = [] {
    if (const char* env = std::getenv("CCC_DENSE_CAP")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end != env && *end == '\0' && v >= 1 && v <= 30) return static_cast<int>(v);
    }
    return 16;
  }();
  return cap;
}
}  // namespace

int dense_qubit_cap() { return cap_storage().load(); }

void set_dense_qubit_cap(int cap) {
  if (cap < 1 || cap > 30) throw InputError("dense cap must lie in [1, 30]");
  cap_storage().store(cap);
}

void require_dense(int n, std::string_view what) {
  if (n > dense_qubit_cap()) {
    throw CapacityError(std::string(what) + ": " + std::to_string(n) +
                        " qubits exceeds the dense cap of " + std::to_string(dense_qubit_cap()) +
                        " (set CCC_DENSE_CAP to override)");
  }
}

Statevector::Statevector(int n) : n_(n) {
  if (n < 1) throw InputError("Statevector: need at least one qubit");
  require_dense(n, "Statevector");
  amps_.assign(std::size_t{1} << n, 0.0);
  amps_[0] = 1.0;
}

Statevector Statevector::basis(int n, std::size_t index) {
  Statevector s(n);
  if (index >= s.amps_.size()) throw InputError("Statevector::basis: index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

Statevector Statevector::from_amplitudes(int n, std::vector<Complex> amplitudes) {
  if (n < 1) throw InputError("Statevector: need at least one qubit");
  require_dense(n, "Statevector");
  if (amplitudes.size() != (std::size_t{1} << n))
    throw DimensionError("Statevector: amplitude count must be 2^n");
  return Statevector(n, std::move(amplitudes));
}

void Statevector::apply(const ComplexMatrix& gate, std::span<const int> targets) {
  const std::size_t m = targets.size();
  if (!gate.is_square() || !is_power_of_two(gate.rows()) || gate.rows() != (std::size_t{1} << m)) {
    throw DimensionError("apply_gate: gate dimension must be 2^|targets|");
  }
  std::vector<std::size_t> masks(m);
  std::size_t target_mask = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const int t = targets[k];
    if (t < 0 || t >= n_) throw InputError("apply_gate: target " + std::to_string(t) + " out of range");
    const std::size_t bit = std::size_t{1} << (n_ - 1 - t);
    if (target_mask & bit) throw InputError("apply_gate: repeated target");
    target_mask |= bit;
    masks[k] = bit;
  }
  const std::size_t local_dim = std::size_t{1} << m;
  std::vector<std::size_t> offsets(local_dim, 0);
  for (std::size_t local = 0; local < local_dim; ++local)
    for (std::size_t k = 0; k < m; ++k)
      if (local & (std::size_t{1} << (m - 1 - k))) offsets[local] |= masks[k];

  std::vector<Complex> in(local_dim), out(local_dim);
  for (std::size_t base = 0; base < amps_.size(); ++base) {
    if (base & target_mask) continue;
    for (std::size_t j = 0; j < local_dim; ++j) in[j] = amps_[base | offsets[j]];
    for (std::size_t i = 0; i < local_dim; ++i) {
      Complex acc = 0.0;
      for (std::size_t j = 0; j < local_dim; ++j) acc += gate(i, j) * in[j];
      out[i] = acc;
    }
    for (std::size_t i = 0; i < local_dim; ++i) amps_[base | offsets[i]] = out[i];
  }
}

double Statevector::norm_squared() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return s;
}

std::vector<double> Statevector::probabilities() const {
  std::vector<double> p(amps_.size());
  for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
  return p;
}

Complex Statevector::inner(const Statevector& other) const {
  if (other.n_ != n_) throw DimensionError("Statevector::inner: qubit count mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < amps_.size(); ++i) s += std::conj(amps_[i]) * other.amps_[i];
  return s;
}

Statevector apply_gate(Statevector state, const ComplexMatrix& gate, std::span<const int> targets) {
  state.apply(gate, targets);
  return state;
}

ComplexMatrix normalized_action(const ComplexMatrix& a, int l) {
  if (l < 1 || !a.is_square() || a.rows() != (std::size_t{1} << l))
    throw DimensionError("normalized_action: matrix must be 2^l x 2^l");
  const Complex det = a.determinant();
  if (std::abs(det) < 1e-12) throw DomainError("normalized action does not exist (singular action)");
  const Complex root = std::exp(std::log(det) / static_cast<double>(std::size_t{1} << l));
  return a * (1.0 / root);
}

bool proportional_up_to_phase(const ComplexMatrix& a, const ComplexMatrix& b, double tol,
                              bool require_unit_phase) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  Complex num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    num += std::conj(b.entries()[i]) * a.entries()[i];
    den += std::norm(b.entries()[i]);
  }
  const bool a_zero = a.max_abs() <= tol;
  const bool b_zero = b.max_abs() <= tol;
  if (a_zero || b_zero) return a_zero && b_zero && !require_unit_phase;
  const Complex alpha = num / den;
  if (std::abs(alpha) <= tol) return false;
  if (require_unit_phase && std::abs(std::abs(alpha) - 1.0) > tol) return false;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    if (std::abs(a.entries()[i] - alpha * b.entries()[i]) > tol) return false;
  return true;
}

bool proportional(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  return proportional_up_to_phase(a, b, tol, false);
}

bool equal_up_to_phase(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  return proportional_up_to_phase(a, b, tol, true);
}

std::optional<double> unitary_scale(const ComplexMatrix& a, double tol) {
  if (!a.is_square()) return std::nullopt;
  const ComplexMatrix g = a.adjoint() * a;
  const double gamma = g.trace().real() / static_cast<double>(a.rows());
  if (gamma <= tol) return std::nullopt;
  for (std::size_t r = 0; r < g.rows(); ++r)
    for (std::size_t c = 0; c < g.cols(); ++c) {
      const Complex expect = r == c ? Complex(gamma) : Complex(0.0);
      if (std::abs(g(r, c) - expect) > tol) return std::nullopt;
    }
  return gamma;
}

bool is_unitary_up_to_scale(const ComplexMatrix& a, double tol) { return unitary_scale(a, tol).has_value(); }

bool is_unitary(const ComplexMatrix& a, double tol) {
  const auto gamma = unitary_scale(a, tol);
  return gamma && std::abs(*gamma - 1.0) <= tol;
}

namespace {
// Shortest arc of the unit circle that contains every phase.
double covering_arc(std::vector<double> phases) {
  const double two_pi = 2.0 * std::numbers::pi;
  for (auto& p : phases) {
    p = std::fmod(p, two_pi);
    if (p < 0) p += two_pi;
  }
  std::sort(phases.begin(), phases.end());
  double largest_gap = phases.front() + two_pi - phases.back();
  for (std::size_t i = 1; i < phases.size(); ++i)
    largest_gap = std::max(largest_gap, phases[i] - phases[i - 1]);
  return two_pi - largest_gap;
}
}  // namespace

double phase_invariant_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.is_square() || a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("phase_invariant_distance: need equal square matrices");
  if (!is_unitary(a, kStructuralTol) || !is_unitary(b, kStructuralTol))
    throw InputError("phase_invariant_distance: inputs must be unitary");
  // ||A - e^{ig}B|| = ||I - e^{ig}A^dag B||; the minimizing g centres the
  // eigenphases of A^dag B on 1, leaving 2 sin(arc/4).
  const ComplexMatrix w = a.adjoint() * b;
  std::vector<double> phases;
  if (w.rows() == 1) {
    return 0.0;
  } else if (w.rows() == 2) {
    // tr^2/4 - det written without cancellation near scalar w.
    const Complex half_tr = w.trace() / 2.0;
    const Complex half_gap = (w(0, 0) - w(1, 1)) / 2.0;
    const Complex disc = std::sqrt(half_gap * half_gap + w(0, 1) * w(1, 0));
    phases = {std::arg(half_tr + disc), std::arg(half_tr - disc)};
  } else {
    Eigen::MatrixXcd m(w.rows(), w.cols());
    for (std::size_t r = 0; r < w.rows(); ++r)
      for (std::size_t c = 0; c < w.cols(); ++c) m(r, c) = w(r, c);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) phases.push_back(std::arg(solver.eigenvalues()[i]));
  }
  const double arc = covering_arc(std::move(phases));
  return 2.0 * std::sin(arc / 4.0);
}

ComplexMatrix contract_postselected(int num_wires, std::span<const int> input_wires,
                                    std::span<const WireBit> ancillas,
                                    std::span<const FragmentOp> ops,
                                    std::span<const WireBit> postselect,
                                    std::span<const int> output_wires) {
  require_dense(num_wires, "contract_postselected");
  std::vector<int> in_role(num_wires, 0), out_role(num_wires, 0);
  for (int w : input_wires) {
    if (w < 0 || w >= num_wires) throw InputError("fragment: input wire out of range");
    ++in_role[w];
  }
  for (const auto& a : ancillas) {
    if (a.wire < 0 || a.wire >= num_wires || (a.bit != 0 && a.bit != 1))
      throw InputError("fragment: bad ancilla");
    ++in_role[a.wire];
  }
  for (int w : output_wires) {
    if (w < 0 || w >= num_wires) throw InputError("fragment: output wire out of range");
    ++out_role[w];
  }
  for (const auto& p : postselect) {
    if (p.wire < 0 || p.wire >= num_wires || (p.bit != 0 && p.bit != 1))
      throw InputError("fragment: bad postselection");
    ++out_role[p.wire];
  }
  for (int w = 0; w < num_wires; ++w)
    if (in_role[w] != 1 || out_role[w] != 1)
      throw InputError("fragment: wire " + std::to_string(w) + " needs exactly one input and one output role");

  auto bit_of = [num_wires](int wire) { return std::size_t{1} << (num_wires - 1 - wire); };
  const std::size_t in_dim = std::size_t{1} << input_wires.size();
  const std::size_t out_dim = std::size_t{1} << output_wires.size();

  std::size_t fixed_in = 0;
  for (const auto& a : ancillas)
    if (a.bit) fixed_in |= bit_of(a.wire);
  std::size_t post_value = 0;
  for (const auto& p : postselect)
    if (p.bit) post_value |= bit_of(p.wire);

  ComplexMatrix out(out_dim, in_dim);
  for (std::size_t x = 0; x < in_dim; ++x) {
    std::size_t index = fixed_in;
    for (std::size_t k = 0; k < input_wires.size(); ++k)
      if (x & (std::size_t{1} << (input_wires.size() - 1 - k))) index |= bit_of(input_wires[k]);
    Statevector state = Statevector::basis(num_wires, index);
    for (const auto& op : ops) state.apply(op.gate, op.targets);
    for (std::size_t y = 0; y < out_dim; ++y) {
      std::size_t full = post_value;
      for (std::size_t k = 0; k < output_wires.size(); ++k)
        if (y & (std::size_t{1} << (output_wires.size() - 1 - k))) full |= bit_of(output_wires[k]);
      out(y, x) = state.amplitude(full);
    }
  }
  return out;
}

}  // namespace ccc
