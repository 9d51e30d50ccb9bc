#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ccc/errors.hpp"

namespace ccc {

using Complex = std::complex<double>;

// Tolerance regimes used throughout the library.
inline constexpr double kStructuralTol = 1e-8;
inline constexpr double kClosedFormTol = 1e-10;
inline constexpr double kArithmeticTol = 1e-12;

/// Dense row-major complex matrix. Small by design: 2x2 gates, 2^l gadget
/// actions, and at most 2^cap statevector-sized operators.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  std::span<const Complex> entries() const { return data_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  ComplexMatrix adjoint() const;
  Complex trace() const;
  Complex determinant() const;
  /// Largest entrywise modulus.
  double max_abs() const;
  /// Frobenius norm.
  double norm() const;

  ComplexMatrix& operator*=(Complex s);
  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }
  friend ComplexMatrix operator*(ComplexMatrix m, Complex s) { return m *= s; }
  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

namespace gates {
ComplexMatrix I();
ComplexMatrix X();
ComplexMatrix Y();
ComplexMatrix Z();
ComplexMatrix H();
ComplexMatrix S();
ComplexMatrix Sdg();
ComplexMatrix T();
ComplexMatrix CNOT();
ComplexMatrix CZ();
ComplexMatrix SWAP();
/// e^{-i theta sigma/2}
ComplexMatrix Rz(double theta);
ComplexMatrix Rx(double theta);
ComplexMatrix Ry(double theta);
/// Fixed gates by name (I, X, Y, Z, H, S, SDG, T, TDG, CNOT, CZ, SWAP).
/// Throws ParseError for unknown names.
ComplexMatrix by_name(std::string_view name);
}  // namespace gates

/// Largest qubit count for which dense 2^n objects are built. Defaults to 16;
/// the CCC_DENSE_CAP environment variable overrides it at first use.
int dense_qubit_cap();
void set_dense_qubit_cap(int cap);
/// Throws CapacityError when n exceeds the dense cap.
void require_dense(int n, std::string_view what);

/// n-qubit pure state. Qubit 0 is the most significant bit of the basis
/// index, so bitstring "y_0 y_1 ... y_{n-1}" reads as a binary number.
class Statevector {
 public:
  /// |0...0>
  explicit Statevector(int n);
  static Statevector basis(int n, std::size_t index);
  static Statevector from_amplitudes(int n, std::vector<Complex> amplitudes);

  int num_qubits() const { return n_; }
  std::size_t dimension() const { return amps_.size(); }
  std::span<const Complex> amplitudes() const { return amps_; }
  Complex amplitude(std::size_t index) const { return amps_[index]; }

  /// In-place gate application; gate is 2^|targets| square, the first target
  /// being the most significant index of the gate matrix.
  void apply(const ComplexMatrix& gate, std::span<const int> targets);
  void apply(const ComplexMatrix& gate, std::initializer_list<int> targets) {
    apply(gate, std::span<const int>(targets.begin(), targets.size()));
  }

  double norm_squared() const;
  std::vector<double> probabilities() const;
  Complex inner(const Statevector& other) const;

 private:
  Statevector(int n, std::vector<Complex> amps) : n_(n), amps_(std::move(amps)) {}
  int n_;
  std::vector<Complex> amps_;
};

Statevector apply_gate(Statevector state, const ComplexMatrix& gate, std::span<const int> targets);

/// A / (det A)^{1/2^l} on the principal branch. Throws DomainError when
/// |det A| < 1e-12.
ComplexMatrix normalized_action(const ComplexMatrix& a, int l);

/// A = alpha B for some nonzero alpha (entrywise within tol).
bool proportional(const ComplexMatrix& a, const ComplexMatrix& b, double tol);
/// A = e^{i gamma} B.
bool equal_up_to_phase(const ComplexMatrix& a, const ComplexMatrix& b, double tol);
/// Both relations in one call; require_unit_phase selects the second.
bool proportional_up_to_phase(const ComplexMatrix& a, const ComplexMatrix& b, double tol,
                              bool require_unit_phase = false);

/// gamma with A^dag A = gamma I and gamma > tol, if such gamma exists.
std::optional<double> unitary_scale(const ComplexMatrix& a, double tol);
bool is_unitary_up_to_scale(const ComplexMatrix& a, double tol);
bool is_unitary(const ComplexMatrix& a, double tol);

/// min over gamma of || A - e^{i gamma} B ||_op for unitaries A, B.
/// Throws InputError for non-unitary input (tolerance 1e-8).
double phase_invariant_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// One operation in a postselected fragment: a dense gate on some wires.
struct FragmentOp {
  ComplexMatrix gate;
  std::vector<int> targets;
};

struct WireBit {
  int wire;
  int bit;
};

/// Contracts a postselected circuit fragment into the linear map from the
/// input wires to the output wires. Wires not listed as inputs start in the
/// given ancilla basis states; postselected wires are projected onto <bit|.
/// Every wire must be exactly one of input/ancilla and exactly one of
/// output/postselected.
ComplexMatrix contract_postselected(int num_wires, std::span<const int> input_wires,
                                    std::span<const WireBit> ancillas,
                                    std::span<const FragmentOp> ops,
                                    std::span<const WireBit> postselect,
                                    std::span<const int> output_wires);

}  // namespace ccc
