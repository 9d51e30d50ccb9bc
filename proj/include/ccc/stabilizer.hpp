#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ccc/linalg.hpp"

namespace ccc {

using Rng = std::mt19937_64;
/// One byte per measured qubit, each 0 or 1; index i is qubit i.
using Bits = std::vector<std::uint8_t>;

std::string bits_to_string(const Bits& bits);
Bits bits_from_string(std::string_view s);
/// Basis index for a bitstring, qubit 0 most significant.
std::size_t bits_to_index(const Bits& bits);
Bits index_to_bits(std::size_t index, int n);

/// i^phase * P_0 (x) ... (x) P_{n-1}, with (x,z) = (1,0) X, (0,1) Z, (1,1) Y.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(int n);
  static PauliString single(int n, int qubit, char pauli);
  /// Parses "+XIZ", "-iYY", "XZ" (sign prefix optional: +, -, i, -i, +i).
  static PauliString parse(std::string_view text);

  int num_qubits() const { return n_; }
  int phase() const { return phase_; }
  void set_phase(int k) { phase_ = ((k % 4) + 4) % 4; }
  void add_phase(int k) { set_phase(phase_ + k); }

  bool x(int q) const { return (x_[q >> 6] >> (q & 63)) & 1U; }
  bool z(int q) const { return (z_[q >> 6] >> (q & 63)) & 1U; }
  void set_x(int q, bool v);
  void set_z(int q, bool v);
  /// 'I', 'X', 'Y' or 'Z' on qubit q (phase ignored).
  char at(int q) const;

  bool is_identity() const;
  /// Phase in {0, 2}.
  bool is_hermitian() const { return (phase_ & 1) == 0; }
  bool commutes_with(const PauliString& other) const;

  /// Left-to-right product this * other, phase tracked exactly.
  PauliString& operator*=(const PauliString& other);
  friend PauliString operator*(PauliString a, const PauliString& b) { return a *= b; }
  friend bool operator==(const PauliString& a, const PauliString& b) = default;

  std::string to_string() const;
  ComplexMatrix to_matrix() const;
  /// P applied to a dense state vector (same qubit ordering as Statevector).
  void apply_to(std::vector<Complex>& amplitudes) const;

  // Conjugation P -> G P G^dag by generator and convenience gates.
  void conj_h(int q);
  void conj_s(int q);
  void conj_sdg(int q);
  void conj_x(int q);
  void conj_y(int q);
  void conj_z(int q);
  void conj_cnot(int c, int t);
  void conj_cz(int a, int b);

  std::span<const std::uint64_t> x_words() const { return x_; }
  std::span<const std::uint64_t> z_words() const { return z_; }

 private:
  int n_ = 0;
  int phase_ = 0;
  std::vector<std::uint64_t> x_;
  std::vector<std::uint64_t> z_;
};

enum class GateKind { H, S, Sdg, X, Y, Z, CNOT, CZ };

struct CliffordGate {
  GateKind kind;
  int q0;
  int q1 = -1;
  friend bool operator==(const CliffordGate&, const CliffordGate&) = default;
};

std::string_view gate_name(GateKind kind);
bool is_two_qubit(GateKind kind);

/// Ordered Clifford gate list on n qubits. Only H, S and CNOT are
/// generators; the other kinds are conveniences that desugar() expands.
class CliffordCircuit {
 public:
  explicit CliffordCircuit(int n);

  int num_qubits() const { return n_; }
  const std::vector<CliffordGate>& gates() const { return gates_; }
  bool empty() const { return gates_.empty(); }

  CliffordCircuit& add(GateKind kind, int q0, int q1 = -1);
  CliffordCircuit& h(int q) { return add(GateKind::H, q); }
  CliffordCircuit& s(int q) { return add(GateKind::S, q); }
  CliffordCircuit& sdg(int q) { return add(GateKind::Sdg, q); }
  CliffordCircuit& x(int q) { return add(GateKind::X, q); }
  CliffordCircuit& y(int q) { return add(GateKind::Y, q); }
  CliffordCircuit& z(int q) { return add(GateKind::Z, q); }
  CliffordCircuit& cnot(int c, int t) { return add(GateKind::CNOT, c, t); }
  CliffordCircuit& cz(int a, int b) { return add(GateKind::CZ, a, b); }
  CliffordCircuit& append(const CliffordCircuit& other);

  /// Same unitary up to global phase, using only H, S and CNOT.
  CliffordCircuit desugar() const;
  /// Circuit for the inverse (up to global phase).
  CliffordCircuit inverse() const;

  /// Dense unitary, exact phases from the gate matrices. n <= dense cap.
  ComplexMatrix unitary() const;

  /// Line format: "qubits N", then one gate per line ("H 0", "CNOT 0 1"),
  /// '#' starts a comment. Unknown gate names raise ParseError.
  static CliffordCircuit parse(std::string_view text);
  static CliffordCircuit parse_file(const std::string& path);
  std::string to_text() const;

 private:
  int n_;
  std::vector<CliffordGate> gates_;
};

ComplexMatrix gate_matrix(GateKind kind);

/// Stabilizer tableau of a Clifford operation G: row i holds G X_i G^dag
/// (destabilizers), row n+i holds G Z_i G^dag (stabilizers of G|0^n>).
/// Global phase is not represented.
class CliffordTableau {
 public:
  explicit CliffordTableau(int n);
  static CliffordTableau identity(int n) { return CliffordTableau(n); }

  int num_qubits() const { return n_; }
  const PauliString& destabilizer(int i) const { return rows_[i]; }
  const PauliString& stabilizer(int i) const { return rows_[n_ + i]; }
  PauliString& destabilizer(int i) { return rows_[i]; }
  PauliString& stabilizer(int i) { return rows_[n_ + i]; }
  const std::vector<PauliString>& rows() const { return rows_; }

  /// G <- gate * G.
  void apply(const CliffordGate& gate);
  void apply(const CliffordCircuit& circuit);

  /// Rows Hermitian, stabilizer i anticommutes exactly with destabilizer i
  /// and commutes with every other row.
  bool satisfies_invariants() const;

  /// Canonical byte key (bits plus signs); equal keys <=> equal Clifford
  /// operation modulo global phase.
  std::string key() const;
  friend bool operator==(const CliffordTableau& a, const CliffordTableau& b) { return a.rows_ == b.rows_; }

  CliffordTableau inverse() const;
  /// T2 after T1: the tableau of G2 G1.
  CliffordTableau then(const CliffordTableau& second) const;

 private:
  friend class TableauBuilder;
  int n_;
  std::vector<PauliString> rows_;
};

CliffordTableau tableau_apply(CliffordTableau t, const CliffordGate& gate);
CliffordTableau circuit_to_tableau(const CliffordCircuit& circuit);

enum class Direction {
  Forward,   // G P G^dag
  Backward,  // G^dag P G
};
PauliString conjugate_pauli(const CliffordTableau& t, const PauliString& p,
                            Direction direction = Direction::Forward);

/// One computational-basis sample from G|0^n>. Pivot ties resolved by the
/// lowest stabilizer index.
Bits sample_measurement(const CliffordTableau& t, Rng& rng);
/// Exact probability |<y|G|0^n>|^2 without dense arithmetic.
double stabilizer_probability(const CliffordTableau& t, const Bits& y);
/// All 2^n exact probabilities, n <= dense cap.
std::vector<double> stabilizer_distribution(const CliffordTableau& t);

/// Uniformly random Clifford operation modulo phase.
CliffordTableau random_clifford(int n, Rng& rng);

/// Calls visit on every n-qubit Clifford modulo phase, in a fixed order.
/// 11520 elements for n = 2; n must be at most 3.
void for_each_clifford(int n, const std::function<void(const CliffordTableau&)>& visit);

/// Dense unitary of the operation, correct up to one global phase.
ComplexMatrix tableau_unitary(const CliffordTableau& t);
/// G|psi> for a dense input state, correct up to one global phase.
std::vector<Complex> tableau_apply_dense(const CliffordTableau& t, std::span<const Complex> psi);

}  // namespace ccc
