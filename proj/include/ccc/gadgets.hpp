#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccc/angle.hpp"
#include "ccc/linalg.hpp"
#include "ccc/stabilizer.hpp"

namespace ccc {

/// k-to-l postselection gadget: ancilla wires T start in |a>, get U, then the
/// k-qubit Clifford gamma acts, then wires S get U^dag and are projected on <b|.
/// Inputs are the wires outside T, outputs the wires outside S, both in
/// increasing wire order.
struct Gadget {
  int k = 2;
  int l = 1;
  ComplexMatrix u = gates::I();
  std::vector<int> ancilla_wires;
  Bits ancilla_bits;
  /// Exact circuit when known; otherwise the tableau alone fixes gamma up to phase.
  std::optional<CliffordCircuit> gamma_circuit;
  CliffordTableau gamma{1};
  std::vector<int> postselect_wires;
  Bits postselect_bits;

  /// Throws InputError when the wire bookkeeping is inconsistent.
  void validate() const;
  std::vector<int> input_wires() const;
  std::vector<int> output_wires() const;
  /// Some postselected wire is a system (non-ancilla) wire.
  bool postselects_system_wire() const;
};

inline constexpr int kMaxGadgetWires = 12;

enum class GadgetClass { Clifford, UnitaryNonClifford, NonUnitary };
std::string_view to_string(GadgetClass c);

struct GadgetAction {
  ComplexMatrix matrix;
  /// A^dag A = gamma I when unitary.
  std::optional<double> gamma;
  bool is_unitary = false;
  bool is_clifford = false;
  /// Unit-determinant representative when the action is invertible.
  std::optional<ComplexMatrix> normalized;
};

Gadget make_gadget(int k, int l, const ComplexMatrix& u, std::vector<int> ancilla_wires, Bits ancilla_bits,
                   const CliffordCircuit& gamma, std::vector<int> postselect_wires, Bits postselect_bits);

/// Dense contraction; k <= 12.
GadgetAction gadget_action(const Gadget& g);

/// U = Rz(phi) Rx(theta); ancilla wire 1 in |0>, CZ, postselect wire 0 on <0|.
Gadget build_gadget_I(const ExactAngle& phi, const ExactAngle& theta);
/// U = Rz(phi) Rx(theta); ancilla wire 1 in |0>, S on it, CZ, postselect wire 1 on <0|.
Gadget build_gadget_J(const ExactAngle& phi, const ExactAngle& theta);

ComplexMatrix gadget_I_closed_form(double phi, double theta);
ComplexMatrix gadget_J_closed_form(double theta);

/// Clifford iff unitary up to scale and the normalized A maps every X_i and
/// Z_i to a multiple of a Pauli string (1e-9).
GadgetClass pauli_conjugation_test(const ComplexMatrix& a);

struct GadgetSearchResult {
  Gadget gadget;
  GadgetAction action;
  /// Phase-canonical rounded key of the normalized action.
  std::string key;
  /// Some gadget with this action postselects only ancilla-fed wires.
  bool ancilla_only_available = false;
};

struct GadgetSearchOptions {
  int k = 2;
  int threads = 1;
};

/// All k-to-1 gadgets (ancilla wires fixed to 1..k-1, every Clifford class,
/// every postselected wire set, all bits) whose action is unitary and not
/// Clifford, one per normalized action, sorted by key.
std::vector<GadgetSearchResult> search_gadgets(const ComplexMatrix& u, const GadgetSearchOptions& options = {});

struct CompileResult {
  /// Generator indices in application order (first applied first).
  std::vector<int> word;
  ComplexMatrix matrix;
  double distance = 0.0;
  /// Best distance over words of length <= L, for L = 1..max_length.
  std::vector<double> best_by_length;
};

inline constexpr int kMaxWordLength = 14;

/// Beam search over words in the generators (no inverses) for the closest
/// match to target under phase_invariant_distance.
CompileResult compile_word(const ComplexMatrix& target, const std::vector<ComplexMatrix>& generators,
                           int max_length, int beam_width = 5000);

/// Text format: "gadget k=K l=L", then "ancilla B..." or "ancilla wire=W bit=B",
/// "post wire=W bit=B", then a circuit ("qubits K" ...). U is supplied separately.
Gadget parse_gadget(std::string_view text, const ComplexMatrix& u);
Gadget parse_gadget_file(const std::string& path, const ComplexMatrix& u);

/// Key of a matrix modulo global phase, entries rounded to the given grid.
std::string phase_key(const ComplexMatrix& m, double grid = 1e-6);

}  // namespace ccc
