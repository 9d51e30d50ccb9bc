#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccc/angle.hpp"
#include "ccc/linalg.hpp"
#include "ccc/stabilizer.hpp"

namespace ccc {

/// U = e^{i alpha} Rz(phi) Rx(theta) Rz(lambda). theta lies in [0, 2pi);
/// lambda = 0 whenever theta is a multiple of pi.
struct UnitaryDecomposition {
  ExactAngle alpha;
  ExactAngle phi;
  ExactAngle theta;
  ExactAngle lambda;

  ComplexMatrix recompose() const;
};

ComplexMatrix euler_matrix(double alpha, double phi, double theta, double lambda);

/// Throws InputError when U is not a 2x2 unitary (1e-10).
UnitaryDecomposition decompose_unitary(const ComplexMatrix& u);
/// Brings explicit angles to the canonical ranges (theta in [0, 2pi), lambda
/// folded into phi when theta is a multiple of pi), keeping the matrix fixed.
UnitaryDecomposition canonicalize(UnitaryDecomposition d);

enum class CaseTag { I, II, III, IV };
enum class ComplexityClass { PWeak, PHSupreme };
std::string_view to_string(CaseTag c);
std::string_view to_string(ComplexityClass c);

/// U ~ gamma · Rz(lambda) with gamma a one-qubit Clifford word.
struct CanonicalForm {
  CliffordCircuit gamma{1};
  ExactAngle lambda;

  ComplexMatrix matrix() const;
  std::string gamma_text() const;
};

struct ClassificationVerdict {
  CaseTag case_tag;
  ComplexityClass complexity_class;
  std::optional<CanonicalForm> canonical_form;
};

/// Decided on phi and theta only.
ClassificationVerdict classify(const UnitaryDecomposition& d);
ClassificationVerdict classify(const ComplexMatrix& u);

/// U X U^dag and U Z U^dag are each a signed Pauli (1e-9).
bool is_clifford_single_qubit(const ComplexMatrix& u);

/// A one-qubit unitary as given on input, with the decomposition taken from
/// exact angles when the spec supplies them.
struct UnitarySpec {
  std::string text;
  ComplexMatrix matrix;
  UnitaryDecomposition decomposition;
};

/// Named gate (H, S, SDG, T, TDG, X, Y, Z, I), "rz=A rx=B [rz2=C] [phase=D]"
/// meaning e^{iD} Rz(A) Rx(B) Rz(C), or eight reals (row-major re/im pairs).
UnitarySpec parse_unitary_spec(std::string_view text);
UnitarySpec unitary_from_angles(const ExactAngle& phi, const ExactAngle& theta,
                                const ExactAngle& lambda = {}, const ExactAngle& alpha = {});

class CccInstance {
 public:
  CccInstance(UnitarySpec u, CliffordCircuit v);
  CccInstance(const ComplexMatrix& u, CliffordCircuit v);

  int num_qubits() const { return v_.num_qubits(); }
  const ComplexMatrix& u() const { return u_.matrix; }
  const UnitarySpec& u_spec() const { return u_; }
  const UnitaryDecomposition& decomposition() const { return u_.decomposition; }
  const CliffordCircuit& v() const { return v_; }

 private:
  UnitarySpec u_;
  CliffordCircuit v_;
};

struct OutcomeDistribution {
  int n = 0;
  std::vector<double> p;

  double operator[](std::size_t y) const { return p[y]; }
  double sum() const;
};

/// p_y = |<y| (U^dag)^{(x)n} V U^{(x)n} |0^n>|^2 by statevector.
OutcomeDistribution dense_distribution(const CccInstance& instance);
double outcome_probability(const CccInstance& instance, const Bits& y);

double tv_distance(const OutcomeDistribution& p, const OutcomeDistribution& q);

/// A PWEAK instance rewritten as a plain Clifford sampling problem:
/// p_y = |<y ^ negate| T |0^n>|^2.
struct EasyReduction {
  CliffordTableau tableau;
  bool negate_output = false;
  std::string method;
};

/// Throws DomainError for PH_SUPREME instances.
EasyReduction reduce_easy(const CccInstance& instance);
Bits simulate_easy_weak(const CccInstance& instance, Rng& rng);
std::vector<Bits> simulate_easy_weak(const CccInstance& instance, int shots, Rng& rng);
/// Exact output distribution of the reduction (tableau arithmetic only).
OutcomeDistribution exact_reduction_distribution(const CccInstance& instance);

/// Draws from an explicit distribution by inverse CDF.
std::vector<Bits> sample_distribution(const OutcomeDistribution& d, int shots, Rng& rng);
OutcomeDistribution empirical_distribution(int n, const std::vector<Bits>& samples);

/// Pr[y_j = 0] by Pauli back-propagation through V; no dense state.
double marginal_single_qubit(const CccInstance& instance, int j);
/// Per-qubit coin flip on the marginal.
int sample_single_qubit(const CccInstance& instance, int j, Rng& rng);

/// Uniform double in [0, 1) from 53 bits of the generator.
double uniform01(Rng& rng);

}  // namespace ccc
