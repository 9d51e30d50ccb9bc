#pragma once

#include <array>
#include <string>

#include "ccc/angle.hpp"
#include "ccc/stabilizer.hpp"

namespace ccc {

/// m chained CZ + H teleportation stages on wires 0..m; wire 0 is the input,
/// wire i is postselected on bits[i], wire m is the output. Contracted map,
/// not renormalized (each stage contributes 1/sqrt(2)).
ComplexMatrix teleport_chain(const Bits& bits);
/// X^{b_m} H ... X^{b_1} H, first bit applied first.
ComplexMatrix teleport_chain_expected(const Bits& bits);

/// The conjugated gadget with an X on the measured wire between the CZ and
/// the closing Rz(-theta); contracted, not renormalized.
ComplexMatrix g_gadget(const ExactAngle& theta, int postselect_bit);
/// X^b H Rz(2 theta).
ComplexMatrix g_gadget_expected(const ExactAngle& theta, int postselect_bit);

/// Rz(theta) on both wires, CZ, Rz(-theta) on both wires.
ComplexMatrix cz_between_gadget_wires(const ExactAngle& theta);

struct BlochRotation {
  std::array<double, 3> axis{0.0, 0.0, 1.0};
  /// In [0, pi].
  double angle = 0.0;
  /// |tr G'| / 2 = cos(angle / 2) for the phase-stripped G'.
  double cos_half = 1.0;
  /// cos(angle) = 2 cos_half^2 - 1, independent of the folding convention.
  double cos_angle = 1.0;
  /// tr(G / sqrt(det G)) / 2 before the sign fix.
  Complex raw_half_trace{1.0, 0.0};
  /// False when G is proportional to I (axis meaningless).
  bool axis_defined = true;
};

/// Strips the phase (divide by sqrt(det), principal branch, then negate if
/// the trace has negative real part) and reads off angle and axis.
BlochRotation rotation_angle(const ComplexMatrix& g);

struct UniversalityVerdict {
  ExactAngle theta;
  bool universal = false;
  std::string reason;
  /// sin^2 theta - 1 and cos^2 theta - 1.
  double cos_phi0 = 0.0;
  double cos_phi1 = 0.0;
  /// G_i flagged as a rotation by an irrational multiple of pi.
  bool g0_irrational = false;
  bool g1_irrational = false;
};

/// theta must be a rational multiple of pi; REAL angles raise InputError.
UniversalityVerdict universality_check(const ExactAngle& theta);

struct MbqcReport {
  UniversalityVerdict verdict;
  BlochRotation g0, g1;
  /// Phase-invariant distances between renormalized contractions and the
  /// closed forms.
  double g0_residual = 0.0;
  double g1_residual = 0.0;
  double cz_residual = 0.0;
  double teleport_residual = 0.0;
};

MbqcReport mbqc_check(const ExactAngle& theta);

/// A scaled to Frobenius norm sqrt(dim); unitary when A is unitary up to scale.
ComplexMatrix renormalize(const ComplexMatrix& a);

}  // namespace ccc
