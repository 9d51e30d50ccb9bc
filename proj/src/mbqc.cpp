#include "ccc/mbqc.hpp"

#include <cmath>

namespace ccc {

namespace {

ComplexMatrix rz(const ExactAngle& a) { return gates::Rz(a.radians()); }

}  // namespace

ComplexMatrix teleport_chain(const Bits& bits) {
  const int m = static_cast<int>(bits.size());
  if (m < 1) throw InputError("teleport_chain: need at least one stage");
  require_dense(m + 1, "teleport_chain");
  std::vector<WireBit> ancillas, post;
  std::vector<FragmentOp> ops;
  for (int i = 0; i < m; ++i) {
    if (bits[i] > 1) throw InputError("teleport_chain: bits must be 0 or 1");
    ancillas.push_back({i + 1, 0});
    ops.push_back({gates::H(), {i + 1}});
  }
  for (int i = 0; i < m; ++i) {
    ops.push_back({gates::CZ(), {i, i + 1}});
    ops.push_back({gates::H(), {i}});
    post.push_back({i, bits[i]});
  }
  const int in[] = {0}, out[] = {m};
  return contract_postselected(m + 1, in, ancillas, ops, post, out);
}

ComplexMatrix teleport_chain_expected(const Bits& bits) {
  ComplexMatrix g = ComplexMatrix::identity(2);
  for (auto b : bits) {
    g = matmul(gates::H(), g);
    if (b) g = matmul(gates::X(), g);
  }
  return g;
}

ComplexMatrix g_gadget(const ExactAngle& theta, int postselect_bit) {
  if (postselect_bit != 0 && postselect_bit != 1) throw InputError("g_gadget: bit must be 0 or 1");
  const ExactAngle minus = -theta;
  const std::vector<FragmentOp> ops = {
      {gates::H(), {1}},     {rz(theta), {0}},  {rz(theta), {1}}, {gates::CZ(), {0, 1}},
      {gates::X(), {0}},     {rz(minus), {0}},  {rz(minus), {1}}, {gates::H(), {0}},
  };
  const int in[] = {0}, out[] = {1};
  const WireBit anc[] = {{1, 0}}, post[] = {{0, postselect_bit}};
  return contract_postselected(2, in, anc, ops, post, out);
}

ComplexMatrix g_gadget_expected(const ExactAngle& theta, int postselect_bit) {
  ComplexMatrix g = matmul(gates::H(), gates::Rz(2 * theta.radians()));
  return postselect_bit ? matmul(gates::X(), g) : g;
}

ComplexMatrix cz_between_gadget_wires(const ExactAngle& theta) {
  const ExactAngle minus = -theta;
  const std::vector<FragmentOp> ops = {
      {rz(theta), {0}}, {rz(theta), {1}}, {gates::CZ(), {0, 1}}, {rz(minus), {0}}, {rz(minus), {1}},
  };
  const int wires[] = {0, 1};
  return contract_postselected(2, wires, {}, ops, {}, wires);
}

BlochRotation rotation_angle(const ComplexMatrix& g) {
  if (g.rows() != 2 || g.cols() != 2) throw DimensionError("rotation_angle: need a 2x2 matrix");
  if (!is_unitary(g, 1e-8)) throw InputError("rotation_angle: matrix is not unitary");
  ComplexMatrix s = g * (1.0 / std::sqrt(g.determinant()));
  BlochRotation r;
  r.raw_half_trace = s.trace() / 2.0;
  if (r.raw_half_trace.real() < 0) s = s * -1.0;
  // s = cos(a/2) I - i sin(a/2) (n . sigma)
  r.cos_half = std::min(1.0, std::abs(s.trace().real()) / 2);
  r.angle = 2 * std::acos(r.cos_half);
  r.cos_angle = 2 * r.cos_half * r.cos_half - 1;
  const double sin_half = std::sin(r.angle / 2);
  if (sin_half < 1e-12) {
    r.axis_defined = false;
    return r;
  }
  const Complex i(0, 1);
  const ComplexMatrix paulis[] = {gates::X(), gates::Y(), gates::Z()};
  double norm = 0;
  for (int k = 0; k < 3; ++k) {
    r.axis[k] = (i * matmul(paulis[k], s).trace() / 2.0).real() / sin_half;
    norm += r.axis[k] * r.axis[k];
  }
  norm = std::sqrt(norm);
  for (double& v : r.axis) v /= norm;
  return r;
}

UniversalityVerdict universality_check(const ExactAngle& theta) {
  if (!theta.is_rational())
    throw InputError("universality_check: theta must be a rational multiple of pi, got " + theta.to_string());
  UniversalityVerdict v;
  v.theta = theta;
  const double s = std::sin(theta.radians()), c = std::cos(theta.radians());
  v.cos_phi0 = s * s - 1;
  v.cos_phi1 = c * c - 1;
  // cos(phi0) = -cos^2 theta and cos(phi1) = -sin^2 theta land in {0, -1/2, -1}
  // exactly when cos(2 theta) is in {-1, 0, 1}, that is theta in (pi/4)Z.
  const bool quarter = theta.in_quarter_pi_z();
  v.universal = !quarter;
  v.g0_irrational = v.g1_irrational = !quarter;
  if (theta.in_half_pi_z())
    v.reason = "theta is a multiple of pi/2: rotation angles {pi/2, pi}";
  else if (quarter)
    v.reason = "theta is an odd multiple of pi/4: rotation angles {2pi/3, 2pi/3}";
  else
    v.reason = "theta is not a multiple of pi/4: rotation cosines outside {0, +-1/2, +-1}";
  return v;
}

ComplexMatrix renormalize(const ComplexMatrix& a) {
  const double f = a.norm();
  if (f < 1e-300) throw DomainError("renormalize: zero matrix");
  return a * (std::sqrt(static_cast<double>(a.rows())) / f);
}

MbqcReport mbqc_check(const ExactAngle& theta) {
  MbqcReport r;
  r.verdict = universality_check(theta);
  const ComplexMatrix a0 = renormalize(g_gadget(theta, 0)), a1 = renormalize(g_gadget(theta, 1));
  r.g0 = rotation_angle(a0);
  r.g1 = rotation_angle(a1);
  r.g0_residual = phase_invariant_distance(a0, g_gadget_expected(theta, 0));
  r.g1_residual = phase_invariant_distance(a1, g_gadget_expected(theta, 1));
  r.cz_residual = max_abs_diff(cz_between_gadget_wires(theta), gates::CZ());
  const Bits chain{1, 0};
  r.teleport_residual = phase_invariant_distance(renormalize(teleport_chain(chain)), teleport_chain_expected(chain));
  return r;
}

}  // namespace ccc
