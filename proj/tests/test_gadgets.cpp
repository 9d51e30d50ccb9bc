#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ccc/ccc.hpp"
#include "ccc/gadgets.hpp"

using namespace ccc;
using std::numbers::pi;

namespace {
ExactAngle rp(std::int64_t p, std::int64_t q = 1) { return ExactAngle::rational_pi(p, q); }
const Complex I1{0, 1};
}  // namespace

TEST_CASE("gadget I and J match their closed forms on a grid") {
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const ExactAngle phi = rp(2 * i, 20), theta = rp(2 * j, 20);
      const auto ai = gadget_action(build_gadget_I(phi, theta));
      const auto aj = gadget_action(build_gadget_J(phi, theta));
      CHECK(max_abs_diff(ai.matrix, gadget_I_closed_form(phi.radians(), theta.radians())) < kArithmeticTol);
      CHECK(max_abs_diff(aj.matrix, gadget_J_closed_form(theta.radians())) < kArithmeticTol);
      CHECK(std::abs(aj.matrix.determinant() - 0.5 * (1 + std::pow(std::cos(theta.radians()), 2))) <
            kArithmeticTol);

      CHECK(ai.is_unitary == theta.in_half_pi_z_odd());
      CHECK(ai.is_clifford == (theta.in_half_pi_z_odd() && phi.in_half_pi_z()));
      CHECK(aj.is_unitary);
      CHECK(aj.is_clifford == theta.in_half_pi_z());
      if (ai.is_clifford) CHECK(ai.is_unitary);
      if (ai.is_unitary) CHECK(std::abs(*ai.gamma - 0.5) < kClosedFormTol);
    }
}

TEST_CASE("random angles") {
  Rng rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const double phi = 2 * pi * uniform01(rng), theta = 2 * pi * uniform01(rng);
    const auto ai = gadget_action(build_gadget_I(ExactAngle::real(phi), ExactAngle::real(theta)));
    CHECK(max_abs_diff(ai.matrix, gadget_I_closed_form(phi, theta)) < kArithmeticTol);
    const auto aj = gadget_action(build_gadget_J(ExactAngle::real(phi), ExactAngle::real(theta)));
    CHECK(aj.is_unitary);
    CHECK_FALSE(aj.is_clifford);
    CHECK(equal_up_to_phase(*aj.normalized, gates::Sdg() * gates::Rz(2 * std::atan(std::cos(theta))),
                            kClosedFormTol));
  }
}

TEST_CASE("normalized action of I at odd multiples of pi/2") {
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 12; ++i) {
      const double phi = 2 * pi * i / 12;
      const auto a = gadget_action(build_gadget_I(ExactAngle::real(phi), rp(2 * k + 1, 2)));
      const double sign = k == 0 ? 1.0 : -1.0;
      const ComplexMatrix expect = (I1 / std::sqrt(2.0)) *
                                   ComplexMatrix{{1.0, I1 * sign * std::exp(-I1 * phi)},
                                                 {-I1 * sign * std::exp(I1 * phi), -1.0}};
      const ComplexMatrix& n = *a.normalized;
      CHECK((max_abs_diff(n, expect) < kClosedFormTol || max_abs_diff(n, -1.0 * expect) < kClosedFormTol));
    }
  const auto z = normalized_action(gadget_I_closed_form(0, pi / 2), 1);
  const ComplexMatrix expect = (I1 / std::sqrt(2.0)) * ComplexMatrix{{1.0, I1}, {-I1, -1.0}};
  CHECK((max_abs_diff(z, expect) < kClosedFormTol || max_abs_diff(z, -1.0 * expect) < kClosedFormTol));
}

TEST_CASE("builder verdicts") {
  const auto i0 = gadget_action(build_gadget_I(rp(0), rp(1, 2)));
  CHECK(i0.is_unitary);
  CHECK(i0.is_clifford);
  const auto i1 = gadget_action(build_gadget_I(rp(1, 3), rp(1, 2)));
  CHECK(i1.is_unitary);
  CHECK_FALSE(i1.is_clifford);
  CHECK_FALSE(gadget_action(build_gadget_I(rp(1, 3), rp(1, 3))).is_unitary);
  CHECK(gadget_action(build_gadget_J(rp(2, 7), rp(1, 2))).is_clifford);
  const auto j = gadget_action(build_gadget_J(rp(0), rp(1, 3)));
  CHECK(j.is_unitary);
  CHECK_FALSE(j.is_clifford);
  CHECK(equal_up_to_phase(*j.normalized, gates::Sdg() * gates::Rz(2 * std::atan(0.5)), kClosedFormTol));
  CHECK(equal_up_to_phase(*gadget_action(build_gadget_J(rp(0), rp(1, 2))).normalized, gates::Sdg(), kClosedFormTol));
}

TEST_CASE("Pauli conjugation test") {
  const auto n1 = normalized_action(gadget_I_closed_form(pi / 3, pi / 2), 1);
  CHECK(pauli_conjugation_test(n1) == GadgetClass::UnitaryNonClifford);
  const ComplexMatrix x_image = n1 * gates::X() * n1.adjoint();
  CHECK(std::abs(std::abs(x_image(0, 0)) - std::sin(pi / 3)) < kClosedFormTol);

  const auto n2 = normalized_action(gadget_I_closed_form(pi / 2, pi / 2), 1);
  CHECK(pauli_conjugation_test(n2) == GadgetClass::Clifford);
  const ComplexMatrix img = n2 * gates::X() * n2.adjoint();
  const bool in_set = max_abs_diff(img, -1.0 * gates::X()) < 1e-9 || max_abs_diff(img, gates::Z()) < 1e-9 ||
                      max_abs_diff(img, -1.0 * gates::Z()) < 1e-9;
  CHECK(in_set);

  CHECK(pauli_conjugation_test(gadget_I_closed_form(0, pi / 3)) == GadgetClass::NonUnitary);
  CHECK(pauli_conjugation_test(ComplexMatrix(2, 2)) == GadgetClass::NonUnitary);
  CHECK(pauli_conjugation_test(gates::CNOT()) == GadgetClass::Clifford);
  CHECK(pauli_conjugation_test(kron(gates::T(), gates::H())) == GadgetClass::UnitaryNonClifford);
}

TEST_CASE("gadget validation and caps") {
  Gadget g = build_gadget_I(rp(0), rp(1, 2));
  g.postselect_wires = {3};
  CHECK_THROWS_AS(gadget_action(g), InputError);
  Gadget big = build_gadget_I(rp(0), rp(1, 2));
  big.k = 13;
  CHECK_THROWS_AS(gadget_action(big), CapacityError);
}

TEST_CASE("gadget search") {
  const auto hard = parse_unitary_spec("rz=pi*1/5 rx=pi*1/3");
  const auto results = search_gadgets(hard.matrix);
  CHECK_FALSE(results.empty());
  const auto target = normalized_action(gadget_action(build_gadget_J(rp(1, 5), rp(1, 3))).matrix, 1);
  bool has_j = false;
  for (const auto& r : results) {
    CHECK(r.action.is_unitary);
    CHECK_FALSE(r.action.is_clifford);
    // the reported gadget reproduces its own action when re-contracted
    CHECK(proportional(gadget_action(r.gadget).matrix, r.action.matrix, 1e-9));
    if (equal_up_to_phase(*r.action.normalized, target, 1e-9)) has_j = true;
  }
  CHECK(has_j);
  for (std::size_t i = 1; i < results.size(); ++i) CHECK(results[i - 1].key < results[i].key);

  CHECK(search_gadgets(gates::H()).empty());
  CHECK(search_gadgets(gates::Rz(pi / 3)).empty());
  CHECK_THROWS_AS(search_gadgets(gates::H(), {4, 1}), CapacityError);
}

TEST_CASE("search output does not depend on worker count") {
  const auto u = parse_unitary_spec("rz=pi*1/3 rx=pi*1/2").matrix;
  const auto one = search_gadgets(u, {2, 1});
  const auto three = search_gadgets(u, {2, 3});
  REQUIRE(one.size() == three.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].key == three[i].key);
    CHECK(one[i].gadget.gamma == three[i].gadget.gamma);
    CHECK(one[i].ancilla_only_available == three[i].ancilla_only_available);
  }
}

TEST_CASE("word compiler") {
  const std::vector<ComplexMatrix> hs{gates::H(), gates::S()};
  const auto h = compile_word(gates::H(), hs, 3);
  CHECK(h.distance < kClosedFormTol);
  CHECK(h.word.size() == 1);
  // H S S H = X up to phase
  CHECK(equal_up_to_phase(gates::H() * gates::S() * gates::S() * gates::H(), gates::X(), kArithmeticTol));
  CHECK(compile_word(gates::X(), hs, 6).distance < kClosedFormTol);

  const auto aj = *gadget_action(build_gadget_J(rp(0), rp(1, 3))).normalized;
  const std::vector<ComplexMatrix> gens{gates::H(), gates::S(), aj};
  const auto short_run = compile_word(gates::Rz(pi / 4), gens, 4);
  const auto long_run = compile_word(gates::Rz(pi / 4), gens, 12);
  CHECK(long_run.distance < short_run.distance);
  for (std::size_t i = 1; i < long_run.best_by_length.size(); ++i)
    CHECK(long_run.best_by_length[i] <= long_run.best_by_length[i - 1]);
  for (std::size_t i = 0; i < short_run.best_by_length.size(); ++i)
    CHECK(short_run.best_by_length[i] == long_run.best_by_length[i]);
  // reported word reproduces the reported distance
  ComplexMatrix m = ComplexMatrix::identity(2);
  for (int g : long_run.word) m = gens[g] * m;
  CHECK(std::abs(phase_invariant_distance(gates::Rz(pi / 4), m) - long_run.distance) < kClosedFormTol);

  CHECK_THROWS_AS(compile_word(gates::H(), {}, 3), InputError);
  CHECK_THROWS_AS(compile_word(gates::H(), hs, 15), CapacityError);
}

TEST_CASE("gadget file format") {
  const char* text =
      "# gadget I\n"
      "gadget k=2 l=1\n"
      "ancilla 0\n"
      "post wire=0 bit=0\n"
      "qubits 2\n"
      "CZ 0 1\n";
  const ComplexMatrix u = gates::Rz(pi / 3) * gates::Rx(pi / 2);
  const Gadget g = parse_gadget(text, u);
  CHECK(g.ancilla_wires == std::vector<int>{1});
  CHECK(max_abs_diff(gadget_action(g).matrix, gadget_I_closed_form(pi / 3, pi / 2)) < kArithmeticTol);

  const char* explicit_text =
      "gadget k=2 l=1\nancilla wire=1 bit=0\npost wire=1 bit=0\nqubits 2\nS 1\nCZ 0 1\n";
  CHECK(max_abs_diff(gadget_action(parse_gadget(explicit_text, u)).matrix, gadget_J_closed_form(pi / 2)) <
        kArithmeticTol);

  CHECK_THROWS_AS(parse_gadget("ancilla 0\nqubits 2\n", u), ParseError);
  CHECK_THROWS_AS(parse_gadget("gadget k=2 l=1\npost wire=0 bit=0\n", u), ParseError);
  CHECK_THROWS_AS(parse_gadget("gadget k=2 l=1\npost wire=5 bit=0\nqubits 2\n", u), ParseError);
  CHECK_THROWS_AS(parse_gadget("gadget k=2 l=1\nfoo\nqubits 2\n", u), ParseError);
}
