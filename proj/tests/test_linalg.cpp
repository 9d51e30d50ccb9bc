#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ccc/linalg.hpp"

using namespace ccc;
using std::numbers::pi;

namespace {
const Complex I1{0, 1};
}

TEST_CASE("matrix products of basic gates") {
  CHECK(max_abs_diff(gates::I() * gates::H(), gates::H()) < kArithmeticTol);
  CHECK(max_abs_diff(gates::H() * gates::H(), gates::I()) < kArithmeticTol);
  CHECK(max_abs_diff(gates::S() * gates::S(), gates::Z()) < kArithmeticTol);
  CHECK_THROWS_AS(matmul(ComplexMatrix(2, 3), ComplexMatrix(2, 2)), DimensionError);
}

TEST_CASE("gates are unitary") {
  for (const auto& g : {gates::H(), gates::S(), gates::CNOT(), gates::X(), gates::Y(), gates::Z(), gates::CZ(),
                        gates::Rz(0.37), gates::Rx(-1.9), gates::Ry(2.2)})
    CHECK(is_unitary(g, kArithmeticTol));
  CHECK_THROWS_AS(gates::by_name("FOO"), ParseError);
}

TEST_CASE("apply_gate") {
  Statevector s(1);
  s.apply(gates::X(), {0});
  CHECK(std::abs(s.amplitude(1) - 1.0) < kArithmeticTol);

  Statevector b(2);
  b.apply(gates::CNOT(), {0, 1});
  CHECK(std::abs(b.amplitude(0) - 1.0) < kArithmeticTol);

  Statevector h(1);
  h.apply(gates::H(), {0});
  CHECK(std::abs(h.amplitude(0) - 1 / std::sqrt(2.0)) < kArithmeticTol);
  CHECK(std::abs(h.amplitude(1) - 1 / std::sqrt(2.0)) < kArithmeticTol);

  CHECK_THROWS_AS(h.apply(gates::X(), {1}), InputError);
  CHECK_THROWS_AS(b.apply(gates::X(), {0, 1}), InputError);
  CHECK_THROWS_AS(b.apply(gates::CNOT(), {1, 1}), InputError);
}

TEST_CASE("qubit 0 is the most significant bit") {
  Statevector s(3);
  s.apply(gates::X(), {0});
  CHECK(std::abs(s.amplitude(4) - 1.0) < kArithmeticTol);
  Statevector t(2);
  t.apply(gates::X(), {1});
  t.apply(gates::CNOT(), {1, 0});
  CHECK(std::abs(t.amplitude(3) - 1.0) < kArithmeticTol);
}

TEST_CASE("random circuits preserve the norm") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ang(0, 2 * pi);
  Statevector s(5);
  for (int step = 0; step < 200; ++step) {
    const int a = static_cast<int>(rng() % 5);
    const int b = (a + 1 + static_cast<int>(rng() % 4)) % 5;
    switch (rng() % 4) {
      case 0: s.apply(gates::H(), {a}); break;
      case 1: s.apply(gates::Rz(ang(rng)), {a}); break;
      case 2: s.apply(gates::Rx(ang(rng)), {a}); break;
      default: s.apply(gates::CNOT(), {a, b}); break;
    }
    REQUIRE(std::abs(s.norm_squared() - 1.0) < kClosedFormTol);
  }
}

TEST_CASE("normalized action") {
  const ComplexMatrix two = 2.0 * gates::I();
  const ComplexMatrix a = normalized_action(two, 1);
  CHECK(equal_up_to_phase(a, gates::I(), kClosedFormTol));
  CHECK(std::abs(std::abs(a.determinant()) - 1.0) < kClosedFormTol);
  CHECK_THROWS_AS(normalized_action(ComplexMatrix(2, 2), 1), DomainError);

  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    ComplexMatrix m(4, 4);
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) m(r, c) = {g(rng), g(rng)};
    CHECK(std::abs(normalized_action(m, 2).determinant() - 1.0) < kClosedFormTol);
  }
}

TEST_CASE("phase comparisons") {
  CHECK(proportional_up_to_phase(gates::H(), std::polar(1.0, pi / 3) * gates::H(), kStructuralTol, true));
  CHECK_FALSE(proportional_up_to_phase(gates::X(), gates::Z(), kStructuralTol));
  CHECK(proportional(gates::H(), 3.0 * gates::H(), kStructuralTol));
  CHECK_FALSE(equal_up_to_phase(gates::H(), 3.0 * gates::H(), kStructuralTol));
}

TEST_CASE("phase comparison is an equivalence on sampled triples") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(0, 2 * pi);
  std::vector<ComplexMatrix> pool;
  for (const auto& base : {gates::H(), gates::X(), gates::S(), gates::Rz(0.4)})
    for (int k = 0; k < 3; ++k) pool.push_back(std::polar(1.0, ang(rng)) * base);
  for (const auto& a : pool) {
    CHECK(equal_up_to_phase(a, a, kStructuralTol));
    for (const auto& b : pool) {
      CHECK(equal_up_to_phase(a, b, kStructuralTol) == equal_up_to_phase(b, a, kStructuralTol));
      for (const auto& c : pool)
        if (equal_up_to_phase(a, b, kStructuralTol) && equal_up_to_phase(b, c, kStructuralTol))
          CHECK(equal_up_to_phase(a, c, kStructuralTol));
    }
  }
}

TEST_CASE("unitarity up to scale") {
  CHECK(is_unitary_up_to_scale(3.0 * gates::H(), kStructuralTol));
  CHECK(std::abs(*unitary_scale(3.0 * gates::H(), kStructuralTol) - 9.0) < kClosedFormTol);
  CHECK_FALSE(is_unitary_up_to_scale(ComplexMatrix{{1, 0}, {0, 0}}, kStructuralTol));
  CHECK_FALSE(is_unitary_up_to_scale(ComplexMatrix(2, 2), kStructuralTol));
}

TEST_CASE("phase-invariant distance") {
  CHECK(phase_invariant_distance(gates::H(), gates::H()) < kClosedFormTol);
  CHECK(std::abs(phase_invariant_distance(gates::I(), gates::X()) - std::sqrt(2.0)) < kClosedFormTol);
  CHECK(std::abs(phase_invariant_distance(gates::S(), gates::Z()) - phase_invariant_distance(gates::I(), gates::S())) <
        kClosedFormTol);
  CHECK(phase_invariant_distance(gates::H(), I1 * gates::H()) < kClosedFormTol);
  CHECK_THROWS_AS(phase_invariant_distance(2.0 * gates::H(), gates::H()), InputError);

  // Brute-force minimum over a phase grid bounds the closed form from above.
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ang(0, 2 * pi);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix a = gates::Rz(ang(rng)) * gates::Rx(ang(rng));
    const ComplexMatrix b = gates::Rx(ang(rng)) * gates::Rz(ang(rng));
    const double d = phase_invariant_distance(a, b);
    double best = 1e9;
    for (int k = 0; k < 20000; ++k) {
      const ComplexMatrix diff = a - std::polar(1.0, 2 * pi * k / 20000) * b;
      // 2x2 operator norm from the singular values of diff
      const ComplexMatrix g = diff.adjoint() * diff;
      const double tr = g.trace().real(), det = g.determinant().real();
      best = std::min(best, std::sqrt(0.5 * (tr + std::sqrt(std::max(0.0, tr * tr - 4 * det)))));
    }
    CHECK(d <= best + 1e-9);
    CHECK(d >= best - 1e-3);
    CHECK(std::abs(d - phase_invariant_distance(b, a)) < kClosedFormTol);
  }
  // 4x4 path
  const ComplexMatrix c = kron(gates::H(), gates::S());
  CHECK(phase_invariant_distance(c, std::polar(1.0, 0.3) * c) < kClosedFormTol);
  CHECK(std::abs(phase_invariant_distance(gates::CZ(), kron(gates::I(), gates::I())) - std::sqrt(2.0)) < 1e-9);
}

TEST_CASE("Euler product matches the closed form") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ang(-2 * pi, 2 * pi);
  for (int trial = 0; trial < 100; ++trial) {
    const double phi = ang(rng), theta = ang(rng), lambda = ang(rng);
    const ComplexMatrix product = gates::Rz(phi) * gates::Rx(theta) * gates::Rz(lambda);
    const double c = std::cos(theta / 2), s = std::sin(theta / 2);
    const ComplexMatrix closed{
        {c * std::exp(-I1 * (phi + lambda) / 2.0), -I1 * s * std::exp(-I1 * (phi - lambda) / 2.0)},
        {-I1 * s * std::exp(I1 * (phi - lambda) / 2.0), c * std::exp(I1 * (phi + lambda) / 2.0)}};
    CHECK(max_abs_diff(product, closed) < kArithmeticTol);
  }
}

TEST_CASE("postselected contraction") {
  // Teleport-style check: |in> CZ |+>, H on wire 0, postselect 0 -> H up to scale.
  const int inputs[] = {0};
  const WireBit anc[] = {{1, 0}};
  const FragmentOp ops[] = {{gates::H(), {1}}, {gates::CZ(), {0, 1}}, {gates::H(), {0}}};
  const WireBit post[] = {{0, 0}};
  const int outputs[] = {1};
  const ComplexMatrix a = contract_postselected(2, inputs, anc, ops, post, outputs);
  CHECK(proportional(a, gates::H(), kStructuralTol));

  const WireBit bad_post[] = {{1, 0}};
  CHECK_THROWS_AS(contract_postselected(2, inputs, anc, ops, bad_post, outputs), InputError);
}

TEST_CASE("dense cap") {
  const int saved = dense_qubit_cap();
  set_dense_qubit_cap(3);
  CHECK_THROWS_AS(Statevector(4), CapacityError);
  set_dense_qubit_cap(saved);
  CHECK_NOTHROW(Statevector(4));
}

TEST_CASE("phase invariant distance is accurate near a scalar ratio") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ang(0, 2 * pi);
  for (int i = 0; i < 200; ++i) {
    const ComplexMatrix u = matmul(gates::Rz(ang(rng)), matmul(gates::Rx(ang(rng)), gates::Rz(ang(rng))));
    const ComplexMatrix v = u * std::polar(1.0, ang(rng));
    CHECK(phase_invariant_distance(u, v) < 1e-14);
    const double eps = 1e-9;
    CHECK(phase_invariant_distance(u, matmul(u, gates::Rz(eps))) == doctest::Approx(eps / 2).epsilon(1e-4));
  }
}
