// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned here.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <string>

#include "ccc/ccc.hpp"
#include "ccc/experiments.hpp"
#include "ccc/gadgets.hpp"
#include "ccc/mbqc.hpp"

using namespace ccc;
using std::numbers::pi;

namespace {

constexpr double kEntryTol = 1e-12;      // closed forms, contractions
constexpr double kExactTol = 1e-10;      // exact reductions vs dense
constexpr double kTvTol = 0.05;          // sampled distributions
constexpr int kShots = 10000;
constexpr double kSigmas = 5.0;          // moment checks
constexpr double kTailSigmas = 3.0;      // tail check
constexpr double kTableSeconds = 1.0;
constexpr double kGadgetSeconds = 10.0;

const Complex I1{0, 1};

ExactAngle rp(std::int64_t p, std::int64_t q = 1) { return ExactAngle::rational_pi(p, q); }

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

ComplexMatrix rz_rx(double phi, double theta) { return gates::Rz(phi) * gates::Rx(theta); }

// 1. Classification table.
Outcome table() {
  const auto t0 = std::chrono::steady_clock::now();
  struct Cell {
    ExactAngle phi, theta;
    ComplexityClass cls;
    CaseTag tag;
  };
  const ExactAngle phi_in[] = {rp(1, 2), rp(1)};
  const ExactAngle phi_out[] = {rp(1, 3), ExactAngle::real(1.1)};
  const ExactAngle th_pi[] = {rp(0), rp(1)};
  const ExactAngle th_odd[] = {rp(1, 2), rp(3, 2)};
  const ExactAngle th_off[] = {rp(1, 3), ExactAngle::real(0.7)};
  std::vector<Cell> cells;
  for (int s = 0; s < 2; ++s) {
    // (i, ii) cell reports case i.
    cells.push_back({phi_in[s], th_pi[s], ComplexityClass::PWeak, CaseTag::I});
    cells.push_back({phi_in[s], th_odd[s], ComplexityClass::PWeak, CaseTag::II});
    cells.push_back({phi_in[s], th_off[s], ComplexityClass::PHSupreme, CaseTag::IV});
    cells.push_back({phi_out[s], th_pi[s], ComplexityClass::PWeak, CaseTag::I});
    cells.push_back({phi_out[s], th_odd[s], ComplexityClass::PHSupreme, CaseTag::III});
    cells.push_back({phi_out[s], th_off[s], ComplexityClass::PHSupreme, CaseTag::IV});
  }
  int ok = 0;
  for (const auto& c : cells) {
    const auto v = classify(rz_rx(c.phi.radians(), c.theta.radians()));
    const auto w = classify(unitary_from_angles(c.phi, c.theta).decomposition);
    if (v.complexity_class == c.cls && v.case_tag == c.tag && w.complexity_class == c.cls && w.case_tag == c.tag) ++ok;
  }
  const double t = seconds_since(t0);
  return {ok == 12 && t < kTableSeconds, fmt("%.0f/12 cells exact, %.3f s", ok, t)};
}

// 2. Gadget closed forms and iff-boundaries.
ComplexMatrix action_i(double phi, double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return ComplexMatrix{{c * c, 0.5 * I1 * std::sin(theta) * std::exp(-I1 * phi)},
                       {-0.5 * I1 * std::sin(theta) * std::exp(I1 * phi), -s * s}};
}

ComplexMatrix action_j(double theta) {
  const Complex pre = std::exp(-I1 * pi / 4.0) / std::sqrt(2.0);
  return ComplexMatrix{{pre * (I1 + std::cos(theta)), 0.0}, {0.0, pre * (1.0 + I1 * std::cos(theta))}};
}

Outcome gadget_closed_forms() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  int boundary_fail = 0, exceptional = 0;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      const ExactAngle phi = rp(i, 10), theta = rp(j, 10);
      const auto ai = gadget_action(build_gadget_I(phi, theta));
      const auto aj = gadget_action(build_gadget_J(phi, theta));
      worst = std::max(worst, max_abs_diff(ai.matrix, action_i(phi.radians(), theta.radians())));
      worst = std::max(worst, max_abs_diff(aj.matrix, action_j(theta.radians())));
      const bool odd = theta.in_half_pi_z_odd(), half_phi = phi.in_half_pi_z(), half_th = theta.in_half_pi_z();
      if (odd || half_phi || half_th) ++exceptional;
      if (ai.is_unitary != odd) ++boundary_fail;
      if (ai.is_clifford != (half_phi && odd)) ++boundary_fail;
      if (!aj.is_unitary) ++boundary_fail;
      if (aj.is_clifford != half_th) ++boundary_fail;
    }
  const double t = seconds_since(t0);
  return {worst < kEntryTol && boundary_fail == 0 && t < kGadgetSeconds,
          fmt("max entry error %.2e, %.0f boundary failures over 400 points (", worst, boundary_fail) +
              std::to_string(exceptional) + fmt(" exceptional), %.2f s", t)};
}

// 3. Anticoncentration at n = 6.
Outcome anticoncentration() {
  const int n = 6;
  const auto r = anticoncentration_trial(n, parse_unitary_spec("rz=pi*1/5 rx=pi*1/3"), Bits(n, 0), 2000, 0.2, 20170101);
  const double theory_mean = 1.0 / 64, theory_m2 = 2 * (1 - 1.0 / 64) / (4096.0 - 1);
  const double z1 = std::abs(r.mean_p - theory_mean) / r.se_mean;
  const double z2 = std::abs(r.mean_p_squared - theory_m2) / r.se_second;
  const double floor = 0.32 - kTailSigmas * r.tail_sigma;
  const bool pass = z1 <= kSigmas && z2 <= kSigmas && r.tail_fraction >= floor;
  return {pass, fmt("mean %.6f (%.2f se), ", r.mean_p, z1) + fmt("second %.4e (%.2f se), ", r.mean_p_squared, z2) +
                    fmt("tail %.4f >= %.4f", r.tail_fraction, floor)};
}

// 4. Supremacy parameter arithmetic.
Outcome supremacy() {
  const auto p = supremacy_parameters(Rational::parse("1/5"), Rational::parse("1/5"), Rational::parse("1/100"));
  const auto d = supremacy_parameters(0.2, 0.2, 0.01);
  const bool pass = p.fraction == Rational::make(6, 50) && p.mult_error == Rational::make(1, 2) && p.valid &&
                    d.fraction == p.fraction && d.mult_error == p.mult_error;
  return {pass, "fraction " + p.fraction.to_string() + ", mult_error " + p.mult_error.to_string()};
}

// 5. Oracle equivalence on random instances.
CliffordCircuit random_circuit(int n, int length, Rng& rng) {
  CliffordCircuit c(n);
  for (int i = 0; i < length; ++i) {
    const int a = static_cast<int>(rng() % n);
    switch (rng() % 5) {
      case 0: c.h(a); break;
      case 1: c.s(a); break;
      case 2: c.h(a); break;
      case 3: c.x(a); break;
      default:
        if (n > 1) c.cnot(a, (a + 1 + static_cast<int>(rng() % (n - 1))) % n);
    }
  }
  return c;
}

// Statevector oracle: U on each qubit, V as one dense matrix, U^dag on each qubit.
std::vector<double> oracle(const ComplexMatrix& u, const CliffordCircuit& v) {
  const int n = v.num_qubits();
  Statevector sv(n);
  for (int q = 0; q < n; ++q) sv.apply(u, {q});
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  sv.apply(v.unitary(), all);
  for (int q = 0; q < n; ++q) sv.apply(u.adjoint(), {q});
  return sv.probabilities();
}

Outcome oracle_equivalence() {
  Rng rng(424242);
  const std::vector<UnitarySpec> easy = {
      parse_unitary_spec("H"), parse_unitary_spec("T"), parse_unitary_spec("S"), parse_unitary_spec("X"),
      unitary_from_angles(ExactAngle::real(0.7), rp(0)), unitary_from_angles(rp(1, 2), rp(3, 2), ExactAngle::real(0.9)),
      unitary_from_angles(rp(1), rp(1, 2), rp(1, 7)), unitary_from_angles(ExactAngle::real(2.3), rp(1), ExactAngle::real(0.4)),
  };
  const int instances = 60;
  double exact_worst = 0, marg_worst = 0, tv_stab = 0, tv_easy = 0;
  for (int k = 0; k < instances; ++k) {
    const int n = 1 + k % 6;
    const CliffordCircuit v = random_circuit(n, 4 * n + static_cast<int>(rng() % 8), rng);
    const CliffordTableau t = circuit_to_tableau(v);

    // Stabilizer sampling vs |<y|V|0>|^2.
    const auto plain = oracle(gates::I(), v);
    const auto stab = stabilizer_distribution(t);
    for (std::size_t y = 0; y < plain.size(); ++y) exact_worst = std::max(exact_worst, std::abs(stab[y] - plain[y]));
    std::vector<Bits> draws;
    for (int s = 0; s < kShots; ++s) draws.push_back(sample_measurement(t, rng));
    tv_stab = std::max(tv_stab, tv_distance(OutcomeDistribution{n, plain}, empirical_distribution(n, draws)));

    // Easy-case weak simulation.
    const CccInstance easy_inst(easy[k % easy.size()], v);
    const OutcomeDistribution dense{n, oracle(easy_inst.u(), v)};
    const auto reduced = exact_reduction_distribution(easy_inst);
    for (std::size_t y = 0; y < dense.p.size(); ++y)
      exact_worst = std::max(exact_worst, std::abs(reduced.p[y] - dense.p[y]));
    tv_easy = std::max(tv_easy, tv_distance(dense, empirical_distribution(n, simulate_easy_weak(easy_inst, kShots, rng))));

    // strong(1) marginals for a generic U.
    const double ang[] = {2 * pi * uniform01(rng), 2 * pi * uniform01(rng), 2 * pi * uniform01(rng)};
    const CccInstance hard(unitary_from_angles(ExactAngle::real(ang[0]), ExactAngle::real(ang[1]), ExactAngle::real(ang[2])), v);
    const auto hp = oracle(hard.u(), v);
    for (int j = 0; j < n; ++j) {
      double m0 = 0;
      for (std::size_t y = 0; y < hp.size(); ++y)
        if (((y >> (n - 1 - j)) & 1U) == 0) m0 += hp[y];
      marg_worst = std::max(marg_worst, std::abs(marginal_single_qubit(hard, j) - m0));
    }
  }
  const bool pass = exact_worst < kExactTol && marg_worst < kExactTol && tv_stab < kTvTol && tv_easy < kTvTol;
  return {pass, std::to_string(instances) + fmt(" instances n<=6: exact %.1e, marginal %.1e, ", exact_worst, marg_worst) +
                    fmt("max TV stabilizer %.4f, easy %.4f", tv_stab, tv_easy)};
}

// 6. Measurement-based gadgets.
Outcome mbqc() {
  double worst = 0;
  for (int k = 0; k < 40; ++k) {
    const ExactAngle theta = rp(k, 20);
    for (int b = 0; b < 2; ++b) {
      ComplexMatrix expect = gates::H() * gates::Rz(2 * theta.radians());
      if (b) expect = gates::X() * expect;
      worst = std::max(worst, phase_invariant_distance(renormalize(g_gadget(theta, b)), expect));
    }
  }
  int sweep_fail = 0, swept = 0;
  for (std::int64_t q = 1; q <= 24; ++q)
    for (std::int64_t p = 0; p < 2 * q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      ++swept;
      if (universality_check(rp(p, q)).universal == ((4 * p) % q == 0)) ++sweep_fail;
    }
  auto angles = [](const ExactAngle& t) {
    return std::pair{rotation_angle(g_gadget_expected(t, 0)).angle, rotation_angle(g_gadget_expected(t, 1)).angle};
  };
  const auto [a0, a1] = angles(rp(1, 2));
  const auto [b0, b1] = angles(rp(1, 4));
  const double fam = std::max({std::abs(a0 - pi / 2), std::abs(a1 - pi), std::abs(b0 - 2 * pi / 3), std::abs(b1 - 2 * pi / 3)});
  const bool pass = worst < kEntryTol && sweep_fail == 0 && fam < kExactTol;
  return {pass, fmt("g_gadget residual %.1e, ", worst) + std::to_string(sweep_fail) + "/" + std::to_string(swept) +
                    fmt(" sweep mismatches, family error %.1e", fam)};
}

// 7. Gadget search vs classification, and compile monotonicity.
Outcome search_cross_check() {
  const std::vector<ComplexMatrix> us = {
      gates::T(),                       // i
      rz_rx(0.7, pi),                   // i
      gates::H(),                       // ii
      rz_rx(pi / 2, 3 * pi / 2),        // ii
      rz_rx(pi / 3, pi / 2),            // iii
      rz_rx(1.1, 3 * pi / 2),           // iii
      rz_rx(pi / 5, pi / 3),            // iv
      rz_rx(0, pi / 4),                 // iv
      rz_rx(2.0, 0.9),                  // iv
      rz_rx(pi / 7, 2 * pi / 5),        // iv
  };
  int agree = 0;
  bool cases[4] = {false, false, false, false};
  for (const auto& u : us) {
    const auto v = classify(u);
    cases[static_cast<int>(v.case_tag)] = true;
    const bool found = !search_gadgets(u).empty();
    if (found == (v.complexity_class == ComplexityClass::PHSupreme)) ++agree;
  }
  const auto aj = *gadget_action(build_gadget_J(rp(0), rp(1, 3))).normalized;
  const std::vector<ComplexMatrix> gens{gates::H(), gates::S(), aj};
  const double d4 = compile_word(gates::Rz(pi / 4), gens, 4).distance;
  const double d12 = compile_word(gates::Rz(pi / 4), gens, 12).distance;
  const bool all_cases = cases[0] && cases[1] && cases[2] && cases[3];
  return {agree == 10 && all_cases && d12 <= d4,
          std::to_string(agree) + "/10 agree" + (all_cases ? " (all four cases)" : " (missing a case)") +
              fmt(", distance budget 4 %.4f, budget 12 %.4f", d4, d12)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"classification table", table},
      {"gadget closed forms and boundaries", gadget_closed_forms},
      {"anticoncentration moments at n=6", anticoncentration},
      {"supremacy parameter arithmetic", supremacy},
      {"oracle equivalence suite", oracle_equivalence},
      {"mbqc gadgets and universality", mbqc},
      {"gadget search cross-validation", search_cross_check},
  };
  int failed = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
