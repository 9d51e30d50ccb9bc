#include "ccc/ccc.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ccc {

namespace {

constexpr double kPi = std::numbers::pi;

// a = normalized + 2pi k
std::pair<ExactAngle, std::int64_t> reduce_2pi(const ExactAngle& a) {
  const ExactAngle norm = a.normalized();
  if (a.is_rational()) {
    const auto diff = a - norm;  // exact multiple of 2pi
    return {norm, diff.numerator() / 2};
  }
  return {norm, static_cast<std::int64_t>(std::llround((a.radians() - norm.radians()) / (2 * kPi)))};
}

ExactAngle pi_times(std::int64_t k) { return ExactAngle::rational_pi(k, 1); }

CliffordCircuit place_word(const CliffordCircuit& word, int n, int qubit) {
  CliffordCircuit out(n);
  for (const auto& g : word.gates()) out.add(g.kind, qubit);
  return out;
}

bool is_signed_pauli(const ComplexMatrix& m) {
  for (const auto& p : {gates::X(), gates::Y(), gates::Z()}) {
    if (max_abs_diff(m, p) <= 1e-9) return true;
    if (max_abs_diff(m, -1.0 * p) <= 1e-9) return true;
  }
  return false;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

ComplexMatrix euler_matrix(double alpha, double phi, double theta, double lambda) {
  return std::polar(1.0, alpha) * (gates::Rz(phi) * gates::Rx(theta) * gates::Rz(lambda));
}

ComplexMatrix UnitaryDecomposition::recompose() const {
  return euler_matrix(alpha.radians(), phi.radians(), theta.radians(), lambda.radians());
}

UnitaryDecomposition canonicalize(UnitaryDecomposition d) {
  // Rz and Rx are 4pi-periodic; every 2pi shift flips the sign, absorbed in alpha.
  auto shift = [&d](ExactAngle& angle) {
    auto [norm, k] = reduce_2pi(angle);
    angle = norm;
    if (k % 2 != 0) d.alpha = d.alpha + pi_times(1);
  };
  shift(d.theta);
  shift(d.phi);
  shift(d.lambda);
  if (d.theta.in_pi_z()) {
    if (d.theta.in_2pi_z()) d.phi = d.phi + d.lambda;
    else d.phi = d.phi - d.lambda;  // Rx(pi) Rz(l) = Rz(-l) Rx(pi)
    d.lambda = ExactAngle::rational_pi(0);
    shift(d.phi);
  }
  d.alpha = d.alpha.normalized();
  return d;
}

UnitaryDecomposition decompose_unitary(const ComplexMatrix& u) {
  if (u.rows() != 2 || u.cols() != 2) throw DimensionError("decompose_unitary: expected a 2x2 matrix");
  if (!is_unitary(u, kClosedFormTol)) throw InputError("decompose_unitary: matrix is not unitary");
  const Complex root = std::sqrt(u.determinant());
  const Complex v00 = u(0, 0) / root;
  const Complex v10 = u(1, 0) / root;
  // v00 = cos(t/2) e^{-i(phi+lambda)/2},  v10 = -i sin(t/2) e^{i(phi-lambda)/2}
  const ExactAngle theta = ExactAngle::from_radians(2 * std::atan2(std::abs(v10), std::abs(v00)));
  double phi = 0.0, lambda = 0.0;
  if (theta.in_pi_z()) {
    phi = theta.numerator() == 0 ? -2 * std::arg(v00) : 2 * std::arg(v10) + kPi;
  } else {
    const double sigma = -2 * std::arg(v00);
    const double delta = 2 * std::arg(v10) + kPi;
    phi = (sigma + delta) / 2;
    lambda = (sigma - delta) / 2;
  }
  UnitaryDecomposition d;
  d.theta = theta;
  d.phi = ExactAngle::from_radians(phi).normalized();
  d.lambda = ExactAngle::from_radians(lambda).normalized();
  const ComplexMatrix m = euler_matrix(0, d.phi.radians(), d.theta.radians(), d.lambda.radians());
  Complex overlap = 0.0;
  for (std::size_t i = 0; i < 4; ++i) overlap += std::conj(m.entries()[i]) * u.entries()[i];
  d.alpha = ExactAngle::from_radians(std::arg(overlap)).normalized();
  return d;
}

std::string_view to_string(CaseTag c) {
  switch (c) {
    case CaseTag::I: return "i";
    case CaseTag::II: return "ii";
    case CaseTag::III: return "iii";
    case CaseTag::IV: return "iv";
  }
  return "?";
}

std::string_view to_string(ComplexityClass c) { return c == ComplexityClass::PWeak ? "PWEAK" : "PH_SUPREME"; }

ComplexMatrix CanonicalForm::matrix() const { return gamma.unitary() * gates::Rz(lambda.radians()); }

std::string CanonicalForm::gamma_text() const {
  if (gamma.empty()) return "I";
  std::string s;
  // Matrix order: last gate leftmost.
  for (auto it = gamma.gates().rbegin(); it != gamma.gates().rend(); ++it) {
    if (!s.empty()) s += " ";
    s += gate_name(it->kind);
  }
  return s;
}

ClassificationVerdict classify(const UnitaryDecomposition& d) {
  const ExactAngle& phi = d.phi;
  const ExactAngle& theta = d.theta;
  if (theta.in_pi_z()) {
    CanonicalForm form;
    if (theta.in_2pi_z()) {
      form.lambda = (phi + d.lambda).normalized();
    } else {
      form.gamma.x(0);
      form.lambda = (d.lambda - phi).normalized();
    }
    return {CaseTag::I, ComplexityClass::PWeak, form};
  }
  if (theta.in_half_pi_z()) {
    if (phi.in_half_pi_z()) {
      const auto quarter = [](const ExactAngle& a) {
        const auto r = *a.as_rational();
        return static_cast<int>((((2 * r.first / r.second) % 4) + 4) % 4);
      };
      // Rz(k pi/2) ~ S^k and Rx(m pi/2) = H S^m H, applied right to left.
      CanonicalForm form;
      form.gamma.h(0);
      for (int i = 0; i < quarter(theta); ++i) form.gamma.s(0);
      form.gamma.h(0);
      for (int i = 0; i < quarter(phi); ++i) form.gamma.s(0);
      form.lambda = d.lambda;
      return {CaseTag::II, ComplexityClass::PWeak, form};
    }
    return {CaseTag::III, ComplexityClass::PHSupreme, std::nullopt};
  }
  return {CaseTag::IV, ComplexityClass::PHSupreme, std::nullopt};
}

ClassificationVerdict classify(const ComplexMatrix& u) { return classify(decompose_unitary(u)); }

bool is_clifford_single_qubit(const ComplexMatrix& u) {
  if (u.rows() != 2 || u.cols() != 2) throw DimensionError("is_clifford_single_qubit: expected 2x2");
  const ComplexMatrix ud = u.adjoint();
  return is_signed_pauli(u * gates::X() * ud) && is_signed_pauli(u * gates::Z() * ud);
}

UnitarySpec unitary_from_angles(const ExactAngle& phi, const ExactAngle& theta, const ExactAngle& lambda,
                                const ExactAngle& alpha) {
  UnitarySpec spec;
  spec.matrix = euler_matrix(alpha.radians(), phi.radians(), theta.radians(), lambda.radians());
  spec.decomposition = canonicalize({alpha, phi, theta, lambda});
  spec.text = "rz=" + phi.to_string() + " rx=" + theta.to_string();
  if (!(lambda == ExactAngle{})) spec.text += " rz2=" + lambda.to_string();
  if (!(alpha == ExactAngle{})) spec.text += " phase=" + alpha.to_string();
  return spec;
}

UnitarySpec parse_unitary_spec(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw ParseError("empty unitary spec");
  std::vector<std::string> tokens;
  {
    std::string cleaned = s;
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
    std::istringstream in(cleaned);
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
  }
  if (s.find('=') != std::string::npos) {
    ExactAngle phi, theta, lambda, alpha;
    for (const auto& tok : tokens) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw ParseError("expected key=value in unitary spec, got '" + tok + "'");
      const std::string key = tok.substr(0, eq);
      const ExactAngle value = ExactAngle::parse(tok.substr(eq + 1));
      if (key == "rz") phi = value;
      else if (key == "rx") theta = value;
      else if (key == "rz2") lambda = value;
      else if (key == "phase") alpha = value;
      else throw ParseError("unknown unitary spec key '" + key + "'");
    }
    UnitarySpec spec = unitary_from_angles(phi, theta, lambda, alpha);
    spec.text = s;
    return spec;
  }
  UnitarySpec spec;
  spec.text = s;
  if (tokens.size() == 8) {
    std::vector<Complex> e(4);
    for (std::size_t i = 0; i < 8; ++i) {
      double v = 0.0;
      const auto& t = tokens[i];
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (ec != std::errc() || ptr != t.data() + t.size()) throw ParseError("bad matrix entry '" + t + "'");
      if (i % 2 == 0) e[i / 2].real(v);
      else e[i / 2].imag(v);
    }
    spec.matrix = ComplexMatrix(2, 2, e);
    if (!is_unitary(spec.matrix, kClosedFormTol)) throw ParseError("matrix spec is not unitary");
  } else if (tokens.size() == 1) {
    std::string name = tokens[0];
    std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::toupper(c); });
    spec.matrix = gates::by_name(name);
    if (spec.matrix.rows() != 2) throw ParseError("'" + name + "' is not a one-qubit gate");
  } else {
    throw ParseError("unrecognised unitary spec '" + s + "'");
  }
  spec.decomposition = decompose_unitary(spec.matrix);
  return spec;
}

CccInstance::CccInstance(UnitarySpec u, CliffordCircuit v) : u_(std::move(u)), v_(std::move(v)) {
  if (u_.matrix.rows() != 2 || u_.matrix.cols() != 2) throw DimensionError("CccInstance: U must be 2x2");
  if (!is_unitary(u_.matrix, kClosedFormTol)) throw InputError("CccInstance: U is not unitary");
}

CccInstance::CccInstance(const ComplexMatrix& u, CliffordCircuit v)
    : CccInstance(UnitarySpec{"matrix", u, decompose_unitary(u)}, std::move(v)) {}

double OutcomeDistribution::sum() const {
  double s = 0.0;
  for (double x : p) s += x;
  return s;
}

OutcomeDistribution dense_distribution(const CccInstance& instance) {
  const int n = instance.num_qubits();
  require_dense(n, "dense_distribution");
  Statevector s(n);
  const ComplexMatrix ud = instance.u().adjoint();
  for (int q = 0; q < n; ++q) s.apply(instance.u(), {q});
  for (const auto& g : instance.v().gates()) {
    if (is_two_qubit(g.kind)) s.apply(gate_matrix(g.kind), {g.q0, g.q1});
    else s.apply(gate_matrix(g.kind), {g.q0});
  }
  for (int q = 0; q < n; ++q) s.apply(ud, {q});
  return {n, s.probabilities()};
}

double outcome_probability(const CccInstance& instance, const Bits& y) {
  if (static_cast<int>(y.size()) != instance.num_qubits())
    throw DimensionError("outcome_probability: bitstring length");
  return dense_distribution(instance).p[bits_to_index(y)];
}

double tv_distance(const OutcomeDistribution& p, const OutcomeDistribution& q) {
  if (p.n != q.n || p.p.size() != q.p.size()) throw DimensionError("tv_distance: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.p.size(); ++i) s += std::abs(p.p[i] - q.p[i]);
  return 0.5 * s;
}

EasyReduction reduce_easy(const CccInstance& instance) {
  const auto verdict = classify(instance.decomposition());
  if (verdict.complexity_class != ComplexityClass::PWeak)
    throw DomainError("simulate_easy_weak: U is in case " + std::string(to_string(verdict.case_tag)) +
                      ", not efficiently simulable");
  const int n = instance.num_qubits();
  const CanonicalForm& form = *verdict.canonical_form;
  EasyReduction r{CliffordTableau(n), false, ""};
  if (verdict.case_tag == CaseTag::I) {
    // Z rotations only touch phases of |0> and <y|; an X prefix flips both ends.
    if (form.gamma.empty()) {
      r.tableau = circuit_to_tableau(instance.v());
      r.method = "stabilizer";
    } else {
      CliffordCircuit w(n);
      for (int q = 0; q < n; ++q) w.x(q);
      w.append(instance.v());
      r.tableau = circuit_to_tableau(w);
      r.negate_output = true;
      r.method = "stabilizer-negated";
    }
    return r;
  }
  const CliffordCircuit inv = form.gamma.inverse();
  CliffordCircuit w(n);
  for (int q = 0; q < n; ++q) w.append(place_word(form.gamma, n, q));
  w.append(instance.v());
  for (int q = 0; q < n; ++q) w.append(place_word(inv, n, q));
  r.tableau = circuit_to_tableau(w);
  r.method = "stabilizer-folded";
  return r;
}

Bits simulate_easy_weak(const CccInstance& instance, Rng& rng) {
  return simulate_easy_weak(instance, 1, rng).front();
}

std::vector<Bits> simulate_easy_weak(const CccInstance& instance, int shots, Rng& rng) {
  const EasyReduction r = reduce_easy(instance);
  std::vector<Bits> out;
  out.reserve(shots);
  for (int i = 0; i < shots; ++i) {
    Bits b = sample_measurement(r.tableau, rng);
    if (r.negate_output)
      for (auto& bit : b) bit ^= 1U;
    out.push_back(std::move(b));
  }
  return out;
}

OutcomeDistribution exact_reduction_distribution(const CccInstance& instance) {
  const EasyReduction r = reduce_easy(instance);
  const int n = instance.num_qubits();
  std::vector<double> p = stabilizer_distribution(r.tableau);
  if (r.negate_output) {
    std::vector<double> flipped(p.size());
    const std::size_t all = p.size() - 1;
    for (std::size_t y = 0; y < p.size(); ++y) flipped[y] = p[y ^ all];
    p.swap(flipped);
  }
  return {n, std::move(p)};
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::vector<Bits> sample_distribution(const OutcomeDistribution& d, int shots, Rng& rng) {
  std::vector<double> cdf(d.p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < d.p.size(); ++i) cdf[i] = (acc += d.p[i]);
  std::vector<Bits> out;
  out.reserve(shots);
  for (int s = 0; s < shots; ++s) {
    const double u = uniform01(rng) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    out.push_back(index_to_bits(static_cast<std::size_t>(it - cdf.begin()), d.n));
  }
  return out;
}

OutcomeDistribution empirical_distribution(int n, const std::vector<Bits>& samples) {
  require_dense(n, "empirical_distribution");
  OutcomeDistribution d{n, std::vector<double>(std::size_t{1} << n, 0.0)};
  if (samples.empty()) return d;
  for (const auto& b : samples) d.p[bits_to_index(b)] += 1.0;
  for (auto& x : d.p) x /= static_cast<double>(samples.size());
  return d;
}

double marginal_single_qubit(const CccInstance& instance, int j) {
  const int n = instance.num_qubits();
  if (j < 0 || j >= n) throw InputError("marginal_single_qubit: qubit index out of range");
  const ComplexMatrix& u = instance.u();
  // U Z U^dag = a X + b Y + c Z
  const ComplexMatrix zc = u * gates::Z() * u.adjoint();
  const double coeff[3] = {
      0.5 * (gates::X() * zc).trace().real(),
      0.5 * (gates::Y() * zc).trace().real(),
      0.5 * (gates::Z() * zc).trace().real(),
  };
  // Bloch vector of U|0>.
  const Complex u0 = u(0, 0), u1 = u(1, 0);
  const double bloch_x = 2 * (std::conj(u0) * u1).real();
  const double bloch_y = 2 * (std::conj(u0) * u1).imag();
  const double bloch_z = std::norm(u0) - std::norm(u1);

  const CliffordTableau t = circuit_to_tableau(instance.v()).inverse();
  double total = 1.0;
  const char names[3] = {'X', 'Y', 'Z'};
  for (int k = 0; k < 3; ++k) {
    if (coeff[k] == 0.0) continue;
    const PauliString q = conjugate_pauli(t, PauliString::single(n, j, names[k]));
    double e = q.phase() == 2 ? -1.0 : 1.0;
    for (int w = 0; w < n && e != 0.0; ++w) {
      switch (q.at(w)) {
        case 'X': e *= bloch_x; break;
        case 'Y': e *= bloch_y; break;
        case 'Z': e *= bloch_z; break;
        default: break;
      }
    }
    total += coeff[k] * e;
  }
  return std::clamp(0.5 * total, 0.0, 1.0);
}

int sample_single_qubit(const CccInstance& instance, int j, Rng& rng) {
  return uniform01(rng) < marginal_single_qubit(instance, j) ? 0 : 1;
}

}  // namespace ccc
