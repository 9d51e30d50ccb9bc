#include "ccc/stabilizer.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <fstream>
#include <sstream>

namespace ccc {

namespace {

std::size_t word_count(int n) { return (static_cast<std::size_t>(n) + 63) / 64; }

void check_qubit(int q, int n, const char* what) {
  if (q < 0 || q >= n) {
    throw InputError(std::string(what) + ": qubit " + std::to_string(q) + " out of range for " +
                     std::to_string(n) + " qubits");
  }
}

}  // namespace

std::string bits_to_string(const Bits& bits) {
  std::string s(bits.size(), '0');
  for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? '1' : '0';
  return s;
}

Bits bits_from_string(std::string_view s) {
  Bits b(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '0' && s[i] != '1') throw ParseError("bitstring may contain only 0 and 1");
    b[i] = s[i] == '1';
  }
  return b;
}

std::size_t bits_to_index(const Bits& bits) {
  std::size_t index = 0;
  for (auto b : bits) index = (index << 1) | (b & 1U);
  return index;
}

Bits index_to_bits(std::size_t index, int n) {
  Bits b(n);
  for (int i = 0; i < n; ++i) b[i] = (index >> (n - 1 - i)) & 1U;
  return b;
}

// ---------------------------------------------------------------- PauliString

PauliString::PauliString(int n) : n_(n), x_(word_count(n), 0), z_(word_count(n), 0) {
  if (n < 1) throw InputError("PauliString: need at least one qubit");
}

PauliString PauliString::single(int n, int qubit, char pauli) {
  PauliString p(n);
  check_qubit(qubit, n, "PauliString::single");
  switch (std::toupper(static_cast<unsigned char>(pauli))) {
    case 'I': break;
    case 'X': p.set_x(qubit, true); break;
    case 'Z': p.set_z(qubit, true); break;
    case 'Y': p.set_x(qubit, true); p.set_z(qubit, true); break;
    default: throw ParseError(std::string("unknown Pauli '") + pauli + "'");
  }
  return p;
}

PauliString PauliString::parse(std::string_view text) {
  int phase = 0;
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    if (text[pos] == '-') phase = 2;
    ++pos;
  }
  if (pos < text.size() && text[pos] == 'i') {
    phase += 1;
    ++pos;
  }
  const std::string_view body = text.substr(pos);
  if (body.empty()) throw ParseError("empty Pauli string");
  PauliString p(static_cast<int>(body.size()));
  for (std::size_t q = 0; q < body.size(); ++q) {
    switch (body[q]) {
      case 'I': case '_': break;
      case 'X': p.set_x(static_cast<int>(q), true); break;
      case 'Z': p.set_z(static_cast<int>(q), true); break;
      case 'Y': p.set_x(static_cast<int>(q), true); p.set_z(static_cast<int>(q), true); break;
      default: throw ParseError("bad Pauli character '" + std::string(1, body[q]) + "'");
    }
  }
  p.set_phase(phase);
  return p;
}

void PauliString::set_x(int q, bool v) {
  const std::uint64_t m = std::uint64_t{1} << (q & 63);
  x_[q >> 6] = v ? (x_[q >> 6] | m) : (x_[q >> 6] & ~m);
}

void PauliString::set_z(int q, bool v) {
  const std::uint64_t m = std::uint64_t{1} << (q & 63);
  z_[q >> 6] = v ? (z_[q >> 6] | m) : (z_[q >> 6] & ~m);
}

char PauliString::at(int q) const {
  const bool xb = x(q), zb = z(q);
  return xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
}

bool PauliString::is_identity() const {
  for (std::size_t w = 0; w < x_.size(); ++w)
    if (x_[w] | z_[w]) return false;
  return true;
}

bool PauliString::commutes_with(const PauliString& other) const {
  if (other.n_ != n_) throw DimensionError("PauliString: qubit count mismatch");
  int parity = 0;
  for (std::size_t w = 0; w < x_.size(); ++w)
    parity ^= std::popcount((x_[w] & other.z_[w]) ^ (z_[w] & other.x_[w])) & 1;
  return parity == 0;
}

PauliString& PauliString::operator*=(const PauliString& other) {
  if (other.n_ != n_) throw DimensionError("PauliString: qubit count mismatch");
  // Per-qubit phase i^{+1} / i^{-1} of P1*P2 in the Y = (1,1) convention.
  int g = 0;
  for (std::size_t w = 0; w < x_.size(); ++w) {
    const std::uint64_t x1 = x_[w], z1 = z_[w], x2 = other.x_[w], z2 = other.z_[w];
    const std::uint64_t plus = (x1 & z1 & z2 & ~x2) | (x1 & ~z1 & z2 & x2) | (~x1 & z1 & x2 & ~z2);
    const std::uint64_t minus = (x1 & z1 & x2 & ~z2) | (x1 & ~z1 & z2 & ~x2) | (~x1 & z1 & x2 & z2);
    g += std::popcount(plus) - std::popcount(minus);
    x_[w] = x1 ^ x2;
    z_[w] = z1 ^ z2;
  }
  set_phase(phase_ + other.phase_ + g);
  return *this;
}

std::string PauliString::to_string() const {
  static constexpr const char* prefix[] = {"+", "+i", "-", "-i"};
  std::string s = prefix[phase_];
  for (int q = 0; q < n_; ++q) s.push_back(at(q));
  return s;
}

ComplexMatrix PauliString::to_matrix() const {
  ComplexMatrix m = ComplexMatrix::identity(1);
  for (int q = 0; q < n_; ++q) {
    switch (at(q)) {
      case 'I': m = kron(m, gates::I()); break;
      case 'X': m = kron(m, gates::X()); break;
      case 'Y': m = kron(m, gates::Y()); break;
      default: m = kron(m, gates::Z()); break;
    }
  }
  static constexpr Complex ipow[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return m * ipow[phase_];
}

void PauliString::apply_to(std::vector<Complex>& amplitudes) const {
  if (amplitudes.size() != (std::size_t{1} << n_)) throw DimensionError("PauliString::apply_to: dimension");
  std::size_t xmask = 0, zmask = 0;
  int ycount = 0;
  for (int q = 0; q < n_; ++q) {
    const std::size_t bit = std::size_t{1} << (n_ - 1 - q);
    if (x(q)) xmask |= bit;
    if (z(q)) zmask |= bit;
    if (x(q) && z(q)) ++ycount;
  }
  // Y = i X Z, so each Y contributes a factor i on top of the Z sign.
  static constexpr Complex ipow[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex global = ipow[(phase_ + ycount) & 3];
  std::vector<Complex> out(amplitudes.size());
  for (std::size_t b = 0; b < amplitudes.size(); ++b) {
    const bool odd = std::popcount(b & zmask) & 1;
    out[b ^ xmask] = (odd ? -global : global) * amplitudes[b];
  }
  amplitudes.swap(out);
}

void PauliString::conj_h(int q) {
  const bool xb = x(q), zb = z(q);
  if (xb && zb) add_phase(2);
  set_x(q, zb);
  set_z(q, xb);
}

void PauliString::conj_s(int q) {
  const bool xb = x(q), zb = z(q);
  if (xb && zb) add_phase(2);
  set_z(q, zb ^ xb);
}

void PauliString::conj_sdg(int q) {
  const bool xb = x(q), zb = z(q);
  if (xb && !zb) add_phase(2);
  set_z(q, zb ^ xb);
}

void PauliString::conj_x(int q) {
  if (z(q)) add_phase(2);
}

void PauliString::conj_y(int q) {
  if (x(q) != z(q)) add_phase(2);
}

void PauliString::conj_z(int q) {
  if (x(q)) add_phase(2);
}

void PauliString::conj_cnot(int c, int t) {
  const bool xc = x(c), zc = z(c), xt = x(t), zt = z(t);
  if (xc && zt && (xt == zc)) add_phase(2);
  set_x(t, xt ^ xc);
  set_z(c, zc ^ zt);
}

void PauliString::conj_cz(int a, int b) {
  conj_h(b);
  conj_cnot(a, b);
  conj_h(b);
}

// ------------------------------------------------------------ CliffordCircuit

std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::Sdg: return "SDG";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::CNOT: return "CNOT";
    case GateKind::CZ: return "CZ";
  }
  return "?";
}

bool is_two_qubit(GateKind kind) { return kind == GateKind::CNOT || kind == GateKind::CZ; }

ComplexMatrix gate_matrix(GateKind kind) {
  switch (kind) {
    case GateKind::H: return gates::H();
    case GateKind::S: return gates::S();
    case GateKind::Sdg: return gates::Sdg();
    case GateKind::X: return gates::X();
    case GateKind::Y: return gates::Y();
    case GateKind::Z: return gates::Z();
    case GateKind::CNOT: return gates::CNOT();
    case GateKind::CZ: return gates::CZ();
  }
  throw InputError("gate_matrix: unknown kind");
}

CliffordCircuit::CliffordCircuit(int n) : n_(n) {
  if (n < 1) throw InputError("CliffordCircuit: need at least one qubit");
}

CliffordCircuit& CliffordCircuit::add(GateKind kind, int q0, int q1) {
  check_qubit(q0, n_, "CliffordCircuit");
  if (is_two_qubit(kind)) {
    check_qubit(q1, n_, "CliffordCircuit");
    if (q0 == q1) throw InputError("CliffordCircuit: two-qubit gate needs distinct qubits");
  } else {
    q1 = -1;
  }
  gates_.push_back({kind, q0, q1});
  return *this;
}

CliffordCircuit& CliffordCircuit::append(const CliffordCircuit& other) {
  if (other.n_ != n_) throw DimensionError("CliffordCircuit::append: qubit count mismatch");
  gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
  return *this;
}

CliffordCircuit CliffordCircuit::desugar() const {
  CliffordCircuit out(n_);
  for (const auto& g : gates_) {
    const int q = g.q0;
    switch (g.kind) {
      case GateKind::H: out.h(q); break;
      case GateKind::S: out.s(q); break;
      case GateKind::CNOT: out.cnot(g.q0, g.q1); break;
      case GateKind::Sdg: out.s(q).s(q).s(q); break;
      case GateKind::Z: out.s(q).s(q); break;
      case GateKind::X: out.h(q).s(q).s(q).h(q); break;
      // Y ~ X Z: Z first, then X.
      case GateKind::Y: out.s(q).s(q).h(q).s(q).s(q).h(q); break;
      case GateKind::CZ: out.h(g.q1).cnot(g.q0, g.q1).h(g.q1); break;
    }
  }
  return out;
}

CliffordCircuit CliffordCircuit::inverse() const {
  CliffordCircuit out(n_);
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
    switch (it->kind) {
      case GateKind::S: out.sdg(it->q0); break;
      case GateKind::Sdg: out.s(it->q0); break;
      default: out.add(it->kind, it->q0, it->q1); break;
    }
  }
  return out;
}

ComplexMatrix CliffordCircuit::unitary() const {
  require_dense(n_, "CliffordCircuit::unitary");
  const std::size_t dim = std::size_t{1} << n_;
  ComplexMatrix u(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    Statevector s = Statevector::basis(n_, col);
    for (const auto& g : gates_) {
      if (is_two_qubit(g.kind)) s.apply(gate_matrix(g.kind), {g.q0, g.q1});
      else s.apply(gate_matrix(g.kind), {g.q0});
    }
    for (std::size_t row = 0; row < dim; ++row) u(row, col) = s.amplitude(row);
  }
  return u;
}

namespace {

std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

int parse_index(const std::string& tok, int line_no) {
  std::size_t used = 0;
  int v = -1;
  try {
    v = std::stoi(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || v < 0)
    throw ParseError("line " + std::to_string(line_no) + ": bad qubit index '" + tok + "'");
  return v;
}

}  // namespace

CliffordCircuit CliffordCircuit::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  std::optional<CliffordCircuit> circuit;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const auto tok = split_ws(raw);
    if (tok.empty()) continue;
    if (!circuit) {
      if (tok.size() != 2 || tok[0] != "qubits")
        throw ParseError("line " + std::to_string(line_no) + ": expected 'qubits N' header");
      const int n = parse_index(tok[1], line_no);
      if (n < 1) throw ParseError("line " + std::to_string(line_no) + ": need at least one qubit");
      circuit.emplace(n);
      continue;
    }
    static const std::pair<std::string_view, GateKind> table[] = {
        {"H", GateKind::H},   {"S", GateKind::S},       {"SDG", GateKind::Sdg},
        {"X", GateKind::X},   {"Y", GateKind::Y},       {"Z", GateKind::Z},
        {"CNOT", GateKind::CNOT}, {"CZ", GateKind::CZ},
    };
    const auto it = std::find_if(std::begin(table), std::end(table),
                                 [&](const auto& e) { return e.first == tok[0]; });
    if (it == std::end(table))
      throw ParseError("line " + std::to_string(line_no) + ": unknown gate '" + tok[0] + "'");
    const std::size_t arity = is_two_qubit(it->second) ? 2 : 1;
    if (tok.size() != arity + 1)
      throw ParseError("line " + std::to_string(line_no) + ": gate " + tok[0] + " takes " +
                       std::to_string(arity) + " qubit index(es)");
    const int q0 = parse_index(tok[1], line_no);
    const int q1 = arity == 2 ? parse_index(tok[2], line_no) : -1;
    try {
      circuit->add(it->second, q0, q1);
    } catch (const InputError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!circuit) throw ParseError("missing 'qubits N' header");
  return *circuit;
}

CliffordCircuit CliffordCircuit::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open circuit file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

std::string CliffordCircuit::to_text() const {
  std::string out = "qubits " + std::to_string(n_) + "\n";
  for (const auto& g : gates_) {
    out += gate_name(g.kind);
    out += " " + std::to_string(g.q0);
    if (is_two_qubit(g.kind)) out += " " + std::to_string(g.q1);
    out += "\n";
  }
  return out;
}

// ------------------------------------------------------------ CliffordTableau

CliffordTableau::CliffordTableau(int n) : n_(n) {
  if (n < 1) throw InputError("CliffordTableau: need at least one qubit");
  rows_.reserve(2 * n);
  for (int i = 0; i < n; ++i) rows_.push_back(PauliString::single(n, i, 'X'));
  for (int i = 0; i < n; ++i) rows_.push_back(PauliString::single(n, i, 'Z'));
}

void CliffordTableau::apply(const CliffordGate& g) {
  check_qubit(g.q0, n_, "tableau_apply");
  if (is_two_qubit(g.kind)) {
    check_qubit(g.q1, n_, "tableau_apply");
    if (g.q0 == g.q1) throw InputError("tableau_apply: two-qubit gate needs distinct qubits");
  }
  for (auto& r : rows_) {
    switch (g.kind) {
      case GateKind::H: r.conj_h(g.q0); break;
      case GateKind::S: r.conj_s(g.q0); break;
      case GateKind::Sdg: r.conj_sdg(g.q0); break;
      case GateKind::X: r.conj_x(g.q0); break;
      case GateKind::Y: r.conj_y(g.q0); break;
      case GateKind::Z: r.conj_z(g.q0); break;
      case GateKind::CNOT: r.conj_cnot(g.q0, g.q1); break;
      case GateKind::CZ: r.conj_cz(g.q0, g.q1); break;
    }
  }
}

void CliffordTableau::apply(const CliffordCircuit& circuit) {
  if (circuit.num_qubits() != n_) throw DimensionError("tableau/circuit qubit count mismatch");
  for (const auto& g : circuit.gates()) apply(g);
}

bool CliffordTableau::satisfies_invariants() const {
  for (const auto& r : rows_)
    if (!r.is_hermitian()) return false;
  for (int i = 0; i < 2 * n_; ++i)
    for (int j = i + 1; j < 2 * n_; ++j) {
      const bool should_anticommute = (j == i + n_);
      if (rows_[i].commutes_with(rows_[j]) == should_anticommute) return false;
    }
  return true;
}

std::string CliffordTableau::key() const {
  std::string k;
  for (const auto& r : rows_) {
    k.push_back(static_cast<char>(r.phase()));
    for (auto w : r.x_words()) k.append(reinterpret_cast<const char*>(&w), sizeof w);
    for (auto w : r.z_words()) k.append(reinterpret_cast<const char*>(&w), sizeof w);
  }
  return k;
}

PauliString conjugate_pauli(const CliffordTableau& t, const PauliString& p, Direction direction) {
  if (p.num_qubits() != t.num_qubits()) throw DimensionError("conjugate_pauli: qubit count mismatch");
  if (direction == Direction::Backward) return conjugate_pauli(t.inverse(), p, Direction::Forward);
  const int n = t.num_qubits();
  // p = i^{phase + #Y} prod_q X_q^{x_q} Z_q^{z_q}; map each factor.
  PauliString out(n);
  int extra = p.phase();
  for (int q = 0; q < n; ++q) {
    const bool xb = p.x(q), zb = p.z(q);
    if (xb && zb) ++extra;
    if (xb) out *= t.destabilizer(q);
    if (zb) out *= t.stabilizer(q);
  }
  out.add_phase(extra);
  return out;
}

CliffordTableau CliffordTableau::inverse() const {
  // Over F2 the inverse symplectic matrix is Omega M^T Omega; signs are then
  // fixed by pushing each candidate row forward through this tableau.
  CliffordTableau inv(n_);
  for (int i = 0; i < n_; ++i) {
    PauliString xi(n_), zi(n_);
    for (int j = 0; j < n_; ++j) {
      xi.set_x(j, stabilizer(j).z(i));
      xi.set_z(j, destabilizer(j).z(i));
      zi.set_x(j, stabilizer(j).x(i));
      zi.set_z(j, destabilizer(j).x(i));
    }
    inv.rows_[i] = xi;
    inv.rows_[n_ + i] = zi;
  }
  for (int r = 0; r < 2 * n_; ++r) {
    const PauliString image = conjugate_pauli(*this, inv.rows_[r], Direction::Forward);
    if (image.phase() == 2) inv.rows_[r].add_phase(2);
  }
  return inv;
}

CliffordTableau CliffordTableau::then(const CliffordTableau& second) const {
  if (second.n_ != n_) throw DimensionError("tableau composition: qubit count mismatch");
  CliffordTableau out(n_);
  for (int r = 0; r < 2 * n_; ++r) out.rows_[r] = conjugate_pauli(second, rows_[r], Direction::Forward);
  return out;
}

CliffordTableau tableau_apply(CliffordTableau t, const CliffordGate& gate) {
  t.apply(gate);
  return t;
}

CliffordTableau circuit_to_tableau(const CliffordCircuit& circuit) {
  CliffordTableau t(circuit.num_qubits());
  t.apply(circuit);
  return t;
}

// ---------------------------------------------------------------- measurement

namespace {

struct OutcomeStep {
  bool random;
  int value;
};

// Measures qubit a of the stabilizer state held in rows. When the outcome is
// random, `forced` (0/1) picks it; otherwise the deterministic value returns.
OutcomeStep measure_qubit(std::vector<PauliString>& rows, int n, int a, int forced) {
  int pivot = -1;
  for (int i = n; i < 2 * n; ++i)
    if (rows[i].x(a)) {
      pivot = i;
      break;
    }
  if (pivot >= 0) {
    for (int i = 0; i < 2 * n; ++i)
      if (i != pivot && rows[i].x(a)) rows[i] = rows[pivot] * rows[i];
    rows[pivot - n] = rows[pivot];
    PauliString zrow = PauliString::single(n, a, 'Z');
    if (forced) zrow.set_phase(2);
    rows[pivot] = zrow;
    return {true, forced};
  }
  PauliString scratch(n);
  for (int i = 0; i < n; ++i)
    if (rows[i].x(a)) scratch *= rows[i + n];
  return {false, scratch.phase() == 2 ? 1 : 0};
}

}  // namespace

Bits sample_measurement(const CliffordTableau& t, Rng& rng) {
  const int n = t.num_qubits();
  std::vector<PauliString> rows = t.rows();
  Bits out(n);
  for (int a = 0; a < n; ++a) {
    // Draw before knowing whether the outcome is random, so the stream
    // advances identically for every tableau of the same size.
    const int coin = static_cast<int>(rng() >> 63);
    out[a] = static_cast<std::uint8_t>(measure_qubit(rows, n, a, coin).value);
  }
  return out;
}

double stabilizer_probability(const CliffordTableau& t, const Bits& y) {
  const int n = t.num_qubits();
  if (static_cast<int>(y.size()) != n) throw DimensionError("stabilizer_probability: bitstring length");
  std::vector<PauliString> rows = t.rows();
  double p = 1.0;
  for (int a = 0; a < n; ++a) {
    const auto step = measure_qubit(rows, n, a, y[a]);
    if (step.random) p *= 0.5;
    else if (step.value != y[a]) return 0.0;
  }
  return p;
}

std::vector<double> stabilizer_distribution(const CliffordTableau& t) {
  const int n = t.num_qubits();
  require_dense(n, "stabilizer_distribution");
  std::vector<double> p(std::size_t{1} << n);
  for (std::size_t y = 0; y < p.size(); ++y) p[y] = stabilizer_probability(t, index_to_bits(y, n));
  return p;
}

// ------------------------------------------------------------- random / enum

namespace {

// Symplectic vectors over F2^{2n} packed as (x bits | z bits << n), n <= 31.
using SymVec = std::uint64_t;

int omega(SymVec a, SymVec b, int n) {
  const SymVec lo = (SymVec{1} << n) - 1;
  const SymVec ax = a & lo, az = a >> n, bx = b & lo, bz = b >> n;
  return std::popcount((ax & bz) ^ (az & bx)) & 1;
}

PauliString to_pauli(SymVec v, int n, bool negative) {
  PauliString p(n);
  for (int q = 0; q < n; ++q) {
    p.set_x(q, (v >> q) & 1U);
    p.set_z(q, (v >> (n + q)) & 1U);
  }
  if (negative) p.set_phase(2);
  return p;
}

SymVec project_out(SymVec v, const std::vector<std::pair<SymVec, SymVec>>& pairs, int n) {
  for (const auto& [d, s] : pairs) {
    if (omega(v, s, n)) v ^= d;
    if (omega(v, d, n)) v ^= s;
  }
  return v;
}

}  // namespace

CliffordTableau random_clifford(int n, Rng& rng) {
  if (n < 1) throw InputError("random_clifford: need n >= 1");
  if (n > 31) throw CapacityError("random_clifford: packed sampler supports n <= 31");
  const int width = 2 * n;
  const SymVec mask = (width == 64) ? ~SymVec{0} : ((SymVec{1} << width) - 1);
  // Choose images of (X_i, Z_i) one symplectic pair at a time, each uniform
  // in the symplectic complement of the pairs already fixed.
  std::vector<std::pair<SymVec, SymVec>> pairs;
  for (int i = 0; i < n; ++i) {
    SymVec d = 0;
    while (d == 0) d = project_out(rng() & mask, pairs, n);
    SymVec s = 0;
    do {
      s = project_out(rng() & mask, pairs, n);
    } while (!omega(d, s, n));
    pairs.emplace_back(d, s);
  }
  CliffordTableau t(n);
  const std::uint64_t signs = rng();
  for (int i = 0; i < n; ++i) {
    t.destabilizer(i) = to_pauli(pairs[i].first, n, (signs >> i) & 1U);
    t.stabilizer(i) = to_pauli(pairs[i].second, n, (signs >> (n + i)) & 1U);
  }
  return t;
}

void for_each_clifford(int n, const std::function<void(const CliffordTableau&)>& visit) {
  if (n < 1) throw InputError("for_each_clifford: need n >= 1");
  if (n > 3) throw CapacityError("for_each_clifford: enumeration limited to n <= 3");
  const SymVec total = SymVec{1} << (2 * n);
  std::vector<std::pair<SymVec, SymVec>> pairs;
  std::function<void(int)> recurse = [&](int i) {
    if (i == n) {
      for (SymVec signs = 0; signs < (SymVec{1} << (2 * n)); ++signs) {
        CliffordTableau t(n);
        for (int k = 0; k < n; ++k) {
          t.destabilizer(k) = to_pauli(pairs[k].first, n, (signs >> k) & 1U);
          t.stabilizer(k) = to_pauli(pairs[k].second, n, (signs >> (n + k)) & 1U);
        }
        visit(t);
      }
      return;
    }
    for (SymVec d = 1; d < total; ++d) {
      bool ok = true;
      for (const auto& [pd, ps] : pairs) ok = ok && !omega(d, pd, n) && !omega(d, ps, n);
      if (!ok) continue;
      for (SymVec s = 1; s < total; ++s) {
        if (!omega(d, s, n)) continue;
        bool ok2 = true;
        for (const auto& [pd, ps] : pairs) ok2 = ok2 && !omega(s, pd, n) && !omega(s, ps, n);
        if (!ok2) continue;
        pairs.emplace_back(d, s);
        recurse(i + 1);
        pairs.pop_back();
      }
    }
  };
  recurse(0);
}

// ------------------------------------------------------------- dense bridges

namespace {

// G|0^n> as a dense vector: project a basis state in its support onto the
// stabilizer group.
std::vector<Complex> stabilizer_state(const CliffordTableau& t) {
  const int n = t.num_qubits();
  Rng fixed(0);
  const Bits y = sample_measurement(t, fixed);
  std::vector<Complex> v(std::size_t{1} << n, 0.0);
  v[bits_to_index(y)] = 1.0;
  for (int i = 0; i < n; ++i) {
    std::vector<Complex> sv = v;
    t.stabilizer(i).apply_to(sv);
    for (std::size_t b = 0; b < v.size(); ++b) v[b] = 0.5 * (v[b] + sv[b]);
  }
  double norm = 0.0;
  for (const auto& a : v) norm += std::norm(a);
  norm = std::sqrt(norm);
  for (auto& a : v) a /= norm;
  return v;
}

}  // namespace

ComplexMatrix tableau_unitary(const CliffordTableau& t) {
  const int n = t.num_qubits();
  require_dense(n, "tableau_unitary");
  const std::size_t dim = std::size_t{1} << n;
  ComplexMatrix u(dim, dim);
  std::vector<Complex> col = stabilizer_state(t);
  // Gray-code walk: G|x ^ e_q> = D_q G|x> with D_q = G X_q G^dag.
  std::size_t x = 0;
  for (std::size_t step = 0; step < dim; ++step) {
    if (step > 0) {
      const int flip = std::countr_zero(step);
      const int q = n - 1 - flip;
      t.destabilizer(q).apply_to(col);
      x ^= std::size_t{1} << flip;
    }
    for (std::size_t r = 0; r < dim; ++r) u(r, x) = col[r];
  }
  return u;
}

std::vector<Complex> tableau_apply_dense(const CliffordTableau& t, std::span<const Complex> psi) {
  const int n = t.num_qubits();
  require_dense(n, "tableau_apply_dense");
  const std::size_t dim = std::size_t{1} << n;
  if (psi.size() != dim) throw DimensionError("tableau_apply_dense: state dimension");
  std::vector<Complex> col = stabilizer_state(t);
  std::vector<Complex> out(dim, 0.0);
  std::size_t x = 0;
  for (std::size_t step = 0; step < dim; ++step) {
    if (step > 0) {
      const int flip = std::countr_zero(step);
      t.destabilizer(n - 1 - flip).apply_to(col);
      x ^= std::size_t{1} << flip;
    }
    const Complex c = psi[x];
    if (c == 0.0) continue;
    for (std::size_t r = 0; r < dim; ++r) out[r] += c * col[r];
  }
  return out;
}

}  // namespace ccc
