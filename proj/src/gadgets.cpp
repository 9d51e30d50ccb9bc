#include "ccc/gadgets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

namespace ccc {

namespace {

std::vector<int> complement(int k, const std::vector<int>& wires) {
  std::vector<int> out;
  for (int w = 0; w < k; ++w)
    if (std::find(wires.begin(), wires.end(), w) == wires.end()) out.push_back(w);
  return out;
}

void check_wire_set(const std::vector<int>& wires, const Bits& bits, int k, int expected, const char* what) {
  if (static_cast<int>(wires.size()) != expected || static_cast<int>(bits.size()) != expected)
    throw InputError(std::string("gadget: ") + what + " needs exactly k - l wires and bits");
  std::set<int> seen;
  for (int w : wires) {
    if (w < 0 || w >= k) throw InputError(std::string("gadget: ") + what + " wire out of range");
    if (!seen.insert(w).second) throw InputError(std::string("gadget: repeated ") + what + " wire");
  }
  for (auto b : bits)
    if (b > 1) throw InputError(std::string("gadget: ") + what + " bits must be 0 or 1");
}

std::vector<ComplexMatrix> pauli_basis(int l) {
  std::vector<ComplexMatrix> out{ComplexMatrix::identity(1)};
  const ComplexMatrix single[] = {gates::I(), gates::X(), gates::Y(), gates::Z()};
  for (int q = 0; q < l; ++q) {
    std::vector<ComplexMatrix> next;
    for (const auto& m : out)
      for (const auto& s : single) next.push_back(kron(m, s));
    out.swap(next);
  }
  return out;
}

ComplexMatrix on_qubit(const ComplexMatrix& g, int q, int l) {
  ComplexMatrix m = ComplexMatrix::identity(1);
  for (int i = 0; i < l; ++i) m = kron(m, i == q ? g : gates::I());
  return m;
}

bool multiple_of_pauli(const ComplexMatrix& m, const std::vector<ComplexMatrix>& basis) {
  const double dim = static_cast<double>(m.rows());
  for (const auto& q : basis) {
    const Complex c = (q * m).trace() / dim;
    if (std::abs(c) < 0.5) continue;
    return max_abs_diff(m, c * q) <= 1e-9;
  }
  return false;
}

// A scaled so that it is unitary whenever A is unitary up to scale.
std::optional<ComplexMatrix> unit_scaled(const ComplexMatrix& a) {
  const double norm = a.norm();
  if (norm < 1e-12) return std::nullopt;
  return a * Complex(std::sqrt(static_cast<double>(a.rows())) / norm);
}

GadgetAction analyze_action(ComplexMatrix a, int l) {
  GadgetAction out;
  const auto b = unit_scaled(a);
  if (b && is_unitary(*b, kStructuralTol)) {
    out.is_unitary = true;
    out.gamma = a.norm() * a.norm() / static_cast<double>(a.rows());
    out.is_clifford = pauli_conjugation_test(a) == GadgetClass::Clifford;
  }
  try {
    out.normalized = normalized_action(a, l);
  } catch (const DomainError&) {
    if (out.is_unitary) out.normalized = normalized_action(*b, l);
  }
  out.matrix = std::move(a);
  return out;
}

}  // namespace

std::string_view to_string(GadgetClass c) {
  switch (c) {
    case GadgetClass::Clifford: return "CLIFFORD";
    case GadgetClass::UnitaryNonClifford: return "UNITARY_NON_CLIFFORD";
    case GadgetClass::NonUnitary: return "NON_UNITARY";
  }
  return "?";
}

void Gadget::validate() const {
  if (l < 1 || k <= l) throw InputError("gadget: need k > l >= 1");
  if (u.rows() != 2 || u.cols() != 2) throw DimensionError("gadget: U must be 2x2");
  check_wire_set(ancilla_wires, ancilla_bits, k, k - l, "ancilla");
  check_wire_set(postselect_wires, postselect_bits, k, k - l, "postselect");
  if (gamma.num_qubits() != k) throw DimensionError("gadget: Clifford acts on the wrong number of wires");
  if (gamma_circuit && gamma_circuit->num_qubits() != k)
    throw DimensionError("gadget: Clifford circuit acts on the wrong number of wires");
}

std::vector<int> Gadget::input_wires() const { return complement(k, ancilla_wires); }
std::vector<int> Gadget::output_wires() const { return complement(k, postselect_wires); }

bool Gadget::postselects_system_wire() const {
  return std::any_of(postselect_wires.begin(), postselect_wires.end(), [&](int w) {
    return std::find(ancilla_wires.begin(), ancilla_wires.end(), w) == ancilla_wires.end();
  });
}

Gadget make_gadget(int k, int l, const ComplexMatrix& u, std::vector<int> ancilla_wires, Bits ancilla_bits,
                   const CliffordCircuit& gamma, std::vector<int> postselect_wires, Bits postselect_bits) {
  Gadget g;
  g.k = k;
  g.l = l;
  g.u = u;
  g.ancilla_wires = std::move(ancilla_wires);
  g.ancilla_bits = std::move(ancilla_bits);
  g.gamma_circuit = gamma;
  g.gamma = circuit_to_tableau(gamma);
  g.postselect_wires = std::move(postselect_wires);
  g.postselect_bits = std::move(postselect_bits);
  g.validate();
  return g;
}

GadgetAction gadget_action(const Gadget& g) {
  if (g.k > kMaxGadgetWires)
    throw CapacityError("gadget_action: k = " + std::to_string(g.k) + " exceeds the limit of " +
                        std::to_string(kMaxGadgetWires) + " wires");
  g.validate();
  std::vector<FragmentOp> ops;
  for (int w : g.ancilla_wires) ops.push_back({g.u, {w}});
  if (g.gamma_circuit) {
    for (const auto& gate : g.gamma_circuit->gates()) {
      if (is_two_qubit(gate.kind)) ops.push_back({gate_matrix(gate.kind), {gate.q0, gate.q1}});
      else ops.push_back({gate_matrix(gate.kind), {gate.q0}});
    }
  } else {
    std::vector<int> all(g.k);
    for (int w = 0; w < g.k; ++w) all[w] = w;
    ops.push_back({tableau_unitary(g.gamma), all});
  }
  const ComplexMatrix ud = g.u.adjoint();
  for (int w : g.postselect_wires) ops.push_back({ud, {w}});
  std::vector<WireBit> anc, post;
  for (std::size_t i = 0; i < g.ancilla_wires.size(); ++i) anc.push_back({g.ancilla_wires[i], g.ancilla_bits[i]});
  for (std::size_t i = 0; i < g.postselect_wires.size(); ++i)
    post.push_back({g.postselect_wires[i], g.postselect_bits[i]});
  const auto in = g.input_wires();
  const auto out = g.output_wires();
  return analyze_action(contract_postselected(g.k, in, anc, ops, post, out), g.l);
}

Gadget build_gadget_I(const ExactAngle& phi, const ExactAngle& theta) {
  const ComplexMatrix u = gates::Rz(phi.radians()) * gates::Rx(theta.radians());
  return make_gadget(2, 1, u, {1}, {0}, CliffordCircuit(2).cz(0, 1), {0}, {0});
}

Gadget build_gadget_J(const ExactAngle& phi, const ExactAngle& theta) {
  const ComplexMatrix u = gates::Rz(phi.radians()) * gates::Rx(theta.radians());
  return make_gadget(2, 1, u, {1}, {0}, CliffordCircuit(2).s(1).cz(0, 1), {1}, {0});
}

ComplexMatrix gadget_I_closed_form(double phi, double theta) {
  const Complex i{0, 1};
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return {{c * c, 0.5 * i * std::sin(theta) * std::exp(-i * phi)},
          {-0.5 * i * std::sin(theta) * std::exp(i * phi), -s * s}};
}

ComplexMatrix gadget_J_closed_form(double theta) {
  const Complex i{0, 1};
  const double c = std::cos(theta);
  const Complex pre = std::polar(1.0 / std::sqrt(2.0), -std::numbers::pi / 4);
  return {{pre * (i + c), 0.0}, {0.0, pre * (1.0 + i * c)}};
}

GadgetClass pauli_conjugation_test(const ComplexMatrix& a) {
  if (!a.is_square() || a.rows() < 2 || (a.rows() & (a.rows() - 1)) != 0)
    throw DimensionError("pauli_conjugation_test: need a 2^l x 2^l matrix");
  const auto b = unit_scaled(a);
  if (!b || !is_unitary(*b, kStructuralTol)) return GadgetClass::NonUnitary;
  const int l = std::countr_zero(a.rows());
  const auto basis = pauli_basis(l);
  const ComplexMatrix bd = b->adjoint();
  for (int q = 0; q < l; ++q)
    for (const auto& p : {gates::X(), gates::Z()})
      if (!multiple_of_pauli(*b * on_qubit(p, q, l) * bd, basis)) return GadgetClass::UnitaryNonClifford;
  return GadgetClass::Clifford;
}

std::string phase_key(const ComplexMatrix& m, double grid) {
  const auto e = m.entries();
  Complex ref = 1.0;
  double biggest = 0.0;
  for (const auto& x : e) biggest = std::max(biggest, std::abs(x));
  for (const auto& x : e)
    if (std::abs(x) > 0.5 * biggest && biggest > 0) {
      ref = std::conj(x) / std::abs(x);
      break;
    }
  std::string key;
  char buf[64];
  for (const auto& x : e) {
    const Complex y = x * ref;
    long long re = std::llround(y.real() / grid), im = std::llround(y.imag() / grid);
    if (re == 0) re = 0;
    if (im == 0) im = 0;
    std::snprintf(buf, sizeof buf, "%lld,%lld;", re, im);
    key += buf;
  }
  return key;
}

std::vector<GadgetSearchResult> search_gadgets(const ComplexMatrix& u, const GadgetSearchOptions& options) {
  const int k = options.k;
  if (k < 2) throw InputError("search_gadgets: k must be at least 2");
  if (k > 3) throw CapacityError("search_gadgets: Clifford enumeration is limited to k <= 3");
  if (u.rows() != 2 || u.cols() != 2 || !is_unitary(u, kStructuralTol))
    throw InputError("search_gadgets: U must be a 2x2 unitary");
  const int m = k - 1;  // ancilla / postselected wire count

  auto kron_wires = [&](const std::vector<ComplexMatrix>& per_wire) {
    ComplexMatrix v = ComplexMatrix::identity(1);
    for (const auto& w : per_wire) v = kron(v, w);
    return v;  // dim x 1
  };
  const ComplexMatrix ket0{{1.0}, {0.0}}, ket1{{0.0}, {1.0}};
  // psi[in][a] = |in>_0 (x) U|a_1> (x) ... on wires 1..k-1
  std::vector<std::vector<ComplexMatrix>> psi(2, std::vector<ComplexMatrix>(std::size_t{1} << m));
  for (int in = 0; in < 2; ++in)
    for (std::size_t a = 0; a < psi[in].size(); ++a) {
      std::vector<ComplexMatrix> w{in ? ket1 : ket0};
      for (int j = 0; j < m; ++j) w.push_back(u * (((a >> (m - 1 - j)) & 1U) ? ket1 : ket0));
      psi[in][a] = kron_wires(w);
    }
  // chi[o][b][out]: U|b> on the postselected wires (all but o), |out> on wire o
  std::vector<std::vector<std::vector<ComplexMatrix>>> chi(k);
  for (int o = 0; o < k; ++o) {
    chi[o].assign(std::size_t{1} << m, std::vector<ComplexMatrix>(2));
    for (std::size_t b = 0; b < chi[o].size(); ++b)
      for (int out = 0; out < 2; ++out) {
        std::vector<ComplexMatrix> w;
        int j = 0;
        for (int wire = 0; wire < k; ++wire) {
          if (wire == o) w.push_back(out ? ket1 : ket0);
          else w.push_back(u * (((b >> (m - 1 - j++)) & 1U) ? ket1 : ket0));
        }
        chi[o][b][out] = kron_wires(w).adjoint();
      }
  }

  struct Hit {
    std::uint64_t order;
    CliffordTableau tableau;
    int o;
    std::size_t a, b;
    ComplexMatrix action;
    GadgetAction analysis;
    bool ancilla_only;
  };
  const int workers = std::max(1, options.threads);
  std::vector<std::map<std::string, Hit>> found(workers);
  auto run = [&](int worker) {
    std::uint64_t index = 0;
    auto& mine = found[worker];
    for_each_clifford(k, [&](const CliffordTableau& t) {
      const std::uint64_t idx = index++;
      if (static_cast<int>(idx % workers) != worker) return;
      const ComplexMatrix g = tableau_unitary(t);
      std::vector<std::vector<ComplexMatrix>> gpsi(2, std::vector<ComplexMatrix>(psi[0].size()));
      for (int in = 0; in < 2; ++in)
        for (std::size_t a = 0; a < psi[in].size(); ++a) gpsi[in][a] = g * psi[in][a];
      for (int o = 0; o < k; ++o)
        for (std::size_t a = 0; a < psi[0].size(); ++a)
          for (std::size_t b = 0; b < chi[o].size(); ++b) {
            ComplexMatrix act(2, 2);
            for (int out = 0; out < 2; ++out)
              for (int in = 0; in < 2; ++in) act(out, in) = (chi[o][b][out] * gpsi[in][a])(0, 0);
            GadgetAction analysis = analyze_action(act, 1);
            if (!analysis.is_unitary || analysis.is_clifford) continue;
            const std::string key = phase_key(*analysis.normalized);
            const bool ancilla_only = o == 0;
            const std::uint64_t order = ((idx * k + o) * psi[0].size() + a) * chi[o].size() + b;
            auto it = mine.find(key);
            if (it == mine.end()) {
              mine.emplace(key, Hit{order, t, o, a, b, act, std::move(analysis), ancilla_only});
            } else {
              it->second.ancilla_only = it->second.ancilla_only || ancilla_only;
            }
          }
    });
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& th : pool) th.join();
  }
  std::map<std::string, Hit> merged;
  for (auto& part : found)
    for (auto& [key, hit] : part) {
      auto it = merged.find(key);
      if (it == merged.end()) {
        merged.emplace(key, std::move(hit));
      } else {
        const bool either = it->second.ancilla_only || hit.ancilla_only;
        if (hit.order < it->second.order) it->second = std::move(hit);
        it->second.ancilla_only = either;
      }
    }
  std::vector<GadgetSearchResult> results;
  for (auto& [key, hit] : merged) {
    Gadget g;
    g.k = k;
    g.l = 1;
    g.u = u;
    for (int w = 1; w < k; ++w) g.ancilla_wires.push_back(w);
    g.ancilla_bits = index_to_bits(hit.a, m);
    g.gamma = hit.tableau;
    for (int w = 0; w < k; ++w)
      if (w != hit.o) g.postselect_wires.push_back(w);
    g.postselect_bits = index_to_bits(hit.b, m);
    results.push_back({std::move(g), std::move(hit.analysis), key, hit.ancilla_only});
  }
  return results;
}

CompileResult compile_word(const ComplexMatrix& target, const std::vector<ComplexMatrix>& generators,
                           int max_length, int beam_width) {
  if (generators.empty()) throw InputError("compile_word: empty generator list");
  if (max_length < 1) throw InputError("compile_word: max_length must be positive");
  if (max_length > kMaxWordLength)
    throw CapacityError("compile_word: max_length above " + std::to_string(kMaxWordLength));
  if (beam_width < 1) throw InputError("compile_word: beam width must be positive");
  for (const auto& g : generators)
    if (!g.is_square() || g.rows() != target.rows() || !is_unitary(g, kStructuralTol))
      throw InputError("compile_word: generators must be unitaries matching the target");

  struct Node {
    std::vector<int> word;
    ComplexMatrix m;
    double d;
    std::string key;
  };
  std::unordered_set<std::string> seen;
  std::vector<Node> beam{Node{{}, ComplexMatrix::identity(target.rows()), 0.0, ""}};
  CompileResult best;
  best.distance = std::numeric_limits<double>::infinity();
  for (int length = 1; length <= max_length; ++length) {
    std::vector<Node> next;
    for (const auto& node : beam)
      for (std::size_t gi = 0; gi < generators.size(); ++gi) {
        ComplexMatrix m = generators[gi] * node.m;
        std::string key = phase_key(m, 1e-8);
        if (!seen.insert(key).second) continue;
        const double d = phase_invariant_distance(target, m);
        std::vector<int> word = node.word;
        word.push_back(static_cast<int>(gi));
        next.push_back({std::move(word), std::move(m), d, std::move(key)});
      }
    std::sort(next.begin(), next.end(), [](const Node& a, const Node& b) {
      return a.d != b.d ? a.d < b.d : a.key < b.key;
    });
    if (static_cast<int>(next.size()) > beam_width) next.resize(beam_width);
    if (!next.empty() && next.front().d < best.distance) {
      best.distance = next.front().d;
      best.word = next.front().word;
      best.matrix = next.front().m;
    }
    best.best_by_length.push_back(best.distance);
    if (next.empty()) {
      for (int rest = length + 1; rest <= max_length; ++rest) best.best_by_length.push_back(best.distance);
      break;
    }
    beam = std::move(next);
  }
  return best;
}

namespace {

std::pair<std::string, std::string> split_kv(const std::string& tok, int line_no) {
  const auto eq = tok.find('=');
  if (eq == std::string::npos) throw ParseError("line " + std::to_string(line_no) + ": expected key=value");
  return {tok.substr(0, eq), tok.substr(eq + 1)};
}

int to_int(const std::string& s, int line_no) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw ParseError("line " + std::to_string(line_no) + ": bad integer '" + s + "'");
  return v;
}

}  // namespace

Gadget parse_gadget(std::string_view text, const ComplexMatrix& u) {
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  int k = -1, l = -1;
  std::vector<std::pair<int, int>> explicit_anc;  // wire, bit; wire -1 = default slot
  std::vector<int> post_wires;
  Bits post_bits;
  std::string circuit_text;
  bool in_circuit = false;
  while (std::getline(in, raw)) {
    ++line_no;
    if (in_circuit) {
      circuit_text += raw + "\n";
      continue;
    }
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok[0] == "gadget") {
      for (std::size_t i = 1; i < tok.size(); ++i) {
        const auto [key, val] = split_kv(tok[i], line_no);
        if (key == "k") k = to_int(val, line_no);
        else if (key == "l") l = to_int(val, line_no);
        else throw ParseError("line " + std::to_string(line_no) + ": unknown gadget field '" + key + "'");
      }
    } else if (tok[0] == "ancilla") {
      if (tok.size() < 2) throw ParseError("line " + std::to_string(line_no) + ": ancilla needs a bit");
      if (tok[1].find('=') != std::string::npos) {
        int wire = -1, bit = -1;
        for (std::size_t i = 1; i < tok.size(); ++i) {
          const auto [key, val] = split_kv(tok[i], line_no);
          if (key == "wire") wire = to_int(val, line_no);
          else if (key == "bit") bit = to_int(val, line_no);
          else throw ParseError("line " + std::to_string(line_no) + ": unknown ancilla field '" + key + "'");
        }
        if (wire < 0 || (bit != 0 && bit != 1))
          throw ParseError("line " + std::to_string(line_no) + ": ancilla needs wire= and bit=0|1");
        explicit_anc.emplace_back(wire, bit);
      } else {
        for (std::size_t i = 1; i < tok.size(); ++i) {
          const int bit = to_int(tok[i], line_no);
          if (bit != 0 && bit != 1) throw ParseError("line " + std::to_string(line_no) + ": ancilla bit must be 0 or 1");
          explicit_anc.emplace_back(-1, bit);
        }
      }
    } else if (tok[0] == "post") {
      int wire = -1, bit = -1;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        const auto [key, val] = split_kv(tok[i], line_no);
        if (key == "wire") wire = to_int(val, line_no);
        else if (key == "bit") bit = to_int(val, line_no);
        else throw ParseError("line " + std::to_string(line_no) + ": unknown post field '" + key + "'");
      }
      if (wire < 0 || (bit != 0 && bit != 1))
        throw ParseError("line " + std::to_string(line_no) + ": post needs wire= and bit=0|1");
      post_wires.push_back(wire);
      post_bits.push_back(static_cast<std::uint8_t>(bit));
    } else if (tok[0] == "qubits") {
      in_circuit = true;
      circuit_text = raw + "\n";
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": unexpected '" + tok[0] + "' in gadget header");
    }
  }
  if (k < 0 || l < 0) throw ParseError("gadget file needs a 'gadget k=K l=L' header");
  if (!in_circuit) throw ParseError("gadget file has no circuit");
  const CliffordCircuit gamma = CliffordCircuit::parse(circuit_text);
  std::vector<int> anc_wires;
  Bits anc_bits;
  int next_default = l;
  for (const auto& [wire, bit] : explicit_anc) {
    anc_wires.push_back(wire >= 0 ? wire : next_default++);
    anc_bits.push_back(static_cast<std::uint8_t>(bit));
  }
  if (explicit_anc.empty())
    for (int w = l; w < k; ++w) {
      anc_wires.push_back(w);
      anc_bits.push_back(0);
    }
  try {
    return make_gadget(k, l, u, anc_wires, anc_bits, gamma, post_wires, post_bits);
  } catch (const InputError& e) {
    throw ParseError(e.what());
  }
}

Gadget parse_gadget_file(const std::string& path, const ComplexMatrix& u) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open gadget file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_gadget(ss.str(), u);
}

}  // namespace ccc
