#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ccc/ccc.hpp"
#include "ccc/experiments.hpp"
#include "ccc/gadgets.hpp"
#include "ccc/mbqc.hpp"

using namespace ccc;
using json = nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(complex_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

json angle_json(const ExactAngle& a) { return {{"exact", a.to_string()}, {"radians", a.radians()}}; }

json tableau_json(const CliffordTableau& t) {
  json d = json::array(), s = json::array();
  for (int i = 0; i < t.num_qubits(); ++i) {
    d.push_back(t.destabilizer(i).to_string());
    s.push_back(t.stabilizer(i).to_string());
  }
  return {{"destabilizers", d}, {"stabilizers", s}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Shared run configuration; every field ends up in the "config" block.
struct Config {
  std::string u = "H";
  std::string circuit_path;
  std::string circuit_text;
  std::uint64_t seed = 1;
  int shots = 1000;
  int n = 3;
  int threads = 1;
  int dense_cap = 0;
  std::string format = "json";
};

CliffordCircuit load_circuit(const Config& c) {
  if (!c.circuit_path.empty() && !c.circuit_text.empty())
    throw InputError("give either --circuit or --circuit-text, not both");
  if (!c.circuit_path.empty()) return CliffordCircuit::parse_file(c.circuit_path);
  if (!c.circuit_text.empty()) {
    std::string text = c.circuit_text;
    for (char& ch : text)
      if (ch == ';') ch = '\n';
    return CliffordCircuit::parse(text);
  }
  throw InputError("a circuit is required (--circuit FILE or --circuit-text 'qubits N; H 0; ...')");
}

json envelope(const std::string& command, const json& config, std::optional<std::uint64_t> seed) {
  json out;
  out["command"] = command;
  out["config"] = config;
  out["seed"] = seed ? json(*seed) : json(nullptr);
  out["version"] = kVersion;
  out["dense_cap"] = dense_qubit_cap();
  return out;
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

json verdict_json(const ClassificationVerdict& v, const UnitaryDecomposition& d) {
  json out;
  out["case"] = std::string(to_string(v.case_tag));
  out["class"] = std::string(to_string(v.complexity_class));
  out["decomposition"] = {{"alpha", angle_json(d.alpha)},
                          {"phi", angle_json(d.phi)},
                          {"theta", angle_json(d.theta)},
                          {"lambda", angle_json(d.lambda)}};
  if (v.canonical_form)
    out["canonical_form"] = {{"gamma", v.canonical_form->gamma_text()}, {"lambda", angle_json(v.canonical_form->lambda)}};
  else
    out["canonical_form"] = nullptr;
  return out;
}

json gadget_action_json(const GadgetAction& a) {
  json out;
  out["matrix"] = matrix_json(a.matrix);
  out["gamma"] = a.gamma ? json(*a.gamma) : json(nullptr);
  out["is_unitary"] = a.is_unitary;
  out["is_clifford"] = a.is_clifford;
  out["normalized"] = a.normalized ? matrix_json(*a.normalized) : json(nullptr);
  return out;
}

json rotation_json(const BlochRotation& r) {
  return {{"angle", r.angle},
          {"cos_angle", r.cos_angle},
          {"cos_half", r.cos_half},
          {"raw_half_trace", complex_json(r.raw_half_trace)},
          {"axis", r.axis_defined ? json(r.axis) : json(nullptr)}};
}

ExactAngle parse_angle(const std::string& text) { return ExactAngle::parse(text); }

// "I:PHI:THETA" / "J:PHI:THETA" name a gadget's normalized action; anything
// else is a unitary spec.
ComplexMatrix generator_from(const std::string& text) {
  if (text.size() > 2 && (text[0] == 'I' || text[0] == 'J') && text[1] == ':') {
    const auto colon = text.find(':', 2);
    if (colon == std::string::npos) throw ParseError("gadget generator needs I:PHI:THETA or J:PHI:THETA");
    const ExactAngle phi = parse_angle(text.substr(2, colon - 2)), theta = parse_angle(text.substr(colon + 1));
    const Gadget g = text[0] == 'I' ? build_gadget_I(phi, theta) : build_gadget_J(phi, theta);
    const auto a = gadget_action(g);
    if (!a.normalized) throw DomainError("gadget " + text + " has a singular action");
    return *a.normalized;
  }
  return parse_unitary_spec(text).matrix;
}

std::string bits_csv(const std::vector<Bits>& samples) {
  std::string out;
  for (const auto& b : samples) out += bits_to_string(b) + "\n";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conjugated Clifford circuit toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Config cfg;
  app.add_option("--dense-cap", cfg.dense_cap, "Override the dense qubit cap (also CCC_DENSE_CAP)");

  auto add_u = [&](CLI::App* sub) { sub->add_option("--u", cfg.u, "Unitary: gate name, 'rz=.. rx=.. rz2=.. phase=..', or 8 reals"); };
  auto add_circuit = [&](CLI::App* sub) {
    sub->add_option("--circuit", cfg.circuit_path, "Clifford circuit file");
    sub->add_option("--circuit-text", cfg.circuit_text, "Inline circuit, ';' separates lines");
  };
  auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", cfg.seed, "RNG seed"); };

  auto* classify_cmd = app.add_subcommand("classify", "Complexity class of the U-CCC family");
  add_u(classify_cmd);

  auto* simulate_cmd = app.add_subcommand("simulate", "Exact output probabilities");
  add_u(simulate_cmd);
  add_circuit(simulate_cmd);
  std::string y_text;
  simulate_cmd->add_option("--y", y_text, "Single outcome bitstring");

  auto* sample_cmd = app.add_subcommand("sample", "Draw output samples");
  add_u(sample_cmd);
  add_circuit(sample_cmd);
  add_seed(sample_cmd);
  sample_cmd->add_option("--shots", cfg.shots, "Number of samples")->check(CLI::PositiveNumber);
  sample_cmd->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* marginal_cmd = app.add_subcommand("marginal", "Single-qubit marginals Pr[y_j = 0]");
  add_u(marginal_cmd);
  add_circuit(marginal_cmd);
  int qubit = -1;
  marginal_cmd->add_option("--qubit", qubit, "Qubit index (default: all)");

  auto* gadget_cmd = app.add_subcommand("gadget", "Postselection gadgets");
  gadget_cmd->require_subcommand(1);
  auto* analyze_cmd = gadget_cmd->add_subcommand("analyze", "Action of one gadget");
  std::string builtin, gadget_file, phi_text = "0", theta_text = "0";
  analyze_cmd->add_option("--builtin", builtin, "I or J")->check(CLI::IsMember({"I", "J"}));
  analyze_cmd->add_option("--file", gadget_file, "Gadget description file (uses --u)");
  analyze_cmd->add_option("--phi", phi_text, "phi for built-in gadgets");
  analyze_cmd->add_option("--theta", theta_text, "theta for built-in gadgets");
  add_u(analyze_cmd);
  auto* search_cmd = gadget_cmd->add_subcommand("search", "Enumerate unitary non-Clifford gadgets");
  add_u(search_cmd);
  int k = 2;
  search_cmd->add_option("--k", k, "Wires per gadget");
  search_cmd->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* anticonc_cmd = app.add_subcommand("anticonc", "Anticoncentration Monte Carlo");
  std::string anticonc_u = "I", csv_path;
  double a_value = 0.2;
  anticonc_cmd->add_option("--u", anticonc_u, "Unitary spec");
  anticonc_cmd->add_option("--n", cfg.n, "Qubits")->check(CLI::PositiveNumber);
  anticonc_cmd->add_option("--samples", cfg.shots, "Clifford draws (>= 100)");
  anticonc_cmd->add_option("--a", a_value, "Tail parameter a");
  anticonc_cmd->add_option("--y", y_text, "Outcome (default 0^n)");
  anticonc_cmd->add_option("--csv", csv_path, "Write raw p values here, one per line");
  anticonc_cmd->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  add_seed(anticonc_cmd);

  auto* params_cmd = app.add_subcommand("params", "Supremacy parameter arithmetic");
  std::string pa = "1/5", pc = "1/5", peps = "1/100";
  params_cmd->add_option("--a", pa, "a in (0,1), decimal or p/q");
  params_cmd->add_option("--c", pc, "c in (0,1)");
  params_cmd->add_option("--eps", peps, "epsilon in (0,1)");

  auto* audit_cmd = app.add_subcommand("audit", "Markov-set audit of a simulator against the dense distribution");
  add_u(audit_cmd);
  add_circuit(audit_cmd);
  add_seed(audit_cmd);
  double audit_c = 0.2;
  int audit_shots = 0;
  audit_cmd->add_option("--c", audit_c, "c in (0,1)");
  audit_cmd->add_option("--shots", audit_shots, "Audit the sampler's empirical distribution (0: exact reduction)");

  auto* mbqc_cmd = app.add_subcommand("mbqc", "Measurement-based gadget checks");
  mbqc_cmd->require_subcommand(1);
  auto* mbqc_check_cmd = mbqc_cmd->add_subcommand("check", "Universality verdict and contraction residuals");
  std::string mbqc_theta = "pi*1/6";
  mbqc_check_cmd->add_option("--theta", mbqc_theta, "Rational multiple of pi");

  auto* compile_cmd = app.add_subcommand("compile", "Beam search for a short generator word");
  std::string target = "T";
  std::vector<std::string> gens{"H", "S"};
  int max_length = 8, beam = 5000;
  compile_cmd->add_option("--target", target, "Target unitary spec");
  compile_cmd->add_option("--gen", gens, "Generator: unitary spec or I:PHI:THETA / J:PHI:THETA (repeatable)");
  compile_cmd->add_option("--max-length", max_length, "Word length budget");
  compile_cmd->add_option("--beam", beam, "Beam width");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cfg.dense_cap) set_dense_qubit_cap(cfg.dense_cap);

    if (*classify_cmd) {
      const auto spec = parse_unitary_spec(cfg.u);
      json out = envelope("classify", {{"u", cfg.u}}, std::nullopt);
      out.update(verdict_json(classify(spec.decomposition), spec.decomposition));
      emit(out);
    } else if (*simulate_cmd) {
      const CccInstance inst(parse_unitary_spec(cfg.u), load_circuit(cfg));
      const auto verdict = classify(inst.decomposition());
      const bool easy = verdict.complexity_class == ComplexityClass::PWeak;
      json out = envelope("simulate", {{"u", cfg.u}, {"circuit", cfg.circuit_path}, {"y", y_text}}, std::nullopt);
      out["class"] = std::string(to_string(verdict.complexity_class));
      out["n"] = inst.num_qubits();
      if (!y_text.empty()) {
        const Bits y = bits_from_string(y_text);
        if (static_cast<int>(y.size()) != inst.num_qubits()) throw DimensionError("--y has the wrong length");
        if (easy) {
          const auto r = reduce_easy(inst);
          Bits z = y;
          if (r.negate_output)
            for (auto& b : z) b ^= 1;
          out["method"] = r.method;
          out["probability"] = stabilizer_probability(r.tableau, z);
        } else {
          out["method"] = "dense";
          out["probability"] = outcome_probability(inst, y);
        }
      } else {
        require_dense(inst.num_qubits(), "simulate (full distribution)");
        const auto d = easy ? exact_reduction_distribution(inst) : dense_distribution(inst);
        out["method"] = easy ? reduce_easy(inst).method : "dense";
        json probs = json::object();
        for (std::size_t i = 0; i < d.p.size(); ++i) probs[bits_to_string(index_to_bits(i, d.n))] = d.p[i];
        out["probabilities"] = probs;
      }
      emit(out);
    } else if (*sample_cmd) {
      const CccInstance inst(parse_unitary_spec(cfg.u), load_circuit(cfg));
      const auto verdict = classify(inst.decomposition());
      Rng rng(cfg.seed);
      std::vector<Bits> samples;
      std::string method;
      if (verdict.complexity_class == ComplexityClass::PWeak) {
        method = reduce_easy(inst).method;
        samples = simulate_easy_weak(inst, cfg.shots, rng);
      } else {
        if (inst.num_qubits() > dense_qubit_cap())
          throw CapacityError("sample: U is PH_SUPREME and " + std::to_string(inst.num_qubits()) +
                              " qubits exceeds the dense cap of " + std::to_string(dense_qubit_cap()) +
                              "; refusing rather than truncating");
        method = "dense";
        samples = sample_distribution(dense_distribution(inst), cfg.shots, rng);
      }
      if (cfg.format == "csv") {
        std::cout << bits_csv(samples);
      } else {
        json out = envelope("sample", {{"u", cfg.u}, {"circuit", cfg.circuit_path}, {"shots", cfg.shots}}, cfg.seed);
        out["class"] = std::string(to_string(verdict.complexity_class));
        out["method"] = method;
        out["n"] = inst.num_qubits();
        json list = json::array();
        for (const auto& b : samples) list.push_back(bits_to_string(b));
        out["samples"] = list;
        emit(out);
      }
    } else if (*marginal_cmd) {
      const CccInstance inst(parse_unitary_spec(cfg.u), load_circuit(cfg));
      json out = envelope("marginal", {{"u", cfg.u}, {"circuit", cfg.circuit_path}, {"qubit", qubit}}, std::nullopt);
      json m = json::array();
      if (qubit >= 0) {
        if (qubit >= inst.num_qubits()) throw InputError("--qubit out of range");
        m.push_back({{"qubit", qubit}, {"p0", marginal_single_qubit(inst, qubit)}});
      } else {
        for (int j = 0; j < inst.num_qubits(); ++j) m.push_back({{"qubit", j}, {"p0", marginal_single_qubit(inst, j)}});
      }
      out["marginals"] = m;
      emit(out);
    } else if (*analyze_cmd) {
      GadgetAction a;
      json config;
      if (!gadget_file.empty()) {
        const auto spec = parse_unitary_spec(cfg.u);
        a = gadget_action(parse_gadget(read_file(gadget_file), spec.matrix));
        config = {{"file", gadget_file}, {"u", cfg.u}};
      } else if (!builtin.empty()) {
        const ExactAngle phi = parse_angle(phi_text), theta = parse_angle(theta_text);
        a = gadget_action(builtin == "I" ? build_gadget_I(phi, theta) : build_gadget_J(phi, theta));
        config = {{"builtin", builtin}, {"phi", phi.to_string()}, {"theta", theta.to_string()}};
      } else {
        throw InputError("gadget analyze needs --builtin or --file");
      }
      json out = envelope("gadget analyze", config, std::nullopt);
      out.update(gadget_action_json(a));
      emit(out);
    } else if (*search_cmd) {
      const auto spec = parse_unitary_spec(cfg.u);
      const auto results = search_gadgets(spec.matrix, {k, cfg.threads});
      json out = envelope("gadget search", {{"u", cfg.u}, {"k", k}}, std::nullopt);
      out["class"] = std::string(to_string(classify(spec.decomposition).complexity_class));
      json list = json::array();
      for (const auto& r : results) {
        json g;
        g["ancilla_wires"] = r.gadget.ancilla_wires;
        g["ancilla_bits"] = bits_to_string(r.gadget.ancilla_bits);
        g["postselect_wires"] = r.gadget.postselect_wires;
        g["postselect_bits"] = bits_to_string(r.gadget.postselect_bits);
        g["gamma"] = tableau_json(r.gadget.gamma);
        g["action"] = gadget_action_json(r.action);
        g["ancilla_only_available"] = r.ancilla_only_available;
        list.push_back(g);
      }
      out["count"] = results.size();
      out["results"] = list;
      emit(out);
    } else if (*anticonc_cmd) {
      const auto spec = parse_unitary_spec(anticonc_u);
      const Bits y = y_text.empty() ? Bits(cfg.n, 0) : bits_from_string(y_text);
      const auto r = anticoncentration_trial(cfg.n, spec, y, cfg.shots, a_value, cfg.seed, {cfg.threads});
      json out = envelope("anticonc", {{"u", anticonc_u}, {"n", cfg.n}, {"samples", cfg.shots}, {"a", a_value},
                                       {"y", bits_to_string(y)}},
                          cfg.seed);
      out["num_samples"] = r.num_samples;
      out["mean_p"] = r.mean_p;
      out["se_mean"] = r.se_mean;
      out["mean_p_squared"] = r.mean_p_squared;
      out["se_second"] = r.se_second;
      out["tail_fraction"] = r.tail_fraction;
      out["tail_sigma"] = r.tail_sigma;
      out["theory_mean"] = r.theory_mean;
      out["theory_second_moment"] = r.theory_second_moment;
      out["pz_bound"] = r.pz_bound;
      out["pz_bound_exact_moments"] = r.pz_bound_exact_moments;
      if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw InputError("cannot write " + csv_path);
        char buf[32];
        for (double p : r.samples) {
          std::snprintf(buf, sizeof buf, "%.17g\n", p);
          csv << buf;
        }
        out["csv"] = csv_path;
      }
      emit(out);
    } else if (*params_cmd) {
      const auto p = supremacy_parameters(Rational::parse(pa), Rational::parse(pc), Rational::parse(peps));
      json out = envelope("params", {{"a", pa}, {"c", pc}, {"eps", peps}}, std::nullopt);
      out["fraction"] = p.fraction.value();
      out["fraction_exact"] = p.fraction.to_string();
      out["mult_error"] = p.mult_error.value();
      out["mult_error_exact"] = p.mult_error.to_string();
      out["valid"] = p.valid;
      emit(out);
    } else if (*audit_cmd) {
      const CccInstance inst(parse_unitary_spec(cfg.u), load_circuit(cfg));
      const auto exact = dense_distribution(inst);
      OutcomeDistribution approx;
      std::string source;
      Rng rng(cfg.seed);
      const bool easy = classify(inst.decomposition()).complexity_class == ComplexityClass::PWeak;
      if (audit_shots > 0) {
        const auto samples = easy ? simulate_easy_weak(inst, audit_shots, rng) : sample_distribution(exact, audit_shots, rng);
        approx = empirical_distribution(inst.num_qubits(), samples);
        source = easy ? "empirical easy-case sampler" : "empirical dense sampler";
      } else {
        approx = exact_reduction_distribution(inst);
        source = "exact reduction";
      }
      const auto m = markov_set_audit(exact, approx, audit_c);
      json out = envelope("audit", {{"u", cfg.u}, {"circuit", cfg.circuit_path}, {"c", audit_c}, {"shots", audit_shots}},
                          audit_shots > 0 ? std::optional<std::uint64_t>(cfg.seed) : std::nullopt);
      out["approx_source"] = source;
      out["tv"] = m.tv;
      out["threshold"] = m.threshold;
      out["fraction"] = m.fraction;
      out["guaranteed"] = m.guaranteed;
      out["holds"] = m.holds;
      emit(out);
    } else if (*mbqc_check_cmd) {
      const ExactAngle theta = parse_angle(mbqc_theta);
      const auto r = mbqc_check(theta);
      json out = envelope("mbqc check", {{"theta", theta.to_string()}}, std::nullopt);
      out["universal"] = r.verdict.universal;
      out["reason"] = r.verdict.reason;
      out["cos_phi0"] = r.verdict.cos_phi0;
      out["cos_phi1"] = r.verdict.cos_phi1;
      out["g0_irrational"] = r.verdict.g0_irrational;
      out["g1_irrational"] = r.verdict.g1_irrational;
      out["g0_rotation"] = rotation_json(r.g0);
      out["g1_rotation"] = rotation_json(r.g1);
      out["residuals"] = {{"g0", r.g0_residual}, {"g1", r.g1_residual}, {"cz", r.cz_residual},
                          {"teleport", r.teleport_residual}};
      emit(out);
    } else if (*compile_cmd) {
      std::vector<ComplexMatrix> mats;
      for (const auto& g : gens) mats.push_back(generator_from(g));
      const auto r = compile_word(parse_unitary_spec(target).matrix, mats, max_length, beam);
      json out = envelope("compile", {{"target", target}, {"gens", gens}, {"max_length", max_length}, {"beam", beam}},
                          std::nullopt);
      json word = json::array();
      for (int g : r.word) word.push_back(gens[g]);
      out["word"] = word;
      out["distance"] = r.distance;
      out["best_by_length"] = r.best_by_length;
      emit(out);
    }
  } catch (const CapacityError& e) {
    std::cerr << "capacity: " << e.what() << '\n';
    return 3;
  } catch (const InputError& e) {
    std::cerr << "input: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "domain: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
