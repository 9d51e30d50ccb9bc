#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ccc/ccc.hpp"

namespace ccc {

/// Exact fraction num/den, den > 0, reduced.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den = 1);
  /// "0.2", "1/5", "3", "-0.125"; decimals convert exactly.
  static Rational parse(std::string_view text);
  /// Shortest decimal that round-trips the double, read exactly.
  static Rational from_double(double x);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string to_string() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend bool operator<(const Rational& a, const Rational& b);
};

struct SupremacyParams {
  Rational a, c, epsilon;
  /// (1 - a)^2 / 2 - c
  Rational fraction;
  /// 2 epsilon / (a c)
  Rational mult_error;
  bool valid = false;
};

/// Inputs must lie in (0, 1).
SupremacyParams supremacy_parameters(const Rational& a, const Rational& c, const Rational& epsilon);
SupremacyParams supremacy_parameters(double a, double c, double epsilon);

/// (1 - a)^2 mean^2 / second_moment, a in [0, 1].
double paley_zygmund_bound(double a, double mean, double second_moment);

double clifford_mean(int n);
double clifford_second_moment(int n);

struct AnticoncentrationReport {
  int n = 0;
  std::string u_description;
  Bits y;
  int num_samples = 0;
  std::uint64_t seed = 0;
  double a = 0.2;
  double mean_p = 0.0;
  double se_mean = 0.0;
  double mean_p_squared = 0.0;
  double se_second = 0.0;
  double tail_fraction = 0.0;
  double tail_sigma = 0.0;
  double theory_mean = 0.0;
  double theory_second_moment = 0.0;
  /// (1 - a)^2 / 2
  double pz_bound = 0.0;
  /// Paley-Zygmund with the exact 2-design moments at this n.
  double pz_bound_exact_moments = 0.0;
  std::vector<double> samples;
};

struct AnticoncentrationOptions {
  int threads = 1;
};

/// p_{y,U,V} for num_samples uniform Cliffords V, each drawn from its own
/// stream derived from (seed, sample index).
AnticoncentrationReport anticoncentration_trial(int n, const UnitarySpec& u, const Bits& y, int num_samples,
                                                double a, std::uint64_t seed,
                                                const AnticoncentrationOptions& options = {});

/// Generator for sample `index` of a run seeded with `seed`.
Rng stream_rng(std::uint64_t seed, std::uint64_t index);

struct MarkovAudit {
  double tv = 0.0;
  double threshold = 0.0;
  double fraction = 0.0;
  double guaranteed = 0.0;
  bool holds = false;
};

/// Fraction of y with |q_y - p_y| <= 2 tv / (c 2^n); Markov forces > 1 - c.
MarkovAudit markov_set_audit(const OutcomeDistribution& exact, const OutcomeDistribution& approx, double c);

}  // namespace ccc
