#include "ccc/experiments.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <thread>

namespace ccc {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw CapacityError("rational arithmetic overflow");
  return static_cast<std::int64_t>(v);
}

Rational reduce(i128 num, i128 den) {
  if (den == 0) throw DomainError("rational division by zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num, b = den;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  return {narrow(num), narrow(den)};
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double pairwise_sum(const double* x, std::size_t count) {
  if (count <= 8) {
    double s = 0;
    for (std::size_t i = 0; i < count; ++i) s += x[i];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, count - half);
}

}  // namespace

Rational Rational::make(std::int64_t num, std::int64_t den) { return reduce(num, den); }

Rational Rational::parse(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ParseError("empty number");
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const Rational n = parse(s.substr(0, slash)), d = parse(s.substr(slash + 1));
    return n / d;
  }
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  i128 num = 0, den = 1;
  bool digits = false, dot = false;
  int exponent = 0;
  for (; pos < s.size(); ++pos) {
    const char ch = s[pos];
    if (ch >= '0' && ch <= '9') {
      num = num * 10 + (ch - '0');
      if (dot) den *= 10;
      digits = true;
      if (num > (i128{1} << 100)) throw CapacityError("number has too many digits: " + s);
    } else if (ch == '.' && !dot) {
      dot = true;
    } else if ((ch == 'e' || ch == 'E') && digits) {
      int e = 0;
      auto [ptr, ec] = std::from_chars(s.data() + pos + 1 + (s[pos + 1] == '+'), s.data() + s.size(), e);
      if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("bad number '" + s + "'");
      exponent = e;
      pos = s.size();
      break;
    } else {
      throw ParseError("bad number '" + s + "'");
    }
  }
  if (!digits) throw ParseError("bad number '" + s + "'");
  if (std::abs(exponent) > 30) throw CapacityError("exponent out of range: " + s);
  for (; exponent > 0; --exponent) num *= 10;
  for (; exponent < 0; ++exponent) den *= 10;
  return reduce(negative ? -num : num, den);
}

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) throw InputError("non-finite number");
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return parse(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

std::string Rational::to_string() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Rational operator+(const Rational& a, const Rational& b) {
  return reduce(i128{a.num} * b.den + i128{b.num} * a.den, i128{a.den} * b.den);
}
Rational operator-(const Rational& a, const Rational& b) {
  return reduce(i128{a.num} * b.den - i128{b.num} * a.den, i128{a.den} * b.den);
}
Rational operator*(const Rational& a, const Rational& b) {
  return reduce(i128{a.num} * b.num, i128{a.den} * b.den);
}
Rational operator/(const Rational& a, const Rational& b) {
  return reduce(i128{a.num} * b.den, i128{a.den} * b.num);
}
bool operator<(const Rational& a, const Rational& b) { return i128{a.num} * b.den < i128{b.num} * a.den; }

SupremacyParams supremacy_parameters(const Rational& a, const Rational& c, const Rational& epsilon) {
  const Rational zero{0, 1}, one{1, 1}, two{2, 1};
  for (const Rational* v : {&a, &c, &epsilon})
    if (!(zero < *v) || !(*v < one)) throw InputError("supremacy_parameters: a, c and epsilon must lie in (0, 1)");
  SupremacyParams p{a, c, epsilon, {}, {}, false};
  p.fraction = (one - a) * (one - a) / two - c;
  p.mult_error = two * epsilon / (a * c);
  p.valid = zero < p.fraction && p.mult_error < one;
  return p;
}

SupremacyParams supremacy_parameters(double a, double c, double epsilon) {
  return supremacy_parameters(Rational::from_double(a), Rational::from_double(c), Rational::from_double(epsilon));
}

double paley_zygmund_bound(double a, double mean, double second_moment) {
  if (!(a >= 0.0 && a <= 1.0)) throw InputError("paley_zygmund_bound: a must lie in [0, 1]");
  if (!(second_moment > 0.0)) throw DomainError("paley_zygmund_bound: second moment must be positive");
  return (1 - a) * (1 - a) * mean * mean / second_moment;
}

double clifford_mean(int n) { return std::ldexp(1.0, -n); }

double clifford_second_moment(int n) {
  const double d = std::ldexp(1.0, n);
  return 2 * (1 - 1 / d) / (d * d - 1);
}

Rng stream_rng(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(seed) ^ (index * 0xD1B54A32D192ED03ULL)));
}

AnticoncentrationReport anticoncentration_trial(int n, const UnitarySpec& u, const Bits& y, int num_samples,
                                                double a, std::uint64_t seed,
                                                const AnticoncentrationOptions& options) {
  if (n < 1) throw InputError("anticoncentration_trial: n must be positive");
  require_dense(n, "anticoncentration_trial");
  if (num_samples < 100) throw InputError("anticoncentration_trial: need at least 100 samples");
  if (static_cast<int>(y.size()) != n) throw DimensionError("anticoncentration_trial: y has the wrong length");
  if (!(a > 0.0 && a < 1.0)) throw InputError("anticoncentration_trial: a must lie in (0, 1)");

  // psi = U^{(x)n}|0^n>, phi = U^{(x)n}|y>; p = |<phi| V |psi>|^2.
  Statevector psi(n), phi = Statevector::basis(n, bits_to_index(y));
  for (int q = 0; q < n; ++q) {
    psi.apply(u.matrix, {q});
    phi.apply(u.matrix, {q});
  }
  std::vector<double> p(num_samples);
  const int workers = std::max(1, options.threads);
  auto run = [&](int worker) {
    for (int i = worker; i < num_samples; i += workers) {
      Rng rng = stream_rng(seed, static_cast<std::uint64_t>(i));
      const CliffordTableau v = random_clifford(n, rng);
      const auto out = tableau_apply_dense(v, psi.amplitudes());
      Complex overlap = 0.0;
      const auto ph = phi.amplitudes();
      for (std::size_t k = 0; k < out.size(); ++k) overlap += std::conj(ph[k]) * out[k];
      p[i] = std::norm(overlap);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }

  AnticoncentrationReport r;
  r.n = n;
  r.u_description = u.text;
  r.y = y;
  r.num_samples = num_samples;
  r.seed = seed;
  r.a = a;
  const double count = num_samples;
  const double threshold = a * clifford_mean(n);
  std::vector<double> sq(p.size()), quad(p.size());
  int tail = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sq[i] = p[i] * p[i];
    quad[i] = sq[i] * sq[i];
    if (p[i] >= threshold) ++tail;
  }
  const double s1 = pairwise_sum(p.data(), p.size());
  const double s2 = pairwise_sum(sq.data(), sq.size());
  const double s4 = pairwise_sum(quad.data(), quad.size());
  r.mean_p = s1 / count;
  r.mean_p_squared = s2 / count;
  r.se_mean = std::sqrt(std::max(0.0, (s2 / count - r.mean_p * r.mean_p) / (count - 1)));
  r.se_second = std::sqrt(std::max(0.0, (s4 / count - r.mean_p_squared * r.mean_p_squared) / (count - 1)));
  r.tail_fraction = tail / count;
  r.tail_sigma = std::sqrt(r.tail_fraction * (1 - r.tail_fraction) / count);
  r.theory_mean = clifford_mean(n);
  r.theory_second_moment = clifford_second_moment(n);
  r.pz_bound = (1 - a) * (1 - a) / 2;
  r.pz_bound_exact_moments = paley_zygmund_bound(a, r.theory_mean, r.theory_second_moment);
  r.samples = std::move(p);
  return r;
}

MarkovAudit markov_set_audit(const OutcomeDistribution& exact, const OutcomeDistribution& approx, double c) {
  if (!(c > 0.0 && c < 1.0)) throw InputError("markov_set_audit: c must lie in (0, 1)");
  if (exact.n != approx.n || exact.p.size() != approx.p.size())
    throw DimensionError("markov_set_audit: distributions over different qubit counts");
  MarkovAudit m;
  m.tv = tv_distance(exact, approx);
  m.threshold = 2 * m.tv / (c * static_cast<double>(exact.p.size()));
  std::size_t inside = 0;
  for (std::size_t y = 0; y < exact.p.size(); ++y)
    if (std::abs(approx.p[y] - exact.p[y]) <= m.threshold + 1e-12) ++inside;
  m.fraction = static_cast<double>(inside) / static_cast<double>(exact.p.size());
  m.guaranteed = 1 - c;
  m.holds = m.fraction >= m.guaranteed;
  return m;
}

}  // namespace ccc
