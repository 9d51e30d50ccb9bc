#include "ccc/angle.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

#include "ccc/errors.hpp"

namespace ccc {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t d = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --d;
  return d;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out;
  for (std::size_t i = b; i < e; ++i)
    if (!std::isspace(static_cast<unsigned char>(s[i]))) out.push_back(s[i]);
  return out;
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
  std::int64_t v = 0;
  const char* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || first == s.data() + s.size())
    throw ParseError("bad angle '" + std::string(whole) + "'");
  return v;
}

}  // namespace

std::optional<std::pair<std::int64_t, std::int64_t>> rational_pi_reconstruct(double radians, double tol,
                                                                             int max_den) {
  if (!std::isfinite(radians)) return std::nullopt;
  const double r = radians / std::numbers::pi;
  for (std::int64_t q = 1; q <= max_den; ++q) {
    const double pr = std::round(r * static_cast<double>(q));
    if (std::abs(pr) > 9e15) return std::nullopt;
    const auto p = static_cast<std::int64_t>(pr);
    if (std::abs(radians - static_cast<double>(p) * std::numbers::pi / static_cast<double>(q)) <= tol) {
      const std::int64_t g = std::gcd(p, q);
      return std::make_pair(p / g, q / g);
    }
  }
  return std::nullopt;
}

ExactAngle ExactAngle::rational_pi(std::int64_t p, std::int64_t q) {
  if (q == 0) throw InputError("ExactAngle: zero denominator");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  const std::int64_t g = std::gcd(p, q);
  ExactAngle a;
  a.kind_ = Kind::RationalPi;
  a.p_ = p / g;
  a.q_ = q / g;
  return a;
}

ExactAngle ExactAngle::real(double radians) {
  if (!std::isfinite(radians)) throw InputError("ExactAngle: non-finite angle");
  ExactAngle a;
  a.kind_ = Kind::Real;
  a.x_ = radians;
  return a;
}

ExactAngle ExactAngle::from_radians(double radians, double tol, int max_den) {
  if (auto r = rational_pi_reconstruct(radians, tol, max_den)) return rational_pi(r->first, r->second);
  return real(radians);
}

ExactAngle ExactAngle::parse(std::string_view text) {
  const std::string s = trim(text);
  if (s.empty()) throw ParseError("empty angle");
  const auto pi_pos = s.find("pi");
  if (pi_pos == std::string::npos) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("bad angle '" + s + "'");
    return from_radians(v);
  }
  // [sign][p*]pi[*p][/q]
  std::string_view pre = std::string_view(s).substr(0, pi_pos);
  std::string_view post = std::string_view(s).substr(pi_pos + 2);
  std::int64_t num = 1;
  if (pre == "-") num = -1;
  else if (pre == "+" || pre.empty()) num = 1;
  else {
    if (pre.back() != '*') throw ParseError("bad angle '" + s + "'");
    num = parse_int(pre.substr(0, pre.size() - 1), s);
  }
  std::int64_t den = 1;
  if (!post.empty() && post.front() == '*') {
    const auto slash = post.find('/');
    num *= parse_int(post.substr(1, slash == std::string_view::npos ? std::string_view::npos : slash - 1), s);
    post = slash == std::string_view::npos ? std::string_view{} : post.substr(slash);
  }
  if (!post.empty()) {
    if (post.front() != '/') throw ParseError("bad angle '" + s + "'");
    den = parse_int(post.substr(1), s);
    if (den == 0) throw ParseError("zero denominator in angle '" + s + "'");
  }
  return rational_pi(num, den);
}

double ExactAngle::radians() const {
  if (kind_ == Kind::Real) return x_;
  return static_cast<double>(p_) * std::numbers::pi / static_cast<double>(q_);
}

std::optional<std::pair<std::int64_t, std::int64_t>> ExactAngle::as_rational() const {
  if (kind_ == Kind::RationalPi) return std::make_pair(p_, q_);
  return rational_pi_reconstruct(x_);
}

bool ExactAngle::in_multiple_of_pi_over(std::int64_t m) const {
  const auto r = as_rational();
  if (!r) return false;
  // (p/q)·pi ∈ (pi/m)Z  <=>  p·m/q ∈ Z
  return (r->first * m) % r->second == 0;
}

bool ExactAngle::in_2pi_z() const {
  const auto r = as_rational();
  return r && r->second == 1 && r->first % 2 == 0;
}

ExactAngle ExactAngle::normalized() const {
  if (kind_ == Kind::RationalPi) {
    const std::int64_t period = 2 * q_;
    return rational_pi(p_ - floor_div(p_, period) * period, q_);
  }
  double v = std::fmod(x_, 2 * std::numbers::pi);
  if (v < 0) v += 2 * std::numbers::pi;
  if (v >= 2 * std::numbers::pi) v = 0.0;
  return real(v);
}

ExactAngle ExactAngle::operator-() const {
  if (kind_ == Kind::RationalPi) return rational_pi(-p_, q_);
  return real(-x_);
}

ExactAngle operator+(const ExactAngle& a, const ExactAngle& b) {
  if (a.is_rational() && b.is_rational())
    return ExactAngle::rational_pi(a.p_ * b.q_ + b.p_ * a.q_, a.q_ * b.q_);
  return ExactAngle::real(a.radians() + b.radians());
}

ExactAngle ExactAngle::scaled(std::int64_t num, std::int64_t den) const {
  if (den == 0) throw InputError("ExactAngle::scaled: zero denominator");
  if (kind_ == Kind::RationalPi) return rational_pi(p_ * num, q_ * den);
  return real(x_ * static_cast<double>(num) / static_cast<double>(den));
}

bool operator==(const ExactAngle& a, const ExactAngle& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.is_rational()) return a.p_ == b.p_ && a.q_ == b.q_;
  return a.x_ == b.x_;
}

std::string ExactAngle::to_string() const {
  if (kind_ == Kind::RationalPi) {
    if (p_ == 0) return "0";
    return "pi*" + std::to_string(p_) + "/" + std::to_string(q_);
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x_);
  return buf;
}

}  // namespace ccc
