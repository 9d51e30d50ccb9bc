#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ccc {

/// An angle that is either exactly (p/q)·pi, stored reduced with q >= 1, or
/// an opaque real in radians.
class ExactAngle {
 public:
  enum class Kind { RationalPi, Real };

  ExactAngle() = default;
  static ExactAngle rational_pi(std::int64_t p, std::int64_t q = 1);
  static ExactAngle real(double radians);
  /// Real input snapped to p/q·pi when within tol of one with q <= max_den.
  static ExactAngle from_radians(double radians, double tol = 1e-9, int max_den = 64);
  /// "pi*p/q", "pi/q", "-pi", "p*pi/q", "0", or a decimal in radians.
  static ExactAngle parse(std::string_view text);

  Kind kind() const { return kind_; }
  bool is_rational() const { return kind_ == Kind::RationalPi; }
  std::int64_t numerator() const { return p_; }
  std::int64_t denominator() const { return q_; }
  double radians() const;

  /// Rational view: exact for RationalPi, reconstructed (q <= 64, 1e-9) for Real.
  std::optional<std::pair<std::int64_t, std::int64_t>> as_rational() const;

  /// Member of (pi/m)·Z for m dividing the denominator test.
  bool in_multiple_of_pi_over(std::int64_t m) const;
  bool in_pi_z() const { return in_multiple_of_pi_over(1); }
  bool in_2pi_z() const;
  bool in_half_pi_z() const { return in_multiple_of_pi_over(2); }
  bool in_half_pi_z_odd() const { return in_half_pi_z() && !in_pi_z(); }
  bool in_quarter_pi_z() const { return in_multiple_of_pi_over(4); }

  /// Representative in [0, 2pi).
  ExactAngle normalized() const;

  ExactAngle operator-() const;
  friend ExactAngle operator+(const ExactAngle& a, const ExactAngle& b);
  friend ExactAngle operator-(const ExactAngle& a, const ExactAngle& b) { return a + (-b); }
  ExactAngle scaled(std::int64_t num, std::int64_t den = 1) const;
  friend bool operator==(const ExactAngle& a, const ExactAngle& b);

  /// "pi*p/q" for rationals (or "0"), a %.17g decimal otherwise.
  std::string to_string() const;

 private:
  Kind kind_ = Kind::RationalPi;
  std::int64_t p_ = 0;
  std::int64_t q_ = 1;
  double x_ = 0.0;
};

std::optional<std::pair<std::int64_t, std::int64_t>> rational_pi_reconstruct(double radians,
                                                                             double tol = 1e-9,
                                                                             int max_den = 64);

}  // namespace ccc
