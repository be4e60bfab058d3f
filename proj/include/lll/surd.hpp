#pragma once

#include <gmpxx.h>

#include <string>

namespace lll {

/// Exact element a + b·√r of the quadratic field Q(√r), r a positive integer.
///
/// A perfect-square radicand is folded into the rational part on construction,
/// so `irrational()` is zero whenever the value is rational. Arithmetic between
/// two values with nonzero irrational parts requires equal radicands.
class Surd {
 public:
  Surd() = default;
  Surd(long value) : rational_(value) {}  // NOLINT(google-explicit-constructor)
  Surd(mpq_class value) : rational_(std::move(value)) {}  // NOLINT
  Surd(mpq_class rational, mpq_class irrational, unsigned long radicand);

  /// b·√r with zero rational part.
  static Surd root(unsigned long radicand, mpq_class coefficient = 1);

  const mpq_class& rational() const { return rational_; }
  const mpq_class& irrational() const { return irrational_; }
  unsigned long radicand() const { return radicand_; }

  bool is_rational() const { return irrational_ == 0; }
  bool is_zero() const { return rational_ == 0 && irrational_ == 0; }

  /// Exact sign in {-1, 0, 1}.
  int sign() const;
  double to_double() const;

  /// "p/q", "p/q·√r" or "p/q+p'/q'·√r".
  std::string to_string() const;

  Surd operator-() const;
  Surd& operator+=(const Surd& other);
  Surd& operator-=(const Surd& other);
  Surd& operator*=(const Surd& other);
  /// Division by a rational scalar.
  Surd& operator/=(const mpq_class& divisor);
  /// Multiplicative inverse via the conjugate; throws std::domain_error on zero.
  Surd inverse() const;

  friend Surd operator+(Surd a, const Surd& b) { return a += b; }
  friend Surd operator-(Surd a, const Surd& b) { return a -= b; }
  friend Surd operator*(Surd a, const Surd& b) { return a *= b; }
  friend Surd operator/(Surd a, const mpq_class& b) { return a /= b; }
  friend Surd operator/(Surd a, const Surd& b) { return a *= b.inverse(); }

  friend bool operator==(const Surd& a, const Surd& b);
  friend bool operator!=(const Surd& a, const Surd& b) { return !(a == b); }

 private:
  void merge_radicand(const Surd& other);
  void canonicalize();

  mpq_class rational_{0};
  mpq_class irrational_{0};
  unsigned long radicand_{1};
};

/// Canonical "p/q" string; integers keep an explicit "/1".
std::string rational_string(const mpq_class& value);

/// Parses "p/q", "p", "p/q·√r" (or "p/q*sqrt(r)").
Surd parse_surd(const std::string& text);

}  // namespace lll
