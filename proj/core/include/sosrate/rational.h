#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sosrate {

/// Arbitrary-precision rational. All symbolic algebra runs on this type.
using Rational = mpq_class;

/// Dense square matrix of rationals, row-major.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(int n) : n_(n), data_(static_cast<size_t>(n) * n) {}

  static RationalMatrix Identity(int n);

  int size() const { return n_; }
  Rational& operator()(int i, int j) { return data_[Index(i, j)]; }
  const Rational& operator()(int i, int j) const { return data_[Index(i, j)]; }

  bool IsSymmetric() const;
  bool IsZero() const;

  RationalMatrix operator+(const RationalMatrix& other) const;
  RationalMatrix operator-(const RationalMatrix& other) const;
  RationalMatrix operator*(const RationalMatrix& other) const;
  RationalMatrix Scaled(const Rational& factor) const;
  Rational Trace() const;

  bool operator==(const RationalMatrix& other) const = default;

 private:
  size_t Index(int i, int j) const { return static_cast<size_t>(i) * n_ + j; }

  int n_ = 0;
  std::vector<Rational> data_;
};

/// numerator / denominator in canonical form. Prefer this to the two-argument
/// Rational constructor, which leaves 2/4 uncanonicalized and breaks equality.
Rational Fraction(long numerator, long denominator);

/// Parses "p/q", an integer, or a finite decimal ("0.19", "-1.5e-3") into an
/// exact rational. Throws std::invalid_argument on malformed input or a zero
/// denominator.
Rational ParseRational(std::string_view text);

/// "p/q", or "p" when the denominator is one.
std::string ToString(const Rational& value);

double ToDouble(const Rational& value);

/// Exact rational square root when both numerator and denominator are perfect
/// squares; nullopt otherwise (and for negative inputs).
std::optional<Rational> ExactSqrt(const Rational& value);

Rational Abs(const Rational& value);

}  // namespace sosrate
