#include "sosrate/rational.h"

#include <cctype>
#include <stdexcept>

namespace sosrate {

RationalMatrix RationalMatrix::Identity(int n) {
  RationalMatrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool RationalMatrix::IsSymmetric() const {
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      if ((*this)(i, j) != (*this)(j, i)) return false;
    }
  }
  return true;
}

bool RationalMatrix::IsZero() const {
  for (const Rational& v : data_) {
    if (sgn(v) != 0) return false;
  }
  return true;
}

RationalMatrix RationalMatrix::operator+(const RationalMatrix& other) const {
  if (other.n_ != n_) throw std::invalid_argument("matrix size mismatch");
  RationalMatrix out(n_);
  for (size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] + other.data_[k];
  return out;
}

RationalMatrix RationalMatrix::operator-(const RationalMatrix& other) const {
  if (other.n_ != n_) throw std::invalid_argument("matrix size mismatch");
  RationalMatrix out(n_);
  for (size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] - other.data_[k];
  return out;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& other) const {
  if (other.n_ != n_) throw std::invalid_argument("matrix size mismatch");
  RationalMatrix out(n_);
  for (int i = 0; i < n_; ++i) {
    for (int k = 0; k < n_; ++k) {
      const Rational& a = (*this)(i, k);
      if (sgn(a) == 0) continue;
      for (int j = 0; j < n_; ++j) out(i, j) += a * other(k, j);
    }
  }
  return out;
}

RationalMatrix RationalMatrix::Scaled(const Rational& factor) const {
  RationalMatrix out(n_);
  for (size_t k = 0; k < data_.size(); ++k) out.data_[k] = data_[k] * factor;
  return out;
}

Rational RationalMatrix::Trace() const {
  Rational tr = 0;
  for (int i = 0; i < n_; ++i) tr += (*this)(i, i);
  return tr;
}

namespace {

bool AllDigits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

Rational ParseDecimal(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  long exponent = 0;
  if (auto e = body.find_first_of("eE"); e != std::string_view::npos) {
    std::string_view exp_text = body.substr(e + 1);
    body = body.substr(0, e);
    bool exp_negative = false;
    if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
      exp_negative = exp_text.front() == '-';
      exp_text.remove_prefix(1);
    }
    if (!AllDigits(exp_text) || exp_text.size() > 6) {
      throw std::invalid_argument("malformed exponent in '" + std::string(text) + "'");
    }
    exponent = std::stol(std::string(exp_text));
    if (exp_negative) exponent = -exponent;
  }
  std::string digits;
  long fraction_digits = 0;
  if (auto dot = body.find('.'); dot != std::string_view::npos) {
    std::string_view whole = body.substr(0, dot);
    std::string_view frac = body.substr(dot + 1);
    if ((!whole.empty() && !AllDigits(whole)) || (!frac.empty() && !AllDigits(frac)) ||
        (whole.empty() && frac.empty())) {
      throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    }
    digits = std::string(whole) + std::string(frac);
    fraction_digits = static_cast<long>(frac.size());
  } else {
    if (!AllDigits(body)) throw std::invalid_argument("malformed number '" + std::string(text) + "'");
    digits = std::string(body);
  }
  mpz_class numerator(digits, 10);
  long scale = exponent - fraction_digits;
  mpz_class power;
  mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  Rational value = scale >= 0 ? Rational(numerator * power) : Rational(numerator, power);
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

}  // namespace

Rational ParseRational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Rational num = ParseDecimal(text.substr(0, slash));
    Rational den = ParseDecimal(text.substr(slash + 1));
    if (sgn(den) == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational out = num / den;
    out.canonicalize();
    return out;
  }
  return ParseDecimal(text);
}

std::string ToString(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

double ToDouble(const Rational& value) { return value.get_d(); }

std::optional<Rational> ExactSqrt(const Rational& value) {
  if (sgn(value) < 0) return std::nullopt;
  const mpz_class& num = value.get_num();
  const mpz_class& den = value.get_den();
  if (mpz_perfect_square_p(num.get_mpz_t()) == 0 || mpz_perfect_square_p(den.get_mpz_t()) == 0) {
    return std::nullopt;
  }
  mpz_class rn, rd;
  mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
  mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
  return Rational(rn, rd);
}

Rational Fraction(long numerator, long denominator) {
  if (denominator == 0) throw std::invalid_argument("zero denominator");
  Rational q(numerator, denominator);
  q.canonicalize();
  return q;
}

Rational Abs(const Rational& value) { return sgn(value) < 0 ? Rational(-value) : value; }

}  // namespace sosrate
