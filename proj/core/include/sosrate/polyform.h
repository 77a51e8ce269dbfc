#pragma once

// Exact algebra for polynomials that are linear in scalar symbols and
// quadratic in vector symbols:
//
//   p(z) = c + sum_s linear[s] * s + sum_{u,v} gram[u,v] * <u, v>
//
// Vector symbols carry no dimension; the same polynomial is valid in every
// ambient dimension n >= 1. Coefficients are exact rationals.

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sosrate/rational.h"

namespace sosrate {

/// Ordered, duplicate-free lists of scalar and vector symbol names. The order
/// fixes all downstream matrix and vector indexing.
class VarCatalog {
 public:
  VarCatalog(std::vector<std::string> scalars, std::vector<std::string> vectors);

  const std::vector<std::string>& scalars() const { return scalars_; }
  const std::vector<std::string>& vectors() const { return vectors_; }
  int num_scalars() const { return static_cast<int>(scalars_.size()); }
  int num_vectors() const { return static_cast<int>(vectors_.size()); }

  std::optional<int> ScalarIndex(std::string_view name) const;
  std::optional<int> VectorIndex(std::string_view name) const;
  bool Contains(std::string_view name) const;

  /// Same catalog with one vector symbol removed.
  VarCatalog WithoutVector(std::string_view name) const;

  bool operator==(const VarCatalog& other) const = default;

 private:
  std::vector<std::string> scalars_;
  std::vector<std::string> vectors_;
};

using CatalogPtr = std::shared_ptr<const VarCatalog>;

CatalogPtr MakeCatalog(std::vector<std::string> scalars, std::vector<std::string> vectors);

/// Thrown when polynomials over different catalogs are combined.
class CatalogMismatch : public std::invalid_argument {
 public:
  CatalogMismatch(const VarCatalog& lhs, const VarCatalog& rhs);
};

/// A rational linear combination of vector symbols, e.g. x_k - gamma * g_k.
class VectorExpr {
 public:
  VectorExpr() = default;
  VectorExpr(std::string_view symbol);  // NOLINT: implicit by design of call sites
  VectorExpr(const char* symbol) : VectorExpr(std::string_view(symbol)) {}  // NOLINT

  const std::map<std::string, Rational>& terms() const { return terms_; }
  bool References(std::string_view symbol) const;

  VectorExpr operator+(const VectorExpr& other) const;
  VectorExpr operator-(const VectorExpr& other) const;
  VectorExpr operator-() const;
  friend VectorExpr operator*(const Rational& factor, const VectorExpr& expr);

 private:
  void Add(const std::string& symbol, const Rational& coefficient);

  std::map<std::string, Rational> terms_;
};

/// Canonical name of one coefficient: the constant, a scalar symbol, or an
/// unordered pair of vector symbols (smaller name first).
struct CoefficientKey {
  enum class Kind { kConstant, kScalar, kPair };

  Kind kind = Kind::kConstant;
  std::string first;
  std::string second;

  static CoefficientKey Constant();
  static CoefficientKey Scalar(std::string name);
  static CoefficientKey Pair(std::string a, std::string b);

  std::string ToString() const;
  auto operator<=>(const CoefficientKey&) const = default;
};

class StructuredPolynomial {
 public:
  /// The zero polynomial over `catalog`.
  explicit StructuredPolynomial(CatalogPtr catalog);

  static StructuredPolynomial Constant(CatalogPtr catalog, const Rational& value);
  static StructuredPolynomial Scalar(CatalogPtr catalog, std::string_view name);
  static StructuredPolynomial Inner(CatalogPtr catalog, const VectorExpr& a, const VectorExpr& b);
  static StructuredPolynomial SquaredNorm(CatalogPtr catalog, const VectorExpr& a);

  const CatalogPtr& catalog() const { return catalog_; }
  const Rational& constant() const { return constant_; }
  const std::vector<Rational>& linear() const { return linear_; }
  const RationalMatrix& gram() const { return gram_; }

  const Rational& linear(std::string_view scalar) const;
  const Rational& gram(std::string_view u, std::string_view v) const;

  bool IsZero() const;
  /// Coefficient of a canonical key; symmetric off-diagonal entries are
  /// reported as the monomial coefficient 2 * gram[u,v].
  Rational Coefficient(const CoefficientKey& key) const;
  /// Every nonzero coefficient in canonical catalog order.
  std::vector<std::pair<CoefficientKey, Rational>> NonzeroCoefficients() const;

  StructuredPolynomial operator+(const StructuredPolynomial& other) const;
  StructuredPolynomial operator-(const StructuredPolynomial& other) const;
  StructuredPolynomial operator-() const;
  friend StructuredPolynomial operator*(const Rational& factor, const StructuredPolynomial& p);

  bool operator==(const StructuredPolynomial& other) const;

 private:
  friend StructuredPolynomial Combine(
      std::span<const std::pair<Rational, StructuredPolynomial>> terms);
  friend StructuredPolynomial SubstituteVector(const StructuredPolynomial& p,
                                               std::string_view target,
                                               const VectorExpr& replacement);

  CatalogPtr catalog_;
  Rational constant_;
  std::vector<Rational> linear_;
  RationalMatrix gram_;
};

/// Exact sum of weight * polynomial. All terms must share one catalog (by
/// value); an empty list is rejected.
StructuredPolynomial Combine(std::span<const std::pair<Rational, StructuredPolynomial>> terms);

/// Replaces vector symbol `target` by an affine combination of the remaining
/// vector symbols. The result lives on the catalog without `target`.
StructuredPolynomial SubstituteVector(const StructuredPolynomial& p, std::string_view target,
                                      const VectorExpr& replacement);

/// Monomial coefficients of p with every vector symbol read as a single real
/// coordinate (n = 1). Scalar and vector symbols share the key namespace.
std::map<CoefficientKey, Rational> ExpandUnivariate(const StructuredPolynomial& p);

/// Values for the catalog's symbols. Extra entries are ignored; all vectors
/// must share one dimension.
struct Assignment {
  std::map<std::string, Rational, std::less<>> scalars;
  std::map<std::string, std::vector<Rational>, std::less<>> vectors;
};

Rational Evaluate(const StructuredPolynomial& p, const Assignment& assignment);

/// One nonzero coefficient per line: "<kind> <key> <numerator>/<denominator>",
/// kind in {constant, scalar, pair}; pair keys are "u:v".
std::string Serialize(const StructuredPolynomial& p);
StructuredPolynomial Deserialize(std::string_view text, CatalogPtr catalog);

}  // namespace sosrate
