#pragma once

// Closed-form certificates for the catalogued scenarios and exact checks of
// them: the certificate identity in rational arithmetic and rational PSD
// tests (pivoted LDL, and characteristic-polynomial sign patterns).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sosrate/polyform.h"
#include "sosrate/rational.h"
#include "sosrate/scenarios.h"

namespace sosrate {

/// Weighted sum of squared norms: sum_k weight_k * |term_k|^2.
struct SosForm {
  std::vector<std::pair<Rational, VectorExpr>> terms;

  StructuredPolynomial Expand(const CatalogPtr& catalog) const;
};

/// A certificate evaluated at one admissible parameter point. Multipliers
/// are aligned with the scenario's inequality and equality lists; the Gram
/// block is indexed by the scenario catalog's vector symbols.
struct CertificateInstance {
  std::string key;
  Rational t;
  std::vector<Rational> sigma;
  std::vector<Rational> theta;
  RationalMatrix gram;
  std::optional<SosForm> sos_form;
};

class AnalyticCertificate {
 public:
  using Evaluator = CertificateInstance (*)(const FunctionClass&, const AlgorithmSpec&);

  AnalyticCertificate(std::string key, Evaluator evaluator)
      : key_(std::move(key)), evaluator_(evaluator) {}

  const std::string& key() const { return key_; }

  /// Validates the parameters, evaluates, and checks sigma >= 0 and that the
  /// Gram block is symmetric (std::logic_error otherwise).
  CertificateInstance Evaluate(const FunctionClass& function_class, const AlgorithmSpec& spec) const;

 private:
  std::string key_;
  Evaluator evaluator_;
};

/// Throws std::invalid_argument listing the available keys.
const AnalyticCertificate& Catalog(std::string_view scenario_key);

/// Closed-form contraction factor for the scenario (rho_gamma^2 for the
/// constant-step kinds, ((L - mu)/(L + mu))^2 for exact line search, and the
/// line-search rates).
Rational RateFormula(const FunctionClass& function_class, const AlgorithmSpec& spec);

/// max(|1 - gamma mu|, |1 - gamma L|).
Rational RhoGamma(const Rational& gamma, const FunctionClass& function_class);

struct IdentityReport {
  bool holds = false;
  /// Nonzero coefficients of t*gain - loss - sum sigma h - sum theta v - <Q, Gram>.
  std::vector<std::pair<CoefficientKey, Rational>> discrepancies;
  bool multipliers_nonnegative = true;
};

/// Throws std::invalid_argument if the certificate and problem disagree on
/// scenario or multiplier counts.
IdentityReport VerifyIdentity(const CertificateInstance& cert, const RateProblem& problem);

enum class PsdMethod { kRationalLdl, kCharpolyDescartes };

struct PsdVerdict {
  bool is_psd = false;
  PsdMethod method = PsdMethod::kRationalLdl;
  /// kRationalLdl: pivot (index, value) sequence, ending at the first
  /// failure. kCharpolyDescartes: coefficients of det(xI - M), leading first.
  std::vector<std::pair<int, Rational>> pivots;
  std::vector<Rational> charpoly;
};

/// Throws std::invalid_argument for a non-symmetric matrix.
PsdVerdict VerifyPsd(const RationalMatrix& m, PsdMethod method = PsdMethod::kRationalLdl);

/// Coefficients of det(xI - M), leading coefficient first (Faddeev-LeVerrier).
std::vector<Rational> CharacteristicPolynomial(const RationalMatrix& m);

/// Closed-form cubic offered for the nonzero eigenvalues of
/// the PGM exact-line-search Gram block (coefficients a, b, c, d).
std::vector<Rational> ClosedFormPgmElsCubic(const Rational& mu, const Rational& L);

struct ArmijoComparison {
  Rational t_new;
  std::optional<Rational> t_ly;    // defined for epsilon < 1/2
  std::optional<Rational> t_nemi;  // defined for epsilon >= 1/2
  bool new_below_ly = true;        // t_new < t_ly when defined
  bool new_not_above_nemi = true;  // t_new <= t_nemi when defined
};

/// Noiseless Armijo factors as functions of (epsilon, eta, kappa). Throws
/// InadmissibleParameters unless kappa > 1, eta > 1 and 0 < epsilon < 1.
ArmijoComparison CompareArmijo(const Rational& epsilon, const Rational& eta, const Rational& kappa);

}  // namespace sosrate
