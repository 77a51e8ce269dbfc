#include "sosrate/certify.h"

#include <algorithm>
#include <stdexcept>

namespace sosrate {

namespace {

// Builds the Gram polynomial sum_{u,v} Q[u,v] <u, v> over `catalog`.
StructuredPolynomial GramPolynomial(const CatalogPtr& catalog, const RationalMatrix& q) {
  const auto& vecs = catalog->vectors();
  const int n = static_cast<int>(vecs.size());
  if (q.size() != n) throw std::invalid_argument("Gram block does not match the catalog");
  StructuredPolynomial out(catalog);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      if (sgn(q(i, j)) == 0) continue;
      const Rational w = i == j ? Rational(q(i, j)) : Rational(2 * q(i, j));
      out = out + w * StructuredPolynomial::Inner(catalog, VectorExpr(vecs[i]), VectorExpr(vecs[j]));
    }
  }
  return out;
}

CatalogPtr ScenarioCatalog(const FunctionClass& fc, const AlgorithmSpec& spec) {
  return BuildScenario(fc, spec).catalog;
}

RationalMatrix FromUpper(const std::vector<std::vector<Rational>>& rows) {
  const int n = static_cast<int>(rows.size());
  RationalMatrix m(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < static_cast<int>(rows[i].size()); ++k) {
      m(i, i + k) = rows[i][k];
      m(i + k, i) = rows[i][k];
    }
  }
  return m;
}

CertificateInstance FromSosForm(std::string key, const CatalogPtr& catalog, Rational t,
                                std::vector<Rational> sigma, std::vector<Rational> theta,
                                SosForm form) {
  CertificateInstance c;
  c.key = std::move(key);
  c.t = std::move(t);
  c.sigma = std::move(sigma);
  c.theta = std::move(theta);
  c.gram = form.Expand(catalog).gram();
  c.sos_form = std::move(form);
  return c;
}

CertificateInstance GdConstant(const FunctionClass& fc, const AlgorithmSpec& spec) {
  const Rational& mu = fc.mu;
  const Rational& L = fc.L;
  const Rational& g = spec.gamma;
  const Rational rho = RhoGamma(g, fc);
  const Rational s = 2 * g * rho;
  SosForm form;
  const VectorExpr dx = VectorExpr("x_k") - VectorExpr("x_star");
  if (g * (L + mu) <= 2) {
    form.terms.push_back({g * (2 - g * (L + mu)) / (L - mu), VectorExpr("g_k") - mu * dx});
  } else {
    form.terms.push_back({g * (g * (L + mu) - 2) / (L - mu), VectorExpr("g_k") - L * dx});
  }
  return FromSosForm("gd_constant", ScenarioCatalog(fc, spec), rho * rho, {0, s, 0, 0, s, 0}, {},
                     std::move(form));
}

CertificateInstance GdExactLineSearch(const FunctionClass& fc, const AlgorithmSpec& /*spec*/) {
  const Rational& mu = fc.mu;
  const Rational& L = fc.L;
  const Rational s = L + mu;
  const Rational d = L - mu;
  CertificateInstance c;
  c.key = "gd_els";
  c.t = (d / s) * (d / s);
  c.sigma = {d / s, 0, 0, 0, 2 * mu * d / (s * s), 2 * mu / s};
  c.theta = {-1, -2 / s};
  // Order: x_star, x_k, x_k1, g_k, g_k1.
  c.gram = FromUpper({
      {2 * L * L * mu * mu / (s * s * d), -L * mu * mu / (s * s), -L * mu * mu / (s * d),
       L * mu / (s * s), L * mu / (s * d)},
      {L * mu * (L + 3 * mu) / (2 * s * s), -L * mu / (2 * s), -mu * (3 * L + mu) / (2 * s * s),
       -mu / (2 * s)},
      {L * mu / (2 * d), mu / (2 * s), -mu / (2 * d)},
      {(L + 3 * mu) / (2 * s * s), 1 / (2 * s)},
      {1 / (2 * d)},
  });
  // With sqrt(kappa) and sqrt(L mu) rational the Gram form splits into two squares.
  const Rational kappa = L / mu;
  const auto rk = ExactSqrt(kappa);
  const auto rlm = ExactSqrt(L * mu);
  if (rk && rlm) {
    const Rational& r = *rk;
    const VectorExpr dk = VectorExpr("x_k") - VectorExpr("x_star");
    const VectorExpr dk1 = VectorExpr("x_k1") - VectorExpr("x_star");
    const Rational inv = 1 / *rlm;
    const VectorExpr q1 = Rational(-(r + 1) * (r + 1) / (kappa + 1)) * (dk - inv * VectorExpr("g_k")) +
                          (dk1 + inv * VectorExpr("g_k1"));
    // The coefficient of the first group is negative; with a plus sign the
    // expansion misses Q* in the k / k+1 cross terms.
    const VectorExpr q2 = Rational(-(r - 1) * (r - 1) / (kappa + 1)) * (dk + inv * VectorExpr("g_k")) +
                          (dk1 - inv * VectorExpr("g_k1"));
    SosForm form;
    form.terms.push_back({mu * r / 4 / (r + 1), q1});
    form.terms.push_back({mu * r / 4 / (r - 1), q2});
    c.sos_form = std::move(form);
  }
  return c;
}

// Armijo, Goldstein and Wolfe share one certificate shape in terms of the
// decrease coefficient c of f_k - f_{k+1} >= c |g_k|^2.
CertificateInstance LineSearch(const FunctionClass& fc, const AlgorithmSpec& spec) {
  const Rational& mu = fc.mu;
  const Rational& L = fc.L;
  const Rational c = DecreaseCoefficient(spec, fc);
  SosForm form;
  form.terms.push_back({c * L / (L - mu),
                        VectorExpr("g_k") + mu * (VectorExpr("x_star") - VectorExpr("x_k"))});
  const Rational s5 = 2 * mu * c;
  return FromSosForm(std::string(ScenarioKey(spec.kind)), ScenarioCatalog(fc, spec), 1 - s5,
                     {0, 0, 0, 0, s5, 0, 1}, {}, std::move(form));
}

CertificateInstance PgmConstant(const FunctionClass& fc, const AlgorithmSpec& spec) {
  const Rational& mu = fc.mu;
  const Rational& L = fc.L;
  const Rational& g = spec.gamma;
  const Rational rho = RhoGamma(g, fc);
  const Rational a = 2 * rho / g;
  const Rational b = 2 * rho * rho / g;
  const VectorExpr step = VectorExpr("r_k") + VectorExpr("sbar_k1");
  const VectorExpr ds = VectorExpr("s_k") - VectorExpr("sbar_k1");
  const VectorExpr dr = VectorExpr("r_k") - VectorExpr("r_k1");
  SosForm form;
  if (g * (L + mu) <= 2) {
    form.terms.push_back({(1 - g * mu) * (1 - g * mu), ds});
    form.terms.push_back({(2 - g * (L + mu)) / (g * (L - mu)), dr - Rational(mu * g) * step});
  } else {
    form.terms.push_back({(1 - g * L) * (1 - g * L), ds});
    form.terms.push_back({(g * (L + mu) - 2) / (g * (L - mu)), dr - Rational(L * g) * step});
  }
  return FromSosForm("pgm_constant", ScenarioCatalog(fc, spec), rho * rho,
                     {a, 0, a, 0, 0, 0, b, 0, b, 0, 0, 0}, {}, std::move(form));
}

CertificateInstance PgmExactLineSearch(const FunctionClass& fc, const AlgorithmSpec&) {
  const Rational& mu = fc.mu;
  const Rational& L = fc.L;
  const Rational s = L + mu;
  const Rational d = L - mu;
  const Rational s2 = s * s;
  CertificateInstance c;
  c.key = "pgm_els";
  c.t = (d / s) * (d / s);
  c.sigma = {d / s, 0, 0, 0, 2 * mu * d / s2, 2 * mu / s, (d / s) * (d / s), 0, 0, 0, 0,
             4 * L * mu / s2};
  c.theta = {-2 / s, -1, 0};
  // Order: x_star, x_k, x_k1, r_star, r_k, r_k1, s_star, s_k, sbar_k1.
  c.gram = FromUpper({
      {2 * L * L * mu * mu / (s2 * d), -L * mu * mu / s2, -L * mu * mu / (d * s),
       -2 * L * mu * mu / (s2 * d), L * mu / s2, L * mu / (d * s), 0, 0, 2 * L * mu / s2},
      {L * mu * (L + 3 * mu) / (2 * s2), -L * mu / (2 * s), mu * mu / s2, -mu * (3 * L + mu) / (2 * s2),
       -mu / (2 * s), 0, 0, -2 * L * mu / s2},
      {L * mu / (2 * d), mu * mu / (d * s), mu / (2 * s), -mu / (2 * d), 0, 0, 0},
      {2 * L * mu / (s2 * d), -mu / s2, -mu / (d * s), 0, 0, 0},
      {(L + 3 * mu) / (2 * s2), 1 / (2 * s), 0, 0, 1 / s},
      {1 / (2 * d), 0, 0, 1 / s},
      {0, 0, 0},
      {0, 0},
      {2 / s},
  });
  return c;
}

const std::vector<AnalyticCertificate>& AllCertificates() {
  static const std::vector<AnalyticCertificate> all = {
      {"gd_constant", &GdConstant},   {"gd_els", &GdExactLineSearch}, {"gd_armijo", &LineSearch},
      {"gd_goldstein", &LineSearch},  {"gd_wolfe", &LineSearch},      {"pgm_constant", &PgmConstant},
      {"pgm_els", &PgmExactLineSearch},
  };
  return all;
}

}  // namespace

StructuredPolynomial SosForm::Expand(const CatalogPtr& catalog) const {
  StructuredPolynomial out(catalog);
  for (const auto& [weight, expr] : terms) {
    out = out + weight * StructuredPolynomial::SquaredNorm(catalog, expr);
  }
  return out;
}

CertificateInstance AnalyticCertificate::Evaluate(const FunctionClass& fc,
                                                  const AlgorithmSpec& spec) const {
  if (ScenarioKey(spec.kind) != key_) {
    throw std::invalid_argument("certificate " + key_ + " evaluated with algorithm " +
                                std::string(ScenarioKey(spec.kind)));
  }
  spec.Validate(fc);
  CertificateInstance c = evaluator_(fc, spec);
  for (size_t i = 0; i < c.sigma.size(); ++i) {
    if (sgn(c.sigma[i]) < 0) {
      throw std::logic_error(key_ + ": multiplier sigma_" + std::to_string(i + 1) + " = " +
                             ToString(c.sigma[i]) + " is negative");
    }
  }
  if (!c.gram.IsSymmetric()) throw std::logic_error(key_ + ": Gram block is not symmetric");
  return c;
}

const AnalyticCertificate& Catalog(std::string_view scenario_key) {
  for (const auto& cert : AllCertificates()) {
    if (cert.key() == scenario_key) return cert;
  }
  std::string known;
  for (const auto& cert : AllCertificates()) known += (known.empty() ? "" : ", ") + cert.key();
  throw std::invalid_argument("no certificate for '" + std::string(scenario_key) +
                              "'; available: " + known);
}

Rational RhoGamma(const Rational& gamma, const FunctionClass& fc) {
  return std::max(Abs(1 - gamma * fc.mu), Abs(1 - gamma * fc.L));
}

Rational RateFormula(const FunctionClass& fc, const AlgorithmSpec& spec) {
  spec.Validate(fc);
  const Rational& mu = fc.mu;
  const Rational& L = fc.L;
  Rational t;
  switch (spec.kind) {
    case AlgorithmKind::kGdConstant:
    case AlgorithmKind::kPgmConstant: {
      const Rational rho = RhoGamma(spec.gamma, fc);
      t = rho * rho;
      break;
    }
    case AlgorithmKind::kGdExactLineSearch:
    case AlgorithmKind::kPgmExactLineSearch: {
      const Rational q = (L - mu) / (L + mu);
      t = q * q;
      break;
    }
    case AlgorithmKind::kGdArmijo: {
      const Rational& e = spec.epsilon;
      const Rational& dl = spec.delta;
      t = 1 - 4 * mu * e * (1 - dl) * (1 - dl) / (spec.eta * L) *
                  ((1 - dl) / ((1 + dl) * (1 + dl)) - e);
      break;
    }
    case AlgorithmKind::kGdGoldstein: {
      const Rational& e = spec.epsilon;
      const Rational& dl = spec.delta;
      t = 1 - 4 * mu * e * (1 - dl) * (1 - dl) / L * ((1 - dl) / ((1 + dl) * (1 + dl)) - (1 - e));
      break;
    }
    case AlgorithmKind::kGdWolfe:
      t = 1 - 2 * mu * spec.c1 * (1 - spec.c2) / L;
      break;
  }
  t.canonicalize();
  return t;
}

IdentityReport VerifyIdentity(const CertificateInstance& cert, const RateProblem& problem) {
  if (cert.key != problem.key) {
    throw std::invalid_argument("certificate " + cert.key + " does not belong to scenario " + problem.key);
  }
  if (cert.sigma.size() != problem.inequalities.size() || cert.theta.size() != problem.equalities.size()) {
    throw std::invalid_argument("certificate multiplier counts do not match the scenario");
  }
  std::vector<std::pair<Rational, StructuredPolynomial>> terms;
  terms.emplace_back(cert.t, problem.gain);
  terms.emplace_back(-1, problem.loss);
  for (size_t i = 0; i < cert.sigma.size(); ++i) terms.emplace_back(-cert.sigma[i], problem.inequalities[i].poly);
  for (size_t j = 0; j < cert.theta.size(); ++j) terms.emplace_back(-cert.theta[j], problem.equalities[j].poly);
  terms.emplace_back(-1, GramPolynomial(problem.catalog, cert.gram));
  const StructuredPolynomial residual = Combine(terms);

  IdentityReport report;
  report.discrepancies = residual.NonzeroCoefficients();
  for (const Rational& s : cert.sigma) {
    if (sgn(s) < 0) report.multipliers_nonnegative = false;
  }
  report.holds = report.discrepancies.empty() && report.multipliers_nonnegative;
  return report;
}

std::vector<Rational> CharacteristicPolynomial(const RationalMatrix& a) {
  const int n = a.size();
  std::vector<Rational> coeffs(n + 1);
  coeffs[0] = 1;
  RationalMatrix m(n);
  for (int k = 1; k <= n; ++k) {
    RationalMatrix next = a * m;
    for (int i = 0; i < n; ++i) next(i, i) += coeffs[k - 1];
    m = std::move(next);
    Rational c = -(a * m).Trace() / k;
    c.canonicalize();
    coeffs[k] = c;
  }
  return coeffs;
}

PsdVerdict VerifyPsd(const RationalMatrix& input, PsdMethod method) {
  if (!input.IsSymmetric()) throw std::invalid_argument("PSD test requires a symmetric matrix");
  PsdVerdict verdict;
  verdict.method = method;
  const int n = input.size();

  if (method == PsdMethod::kCharpolyDescartes) {
    verdict.charpoly = CharacteristicPolynomial(input);
    verdict.is_psd = true;
    for (int k = 0; k <= n; ++k) {
      const int s = sgn(verdict.charpoly[k]) * (k % 2 == 0 ? 1 : -1);
      if (s < 0) verdict.is_psd = false;
    }
    return verdict;
  }

  RationalMatrix a = input;
  std::vector<bool> done(n, false);
  for (int step = 0; step < n; ++step) {
    int pivot = -1;
    for (int i = 0; i < n; ++i) {
      if (!done[i] && (pivot < 0 || a(i, i) > a(pivot, pivot))) pivot = i;
    }
    const Rational d = a(pivot, pivot);
    verdict.pivots.emplace_back(pivot, d);
    if (sgn(d) < 0) {
      verdict.is_psd = false;
      return verdict;
    }
    if (sgn(d) == 0) {
      // Every remaining diagonal entry is zero: psd only if the rest vanishes.
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          if (!done[i] && !done[j] && sgn(a(i, j)) != 0) {
            verdict.is_psd = false;
            return verdict;
          }
        }
      }
      verdict.is_psd = true;
      return verdict;
    }
    done[pivot] = true;
    for (int i = 0; i < n; ++i) {
      if (done[i] || sgn(a(i, pivot)) == 0) continue;
      const Rational f = a(i, pivot) / d;
      for (int j = 0; j < n; ++j) {
        if (!done[j]) a(i, j) -= f * a(pivot, j);
      }
    }
  }
  verdict.is_psd = true;
  return verdict;
}

std::vector<Rational> ClosedFormPgmElsCubic(const Rational& mu, const Rational& L) {
  const Rational mu2 = mu * mu, L2 = L * L, L3 = L2 * L;
  const Rational b = -2 * L3 * mu - 2 * mu * (L + 3 * (L - mu)) - 6 * L2 - 2 * L * mu2 * (3 * L + (L - mu));
  const Rational c = 44 * L * mu * (L2 - mu2) +
                     4 * L2 * mu * (3 * (L3 - mu2 * mu) + 3 * mu * (L2 - mu2) + 26 * mu2 * (L - mu) + 2 * L * mu2) +
                     12 * mu2 * (L2 - mu2) + 12 * L3 * L2 * mu2 * mu + 12 * L3 * mu2 * mu2 * (L - mu) +
                     4 * L * mu2 * mu2 * mu;
  const Rational d = -32 * (L - mu) * (L - mu) * mu2 *
                     (L2 * L2 * (2 + 3 * mu2) + 4 * L * mu * (1 + mu2) + L3 * mu * (4 + 6 * mu2) +
                      2 * mu2 * (1 + mu2) + L2 * (2 + 16 * mu2 + 3 * mu2 * mu2));
  return {1, b, c, d};
}

ArmijoComparison CompareArmijo(const Rational& epsilon, const Rational& eta, const Rational& kappa) {
  if (!(kappa > 1)) throw InadmissibleParameters("comparison requires kappa > 1");
  if (!(eta > 1)) throw InadmissibleParameters("comparison requires eta > 1");
  if (!(sgn(epsilon) > 0 && epsilon < 1)) throw InadmissibleParameters("comparison requires 0 < epsilon < 1");
  ArmijoComparison out;
  const Rational ek = eta * kappa;
  out.t_new = 1 - 4 * epsilon * (1 - epsilon) / ek;
  if (epsilon < Rational(1, 2)) {
    out.t_ly = Rational(1 - 2 * epsilon / ek);
    out.new_below_ly = out.t_new < *out.t_ly;
  } else {
    const Rational inv = 1 / epsilon;
    out.t_nemi = Rational((kappa - (2 - inv) * (1 - epsilon) / eta) / (kappa + (inv - 1) / eta));
    out.new_not_above_nemi = out.t_new <= *out.t_nemi;
  }
  return out;
}

}  // namespace sosrate
