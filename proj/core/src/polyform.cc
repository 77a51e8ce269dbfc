#include "sosrate/polyform.h"

#include <algorithm>
#include <set>
#include <sstream>

namespace sosrate {

namespace {

std::string JoinNames(const std::vector<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return "{" + out + "}";
}

std::optional<int> Find(const std::vector<std::string>& names, std::string_view name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<int>(it - names.begin());
}

void RequireSameCatalog(const CatalogPtr& a, const CatalogPtr& b) {
  if (a != b && !(*a == *b)) throw CatalogMismatch(*a, *b);
}

}  // namespace

VarCatalog::VarCatalog(std::vector<std::string> scalars, std::vector<std::string> vectors)
    : scalars_(std::move(scalars)), vectors_(std::move(vectors)) {
  std::set<std::string> seen;
  for (const auto* list : {&scalars_, &vectors_}) {
    for (const auto& name : *list) {
      if (name.empty()) throw std::invalid_argument("empty symbol name");
      if (!seen.insert(name).second) {
        throw std::invalid_argument("duplicate symbol name '" + name + "'");
      }
    }
  }
}

std::optional<int> VarCatalog::ScalarIndex(std::string_view name) const {
  return Find(scalars_, name);
}

std::optional<int> VarCatalog::VectorIndex(std::string_view name) const {
  return Find(vectors_, name);
}

bool VarCatalog::Contains(std::string_view name) const {
  return ScalarIndex(name).has_value() || VectorIndex(name).has_value();
}

VarCatalog VarCatalog::WithoutVector(std::string_view name) const {
  std::vector<std::string> remaining;
  for (const auto& v : vectors_) {
    if (v != name) remaining.push_back(v);
  }
  return VarCatalog(scalars_, std::move(remaining));
}

CatalogPtr MakeCatalog(std::vector<std::string> scalars, std::vector<std::string> vectors) {
  return std::make_shared<const VarCatalog>(std::move(scalars), std::move(vectors));
}

CatalogMismatch::CatalogMismatch(const VarCatalog& lhs, const VarCatalog& rhs)
    : std::invalid_argument("catalog mismatch: scalars " + JoinNames(lhs.scalars()) +
                            " vectors " + JoinNames(lhs.vectors()) + " vs scalars " +
                            JoinNames(rhs.scalars()) + " vectors " + JoinNames(rhs.vectors())) {}

// --- VectorExpr -------------------------------------------------------------

VectorExpr::VectorExpr(std::string_view symbol) { terms_[std::string(symbol)] = 1; }

bool VectorExpr::References(std::string_view symbol) const {
  return terms_.find(std::string(symbol)) != terms_.end();
}

void VectorExpr::Add(const std::string& symbol, const Rational& coefficient) {
  Rational& slot = terms_[symbol];
  slot += coefficient;
  if (sgn(slot) == 0) terms_.erase(symbol);
}

VectorExpr VectorExpr::operator+(const VectorExpr& other) const {
  VectorExpr out = *this;
  for (const auto& [s, c] : other.terms_) out.Add(s, c);
  return out;
}

VectorExpr VectorExpr::operator-(const VectorExpr& other) const { return *this + (-other); }

VectorExpr VectorExpr::operator-() const { return Rational(-1) * *this; }

VectorExpr operator*(const Rational& factor, const VectorExpr& expr) {
  VectorExpr out;
  if (sgn(factor) == 0) return out;
  for (const auto& [s, c] : expr.terms_) out.terms_[s] = factor * c;
  return out;
}

// --- CoefficientKey ---------------------------------------------------------

CoefficientKey CoefficientKey::Constant() { return {Kind::kConstant, "", ""}; }

CoefficientKey CoefficientKey::Scalar(std::string name) {
  return {Kind::kScalar, std::move(name), ""};
}

CoefficientKey CoefficientKey::Pair(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {Kind::kPair, std::move(a), std::move(b)};
}

std::string CoefficientKey::ToString() const {
  switch (kind) {
    case Kind::kConstant:
      return "constant 1";
    case Kind::kScalar:
      return "scalar " + first;
    case Kind::kPair:
      return "pair " + first + ":" + second;
  }
  return "";
}

// --- StructuredPolynomial ---------------------------------------------------

StructuredPolynomial::StructuredPolynomial(CatalogPtr catalog)
    : catalog_(std::move(catalog)),
      constant_(0),
      linear_(catalog_->num_scalars()),
      gram_(catalog_->num_vectors()) {}

StructuredPolynomial StructuredPolynomial::Constant(CatalogPtr catalog, const Rational& value) {
  StructuredPolynomial p(std::move(catalog));
  p.constant_ = value;
  return p;
}

StructuredPolynomial StructuredPolynomial::Scalar(CatalogPtr catalog, std::string_view name) {
  StructuredPolynomial p(std::move(catalog));
  auto idx = p.catalog_->ScalarIndex(name);
  if (!idx) throw std::invalid_argument("unknown scalar symbol '" + std::string(name) + "'");
  p.linear_[*idx] = 1;
  return p;
}

StructuredPolynomial StructuredPolynomial::Inner(CatalogPtr catalog, const VectorExpr& a,
                                                 const VectorExpr& b) {
  StructuredPolynomial p(std::move(catalog));
  auto index_of = [&](const std::string& s) {
    auto idx = p.catalog_->VectorIndex(s);
    if (!idx) throw std::invalid_argument("unknown vector symbol '" + s + "'");
    return *idx;
  };
  for (const auto& [u, cu] : a.terms()) {
    const int i = index_of(u);
    for (const auto& [v, cv] : b.terms()) {
      const int j = index_of(v);
      // <u, v> contributes half to each symmetric slot.
      const Rational half = cu * cv / 2;
      p.gram_(i, j) += half;
      p.gram_(j, i) += half;
    }
  }
  return p;
}

StructuredPolynomial StructuredPolynomial::SquaredNorm(CatalogPtr catalog, const VectorExpr& a) {
  return Inner(std::move(catalog), a, a);
}

const Rational& StructuredPolynomial::linear(std::string_view scalar) const {
  auto idx = catalog_->ScalarIndex(scalar);
  if (!idx) throw std::invalid_argument("unknown scalar symbol '" + std::string(scalar) + "'");
  return linear_[*idx];
}

const Rational& StructuredPolynomial::gram(std::string_view u, std::string_view v) const {
  auto i = catalog_->VectorIndex(u);
  auto j = catalog_->VectorIndex(v);
  if (!i || !j) {
    throw std::invalid_argument("unknown vector symbol in pair '" + std::string(u) + "', '" +
                                std::string(v) + "'");
  }
  return gram_(*i, *j);
}

bool StructuredPolynomial::IsZero() const {
  if (sgn(constant_) != 0) return false;
  for (const auto& c : linear_) {
    if (sgn(c) != 0) return false;
  }
  return gram_.IsZero();
}

Rational StructuredPolynomial::Coefficient(const CoefficientKey& key) const {
  switch (key.kind) {
    case CoefficientKey::Kind::kConstant:
      return constant_;
    case CoefficientKey::Kind::kScalar:
      return linear(key.first);
    case CoefficientKey::Kind::kPair: {
      const Rational& g = gram(key.first, key.second);
      return key.first == key.second ? g : Rational(2 * g);
    }
  }
  return 0;
}

std::vector<std::pair<CoefficientKey, Rational>> StructuredPolynomial::NonzeroCoefficients()
    const {
  std::vector<std::pair<CoefficientKey, Rational>> out;
  if (sgn(constant_) != 0) out.emplace_back(CoefficientKey::Constant(), constant_);
  for (int s = 0; s < catalog_->num_scalars(); ++s) {
    if (sgn(linear_[s]) != 0) out.emplace_back(CoefficientKey::Scalar(catalog_->scalars()[s]), linear_[s]);
  }
  const int n = catalog_->num_vectors();
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      if (sgn(gram_(i, j)) == 0) continue;
      Rational c = i == j ? gram_(i, j) : Rational(2 * gram_(i, j));
      out.emplace_back(CoefficientKey::Pair(catalog_->vectors()[i], catalog_->vectors()[j]), c);
    }
  }
  return out;
}

StructuredPolynomial StructuredPolynomial::operator+(const StructuredPolynomial& other) const {
  const std::pair<Rational, StructuredPolynomial> terms[] = {{1, *this}, {1, other}};
  return Combine(terms);
}

StructuredPolynomial StructuredPolynomial::operator-(const StructuredPolynomial& other) const {
  const std::pair<Rational, StructuredPolynomial> terms[] = {{1, *this}, {-1, other}};
  return Combine(terms);
}

StructuredPolynomial StructuredPolynomial::operator-() const { return Rational(-1) * *this; }

StructuredPolynomial operator*(const Rational& factor, const StructuredPolynomial& p) {
  const std::pair<Rational, StructuredPolynomial> terms[] = {{factor, p}};
  return Combine(terms);
}

bool StructuredPolynomial::operator==(const StructuredPolynomial& other) const {
  if (!(*catalog_ == *other.catalog_)) return false;
  return constant_ == other.constant_ && linear_ == other.linear_ && gram_ == other.gram_;
}

StructuredPolynomial Combine(std::span<const std::pair<Rational, StructuredPolynomial>> terms) {
  if (terms.empty()) throw std::invalid_argument("Combine requires at least one term");
  const CatalogPtr& catalog = terms.front().second.catalog_;
  StructuredPolynomial out(catalog);
  const int n = catalog->num_vectors();
  for (const auto& [w, p] : terms) {
    RequireSameCatalog(catalog, p.catalog_);
    if (sgn(w) == 0) continue;
    out.constant_ += w * p.constant_;
    for (size_t s = 0; s < out.linear_.size(); ++s) out.linear_[s] += w * p.linear_[s];
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (sgn(p.gram_(i, j)) != 0) out.gram_(i, j) += w * p.gram_(i, j);
      }
    }
  }
  return out;
}

StructuredPolynomial SubstituteVector(const StructuredPolynomial& p, std::string_view target,
                                      const VectorExpr& replacement) {
  const VarCatalog& old_catalog = *p.catalog_;
  auto target_index = old_catalog.VectorIndex(target);
  if (!target_index) {
    throw std::invalid_argument("substitution target '" + std::string(target) +
                                "' is not a vector symbol of the catalog");
  }
  if (replacement.References(target)) {
    throw std::invalid_argument("replacement for '" + std::string(target) +
                                "' references the target itself");
  }
  auto catalog = std::make_shared<const VarCatalog>(old_catalog.WithoutVector(target));
  const int n_old = old_catalog.num_vectors();
  const int n_new = catalog->num_vectors();

  // Linear map from old symbols to new ones: old_i = sum_j map[i][j] new_j.
  std::vector<std::vector<Rational>> map(n_old, std::vector<Rational>(n_new));
  for (int i = 0; i < n_old; ++i) {
    if (i == *target_index) {
      for (const auto& [s, c] : replacement.terms()) {
        auto j = catalog->VectorIndex(s);
        if (!j) throw std::invalid_argument("replacement references unknown symbol '" + s + "'");
        map[i][*j] = c;
      }
    } else {
      map[i][*catalog->VectorIndex(old_catalog.vectors()[i])] = 1;
    }
  }

  StructuredPolynomial out(catalog);
  out.constant_ = p.constant_;
  out.linear_ = p.linear_;
  for (int a = 0; a < n_old; ++a) {
    for (int b = 0; b < n_old; ++b) {
      const Rational& g = p.gram_(a, b);
      if (sgn(g) == 0) continue;
      for (int i = 0; i < n_new; ++i) {
        if (sgn(map[a][i]) == 0) continue;
        const Rational gi = g * map[a][i];
        for (int j = 0; j < n_new; ++j) {
          if (sgn(map[b][j]) != 0) out.gram_(i, j) += gi * map[b][j];
        }
      }
    }
  }
  return out;
}

std::map<CoefficientKey, Rational> ExpandUnivariate(const StructuredPolynomial& p) {
  std::map<CoefficientKey, Rational> out;
  const VarCatalog& cat = *p.catalog();
  auto accumulate = [&](CoefficientKey key, const Rational& value) {
    if (sgn(value) == 0) return;
    Rational& slot = out[key];
    slot += value;
    if (sgn(slot) == 0) out.erase(key);
  };
  accumulate(CoefficientKey::Constant(), p.constant());
  for (int s = 0; s < cat.num_scalars(); ++s) {
    accumulate(CoefficientKey::Scalar(cat.scalars()[s]), p.linear()[s]);
  }
  // With n = 1 every ordered pair (u, v) contributes gram[u,v] * u * v.
  for (int i = 0; i < cat.num_vectors(); ++i) {
    for (int j = 0; j < cat.num_vectors(); ++j) {
      accumulate(CoefficientKey::Pair(cat.vectors()[i], cat.vectors()[j]), p.gram()(i, j));
    }
  }
  return out;
}

Rational Evaluate(const StructuredPolynomial& p, const Assignment& assignment) {
  const VarCatalog& cat = *p.catalog();
  Rational value = p.constant();
  for (int s = 0; s < cat.num_scalars(); ++s) {
    auto it = assignment.scalars.find(cat.scalars()[s]);
    if (it == assignment.scalars.end()) {
      throw std::invalid_argument("assignment is missing scalar '" + cat.scalars()[s] + "'");
    }
    value += p.linear()[s] * it->second;
  }
  std::vector<const std::vector<Rational>*> vectors;
  std::optional<size_t> dim;
  for (const auto& name : cat.vectors()) {
    auto it = assignment.vectors.find(name);
    if (it == assignment.vectors.end()) {
      throw std::invalid_argument("assignment is missing vector '" + name + "'");
    }
    if (it->second.empty()) throw std::invalid_argument("vector '" + name + "' has dimension 0");
    if (dim && *dim != it->second.size()) {
      throw std::invalid_argument("vector '" + name + "' has dimension " +
                                  std::to_string(it->second.size()) + ", expected " +
                                  std::to_string(*dim));
    }
    dim = it->second.size();
    vectors.push_back(&it->second);
  }
  const int n = cat.num_vectors();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Rational& g = p.gram()(i, j);
      if (sgn(g) == 0) continue;
      Rational inner = 0;
      for (size_t l = 0; l < *dim; ++l) inner += (*vectors[i])[l] * (*vectors[j])[l];
      value += g * inner;
    }
  }
  return value;
}

std::string Serialize(const StructuredPolynomial& p) {
  std::ostringstream out;
  for (const auto& [key, value] : p.NonzeroCoefficients()) {
    out << key.ToString() << ' ' << value.get_num().get_str() << '/' << value.get_den().get_str()
        << '\n';
  }
  return out.str();
}

StructuredPolynomial Deserialize(std::string_view text, CatalogPtr catalog) {
  StructuredPolynomial p(catalog);
  std::vector<std::pair<Rational, StructuredPolynomial>> terms{{1, p}};
  std::istringstream in{std::string(text)};
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    std::string kind, key, value_text, extra;
    if (!(fields >> kind >> key >> value_text) || (fields >> extra)) {
      throw std::invalid_argument("line " + std::to_string(line_number) +
                                  ": expected '<kind> <key> <p/q>'");
    }
    const Rational value = ParseRational(value_text);
    if (kind == "constant") {
      terms.emplace_back(value, StructuredPolynomial::Constant(catalog, 1));
    } else if (kind == "scalar") {
      terms.emplace_back(value, StructuredPolynomial::Scalar(catalog, key));
    } else if (kind == "pair") {
      auto colon = key.find(':');
      if (colon == std::string::npos) {
        throw std::invalid_argument("line " + std::to_string(line_number) + ": pair key needs 'u:v'");
      }
      const std::string u = key.substr(0, colon);
      const std::string v = key.substr(colon + 1);
      // <u,v> appears once as a monomial; Inner(u, v) already carries it.
      terms.emplace_back(value, StructuredPolynomial::Inner(catalog, VectorExpr(u), VectorExpr(v)));
    } else {
      throw std::invalid_argument("line " + std::to_string(line_number) + ": unknown kind '" +
                                  kind + "'");
    }
  }
  return Combine(terms);
}

}  // namespace sosrate
