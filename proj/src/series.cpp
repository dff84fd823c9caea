#include "deltacrys/series.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "deltacrys/error.hpp"

namespace deltacrys {

namespace {

int bits_for(std::size_t nv) {
  if (nv <= 2) return 32;
  if (nv <= 4) return 16;
  if (nv <= 8) return 8;
  if (nv <= 9) return 7;
  throw Error(ErrorKind::InvalidArgument, "series support at most 9 variables");
}

// Product of a and b keeping total degree <= cap.
std::vector<TruncatedSeries::Term> multiply_terms(const std::vector<TruncatedSeries::Term>& a,
                                                  const std::vector<TruncatedSeries::Term>& b, int cap) {
  using Term = TruncatedSeries::Term;
  if (a.empty() || b.empty()) return {};
  std::vector<const Term*> bs;
  bs.reserve(b.size());
  for (const auto& t : b) bs.push_back(&t);
  std::stable_sort(bs.begin(), bs.end(), [](const Term* x, const Term* y) { return x->deg < y->deg; });

  std::unordered_map<std::uint64_t, std::pair<int, PadicRational>> acc;
  acc.reserve(std::min<std::size_t>(a.size() * b.size(), 1u << 20));
  for (const auto& ta : a) {
    if (ta.c.is_exact_zero()) continue;
    const int lim = cap - ta.deg;
    if (lim < 0) continue;
    for (const Term* tb : bs) {
      if (tb->deg > lim) break;
      if (tb->c.is_exact_zero()) continue;
      PadicRational prod = ta.c * tb->c;
      auto [it, inserted] = acc.try_emplace(ta.key + tb->key, ta.deg + tb->deg, prod);
      if (!inserted) it->second.second += prod;
    }
  }
  std::vector<Term> out;
  out.reserve(acc.size());
  for (auto& [k, v] : acc) out.push_back(Term{k, v.first, std::move(v.second)});
  return out;
}

}  // namespace

TruncatedSeries::TruncatedSeries(std::uint64_t p, std::vector<std::string> vars, int max_degree,
                                 int working_precision)
    : p_(p), vars_(std::move(vars)), max_deg_(max_degree), rel_(working_precision), bits_(bits_for(vars_.size())) {
  if (vars_.empty()) throw Error(ErrorKind::InvalidArgument, "series need at least one variable");
  if (max_degree < 0 || (bits_ < 32 && max_degree >= (1 << bits_)))
    throw Error(ErrorKind::InvalidArgument, "truncation degree too large for the variable count");
}

TruncatedSeries TruncatedSeries::variable(std::uint64_t p, const std::vector<std::string>& vars, int max_degree,
                                          int working_precision, std::size_t index) {
  TruncatedSeries s(p, vars, max_degree, working_precision);
  if (index >= vars.size()) throw Error(ErrorKind::VariableMismatch, "variable index out of range");
  Exponents e(vars.size(), 0);
  e[index] = 1;
  s.add_term(e, PadicRational::from_int(p, working_precision, 1));
  return s;
}

TruncatedSeries TruncatedSeries::zero_like(const TruncatedSeries& like) {
  TruncatedSeries s = like;
  s.terms_.clear();
  return s;
}

TruncatedSeries TruncatedSeries::constant_like(const TruncatedSeries& like, const PadicRational& c) {
  TruncatedSeries s = zero_like(like);
  s.add_term(Exponents(like.nvars(), 0), c);
  return s;
}

std::uint64_t TruncatedSeries::key_of(const Exponents& e) const {
  if (e.size() != vars_.size()) throw Error(ErrorKind::VariableMismatch, "exponent tuple has wrong length");
  std::uint64_t key = 0;
  for (std::size_t i = 0; i < e.size(); ++i) key = (key << bits_) | static_cast<std::uint64_t>(e[i]);
  return key;
}

Exponents TruncatedSeries::exponents(std::uint64_t key) const {
  Exponents e(vars_.size(), 0);
  const std::uint64_t mask = (bits_ == 64) ? ~0ull : ((1ull << bits_) - 1);
  for (std::size_t i = vars_.size(); i-- > 0;) {
    e[i] = static_cast<int>(key & mask);
    key >>= bits_;
  }
  return e;
}

void TruncatedSeries::add_term(const Exponents& e, const PadicRational& c) {
  int deg = 0;
  for (int x : e) {
    if (x < 0) throw Error(ErrorKind::InvalidArgument, "negative exponent");
    deg += x;
  }
  if (deg > max_deg_) return;
  const std::uint64_t key = key_of(e);
  auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                             [](const Term& t, std::uint64_t k) { return t.key < k; });
  if (it != terms_.end() && it->key == key)
    it->c += c;
  else
    terms_.insert(it, Term{key, deg, c});
}

PadicRational TruncatedSeries::coeff(const Exponents& e) const {
  const std::uint64_t key = key_of(e);
  auto it = std::lower_bound(terms_.begin(), terms_.end(), key,
                             [](const Term& t, std::uint64_t k) { return t.key < k; });
  if (it != terms_.end() && it->key == key) return it->c;
  return PadicRational::exact_zero(p_);
}

PadicRational TruncatedSeries::linear_coeff(std::size_t i) const {
  Exponents e(nvars(), 0);
  e.at(i) = 1;
  return coeff(e);
}

void TruncatedSeries::check_compatible(const TruncatedSeries& o) const {
  if (o.p_ != p_ || o.vars_ != vars_)
    throw Error(ErrorKind::VariableMismatch, "series over different variables or primes");
}

void TruncatedSeries::normalize_from(std::vector<Term>&& unsorted) {
  std::sort(unsorted.begin(), unsorted.end(), [](const Term& a, const Term& b) { return a.key < b.key; });
  terms_ = std::move(unsorted);
}

TruncatedSeries TruncatedSeries::operator-() const {
  TruncatedSeries r = *this;
  for (auto& t : r.terms_) t.c = -t.c;
  return r;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& o) {
  check_compatible(o);
  const int cap = std::min(max_deg_, o.max_deg_);
  std::vector<Term> merged;
  merged.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() || b != o.terms_.end()) {
    if (b == o.terms_.end() || (a != terms_.end() && a->key < b->key)) {
      merged.push_back(*a++);
    } else if (a == terms_.end() || b->key < a->key) {
      merged.push_back(*b++);
    } else {
      merged.push_back(Term{a->key, a->deg, a->c + b->c});
      ++a;
      ++b;
    }
  }
  if (cap < max_deg_ || cap < o.max_deg_)
    merged.erase(std::remove_if(merged.begin(), merged.end(), [cap](const Term& t) { return t.deg > cap; }),
                 merged.end());
  terms_ = std::move(merged);
  max_deg_ = cap;
  rel_ = std::min(rel_, o.rel_);
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& o) { return *this += -o; }

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  a.check_compatible(b);
  TruncatedSeries r = TruncatedSeries::zero_like(a);
  r.max_deg_ = std::min(a.max_deg_, b.max_deg_);
  r.rel_ = std::min(a.rel_, b.rel_);
  r.normalize_from(multiply_terms(a.terms_, b.terms_, r.max_deg_));
  return r;
}

TruncatedSeries TruncatedSeries::scaled(const PadicRational& c) const {
  TruncatedSeries r = *this;
  if (c.is_exact_zero()) {
    r.terms_.clear();
    return r;
  }
  for (auto& t : r.terms_) t.c *= c;
  return r;
}

TruncatedSeries TruncatedSeries::scaled(std::int64_t c) const {
  if (c == 0) return zero_like(*this);
  return scaled(PadicRational::from_int(p_, rel_, c));
}

TruncatedSeries TruncatedSeries::shifted(int k) const {
  TruncatedSeries r = *this;
  for (auto& t : r.terms_) t.c = t.c.shifted(k);
  return r;
}

TruncatedSeries TruncatedSeries::pow(unsigned e) const {
  TruncatedSeries result = constant_like(*this, PadicRational::from_int(p_, rel_, 1));
  TruncatedSeries base = *this;
  while (e) {
    if (e & 1u) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

TruncatedSeries TruncatedSeries::truncated(int max_degree) const {
  TruncatedSeries r = *this;
  if (max_degree >= max_deg_) return r;
  r.max_deg_ = max_degree;
  r.terms_.erase(
      std::remove_if(r.terms_.begin(), r.terms_.end(), [max_degree](const Term& t) { return t.deg > max_degree; }),
      r.terms_.end());
  return r;
}

TruncatedSeries TruncatedSeries::with_absolute_precision(int absolute_precision) const {
  TruncatedSeries r = *this;
  for (auto& t : r.terms_) t.c = t.c.with_absolute_precision(absolute_precision);
  return r;
}

TruncatedSeries TruncatedSeries::compose_level(const std::vector<TruncatedSeries>& args, std::size_t level,
                                               std::size_t begin, std::size_t end, int budget,
                                               const std::vector<int>& min_deg) const {
  const TruncatedSeries& arg = args[level];
  TruncatedSeries acc = zero_like(arg);
  if (budget < 0 || begin == end) return acc;

  // Runs of equal exponent in variable `level`, ascending.
  std::vector<std::pair<int, std::pair<std::size_t, std::size_t>>> runs;
  const int shift = bits_ * static_cast<int>(nvars() - 1 - level);
  const std::uint64_t mask = (bits_ == 64) ? ~0ull : ((1ull << bits_) - 1);
  for (std::size_t i = begin; i < end;) {
    const int e = static_cast<int>((terms_[i].key >> shift) & mask);
    std::size_t j = i;
    while (j < end && static_cast<int>((terms_[j].key >> shift) & mask) == e) ++j;
    runs.push_back({e, {i, j}});
    i = j;
  }

  auto drop_above = [](TruncatedSeries& s, int cap) {
    s.terms_.erase(std::remove_if(s.terms_.begin(), s.terms_.end(), [cap](const Term& t) { return t.deg > cap; }),
                   s.terms_.end());
  };

  int current = -1;
  for (auto it = runs.rbegin(); it != runs.rend(); ++it) {
    const int e = it->first;
    const int inner_budget = budget - e * min_deg[level];
    if (inner_budget < 0) continue;
    if (current >= 0) {
      for (int k = current - 1; k >= e; --k) {
        acc = acc * arg;
        drop_above(acc, budget - k * min_deg[level]);
      }
    }
    current = e;
    if (level + 1 == nvars()) {
      acc.add_term(Exponents(arg.nvars(), 0), terms_[it->second.first].c);
    } else {
      acc += compose_level(args, level + 1, it->second.first, it->second.second, inner_budget, min_deg);
    }
    drop_above(acc, inner_budget);
  }
  for (int k = 0; k < current; ++k) acc = acc * arg;
  drop_above(acc, budget);
  return acc;
}

TruncatedSeries TruncatedSeries::compose(const std::vector<TruncatedSeries>& args) const {
  if (args.size() != nvars()) throw Error(ErrorKind::VariableMismatch, "compose needs one argument per variable");
  std::vector<int> min_deg(args.size(), 1);
  for (std::size_t i = 0; i < args.size(); ++i) {
    args[i].check_compatible(args[0]);
    int md = args[i].max_degree() + 1;
    for (const auto& t : args[i].terms_) {
      if (t.deg == 0 && !t.c.is_zero())
        throw Error(ErrorKind::NonzeroConstantTerm, "argument " + std::to_string(i) + " has a constant term");
      if (t.deg > 0) md = std::min(md, t.deg);
    }
    min_deg[i] = md;
  }
  int budget = args[0].max_degree();
  for (const auto& a : args) budget = std::min(budget, a.max_degree());
  TruncatedSeries r = compose_level(args, 0, 0, terms_.size(), budget, min_deg);
  r.max_deg_ = budget;
  r.rel_ = std::min(rel_, r.rel_);
  return r;
}

TruncatedSeries TruncatedSeries::reversion() const {
  if (nvars() != 1) throw Error(ErrorKind::VariableMismatch, "reversion needs a univariate series");
  if (!constant_term().is_zero()) throw Error(ErrorKind::NonzeroConstantTerm, "reversion of a series with f(0) != 0");
  const PadicRational u = linear_coeff(0);
  if (u.is_zero() || u.valuation() != 0)
    throw Error(ErrorKind::NonUnitLinearCoefficient, "linear coefficient is not a unit: " + u.to_string());
  const PadicRational uinv = u.inverse();
  const TruncatedSeries t = variable(p_, vars_, max_deg_, rel_, 0);
  TruncatedSeries g = t.scaled(uinv);
  for (int iter = 0; iter < max_deg_; ++iter) {
    TruncatedSeries r = compose({g}) - t;
    if (r.is_zero()) break;
    g -= r.scaled(uinv);
  }
  return g;
}

TruncatedSeries TruncatedSeries::inverse() const {
  const PadicRational c = constant_term();
  if (c.is_zero()) throw Error(ErrorKind::DivisionByZero, "series with zero constant term is not invertible");
  const PadicRational cinv = c.inverse();
  TruncatedSeries h = scaled(cinv);
  h.add_term(Exponents(nvars(), 0), -PadicRational::from_int(p_, rel_, 1));
  h.terms_.erase(std::remove_if(h.terms_.begin(), h.terms_.end(), [](const Term& t) { return t.deg == 0; }),
                 h.terms_.end());
  // 1/(1+h) = sum (-h)^k
  TruncatedSeries geo(p_, {"s"}, max_deg_, rel_);
  for (int k = 0; k <= max_deg_; ++k) geo.add_term({k}, PadicRational::from_int(p_, rel_, (k % 2) ? -1 : 1));
  if (h.terms_.empty()) return constant_like(*this, cinv);
  return geo.compose({h}).scaled(cinv);
}

TruncatedSeries TruncatedSeries::derivative(std::size_t i) const {
  if (i >= nvars()) throw Error(ErrorKind::VariableMismatch, "derivative variable out of range");
  TruncatedSeries r = zero_like(*this);
  std::vector<Term> out;
  for (const auto& t : terms_) {
    Exponents e = exponents(t.key);
    if (e[i] == 0) continue;
    const int k = e[i];
    e[i] -= 1;
    out.push_back(Term{key_of(e), t.deg - 1, t.c * PadicRational::from_int(p_, rel_, k)});
  }
  r.normalize_from(std::move(out));
  return r;
}

TruncatedSeries TruncatedSeries::integral(std::size_t i) const {
  if (i >= nvars()) throw Error(ErrorKind::VariableMismatch, "integration variable out of range");
  TruncatedSeries r = zero_like(*this);
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.deg + 1 > max_deg_) continue;
    Exponents e = exponents(t.key);
    e[i] += 1;
    out.push_back(Term{key_of(e), t.deg + 1, t.c / PadicRational::from_int(p_, rel_, e[i])});
  }
  r.normalize_from(std::move(out));
  return r;
}

TruncatedSeries TruncatedSeries::substitute_zero(std::size_t i) const {
  if (i >= nvars()) throw Error(ErrorKind::VariableMismatch, "substitution variable out of range");
  TruncatedSeries r = zero_like(*this);
  const int shift = bits_ * static_cast<int>(nvars() - 1 - i);
  const std::uint64_t mask = (bits_ == 64) ? ~0ull : ((1ull << bits_) - 1);
  for (const auto& t : terms_)
    if (((t.key >> shift) & mask) == 0) r.terms_.push_back(t);
  return r;
}

TruncatedSeries TruncatedSeries::embed(const std::vector<std::string>& vars,
                                       const std::vector<std::size_t>& placement) const {
  if (placement.size() != nvars()) throw Error(ErrorKind::VariableMismatch, "placement has wrong length");
  TruncatedSeries r(p_, vars, max_deg_, rel_);
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Exponents e = exponents(t.key);
    Exponents ne(vars.size(), 0);
    for (std::size_t j = 0; j < e.size(); ++j) {
      if (placement[j] >= vars.size()) throw Error(ErrorKind::VariableMismatch, "placement out of range");
      ne[placement[j]] += e[j];
    }
    out.push_back(Term{r.key_of(ne), t.deg, t.c});
  }
  r.normalize_from(std::move(out));
  // Merge coincident keys when two old variables land on the same new one.
  std::vector<Term> merged;
  for (auto& t : r.terms_) {
    if (!merged.empty() && merged.back().key == t.key)
      merged.back().c += t.c;
    else
      merged.push_back(std::move(t));
  }
  r.terms_ = std::move(merged);
  return r;
}

TruncatedSeries TruncatedSeries::homogeneous_part(int d) const {
  TruncatedSeries r = zero_like(*this);
  for (const auto& t : terms_)
    if (t.deg == d) r.terms_.push_back(t);
  return r;
}

bool TruncatedSeries::is_zero() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.c.is_zero(); });
}

int TruncatedSeries::min_valuation() const {
  int v = PadicRational::kExact;
  for (const auto& t : terms_) v = std::min(v, t.c.valuation());
  return v;
}

int TruncatedSeries::precision() const {
  int v = PadicRational::kExact;
  for (const auto& t : terms_) v = std::min(v, t.c.absolute_precision());
  return v;
}

std::string TruncatedSeries::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (t.c.is_zero()) continue;
    const std::int64_t u = t.c.signed_unit();
    os << (first ? (u < 0 ? "-" : "") : (u < 0 ? " - " : " + "));
    first = false;
    const std::uint64_t au = static_cast<std::uint64_t>(u < 0 ? -u : u);
    const int v = t.c.valuation();
    std::ostringstream coef;
    coef << au;
    if (v > 0) coef << "*" << p_ << "^" << v;
    if (v < 0) coef << "/" << p_ << "^" << -v;
    const std::string cs = coef.str();
    const Exponents e = exponents(t.key);
    std::ostringstream mono;
    bool any = false;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      mono << (any ? "*" : "") << vars_[i];
      if (e[i] > 1) mono << "^" << e[i];
      any = true;
    }
    if (!any)
      os << cs;
    else if (cs == "1")
      os << mono.str();
    else
      os << cs << "*" << mono.str();
  }
  if (first) os << "0";
  os << " + O(deg " << (max_deg_ + 1) << ")";
  return os.str();
}

int residual_valuation(const TruncatedSeries& a, const TruncatedSeries& b) { return (a - b).min_valuation(); }

}  // namespace deltacrys
