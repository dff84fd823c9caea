#include "deltacrys/exact_poly.hpp"

#include <sstream>
#include <unordered_map>

#include "deltacrys/error.hpp"

namespace deltacrys {

namespace {
constexpr int kBits = 8;
constexpr std::uint64_t kMask = 0xff;
}  // namespace

ExactPoly::ExactPoly(std::size_t nvars) : nv_(nvars) {
  if (nvars == 0 || nvars > 8) throw Error(ErrorKind::InvalidArgument, "exact polynomials support 1..8 variables");
}

ExactPoly ExactPoly::variable(std::size_t nvars, std::size_t i) {
  ExactPoly r(nvars);
  Exps e(nvars, 0);
  e.at(i) = 1;
  r.add_term(e, 1);
  return r;
}

ExactPoly ExactPoly::constant(std::size_t nvars, const BigInt& c) {
  ExactPoly r(nvars);
  r.add_term(Exps(nvars, 0), c);
  return r;
}

ExactPoly::Exps ExactPoly::exponents(std::uint64_t key) const {
  Exps e(nv_, 0);
  for (std::size_t i = nv_; i-- > 0;) {
    e[i] = static_cast<int>(key & kMask);
    key >>= kBits;
  }
  return e;
}

std::uint64_t ExactPoly::key_of(const Exps& e) const {
  if (e.size() != nv_) throw Error(ErrorKind::VariableMismatch, "exponent tuple has wrong length");
  std::uint64_t key = 0;
  for (int x : e) {
    if (x < 0 || x > 255) throw Error(ErrorKind::InvalidArgument, "exponent outside 0..255");
    key = (key << kBits) | static_cast<std::uint64_t>(x);
  }
  return key;
}

void ExactPoly::add_term(const Exps& e, const BigInt& c) {
  if (c == 0) return;
  const auto key = key_of(e);
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

BigInt ExactPoly::coeff(const Exps& e) const {
  auto it = terms_.find(key_of(e));
  return it == terms_.end() ? BigInt(0) : it->second;
}

int ExactPoly::total_degree() const {
  int d = -1;
  for (const auto& [key, c] : terms_) {
    int s = 0;
    for (int x : exponents(key)) s += x;
    d = std::max(d, s);
  }
  return d;
}

ExactPoly ExactPoly::operator-() const {
  ExactPoly r = *this;
  for (auto& [k, c] : r.terms_) c = -c;
  return r;
}

ExactPoly& ExactPoly::operator+=(const ExactPoly& o) {
  if (o.nv_ != nv_) throw Error(ErrorKind::VariableMismatch, "exact polynomials over different variable counts");
  for (const auto& [k, c] : o.terms_) {
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

ExactPoly& ExactPoly::operator-=(const ExactPoly& o) { return *this += -o; }

ExactPoly operator*(const ExactPoly& a, const ExactPoly& b) {
  if (a.nv_ != b.nv_) throw Error(ErrorKind::VariableMismatch, "exact polynomials over different variable counts");
  std::unordered_map<std::uint64_t, BigInt> acc;
  acc.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& [ka, ca] : a.terms_) {
    const auto ea = a.exponents(ka);
    for (const auto& [kb, cb] : b.terms_) {
      const auto eb = b.exponents(kb);
      for (std::size_t i = 0; i < ea.size(); ++i)
        if (ea[i] + eb[i] > 255) throw Error(ErrorKind::InvalidArgument, "exponent overflow in exact product");
      acc[ka + kb] += ca * cb;
    }
  }
  ExactPoly r(a.nv_);
  for (auto& [k, c] : acc)
    if (c != 0) r.terms_.emplace(k, std::move(c));
  return r;
}

ExactPoly ExactPoly::scaled(const BigInt& c) const {
  if (c == 0) return ExactPoly(nv_);
  ExactPoly r = *this;
  for (auto& [k, v] : r.terms_) v *= c;
  return r;
}

ExactPoly ExactPoly::pow(std::uint64_t e) const {
  ExactPoly result = constant(nv_, 1);
  ExactPoly base = *this;
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

ExactPoly ExactPoly::divided_exact(const BigInt& d) const {
  if (d == 0) throw Error(ErrorKind::DivisionByZero, "exact division by zero");
  ExactPoly r = *this;
  for (auto& [k, v] : r.terms_) {
    if (v % d != 0) throw Error(ErrorKind::InexactDivision, "coefficient not divisible");
    v /= d;
  }
  return r;
}

BigInt ExactPoly::evaluate(const std::vector<BigInt>& x) const {
  if (x.size() != nv_) throw Error(ErrorKind::VariableMismatch, "wrong number of evaluation points");
  return evaluate_in<BigInt>(x, BigInt(0), BigInt(1), [](const BigInt& c) { return c; });
}

std::string ExactPoly::to_string(const std::vector<std::string>& names) const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [key, c] : terms_) {
    const bool neg = c < 0;
    const BigInt a = neg ? BigInt(-c) : c;
    os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
    first = false;
    const auto e = exponents(key);
    bool any = false;
    std::ostringstream mono;
    for (std::size_t i = 0; i < nv_; ++i) {
      if (e[i] == 0) continue;
      mono << (any ? "*" : "") << names.at(i);
      if (e[i] > 1) mono << "^" << e[i];
      any = true;
    }
    if (!any)
      os << a;
    else if (a == 1)
      os << mono.str();
    else
      os << a << "*" << mono.str();
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace deltacrys
