#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "deltacrys/padic.hpp"

namespace deltacrys {

/// Multivariate polynomial with exact integer coefficients, at most 8
/// variables and per-variable exponent at most 255.
class ExactPoly {
 public:
  using Exps = std::vector<int>;

  explicit ExactPoly(std::size_t nvars = 1);
  static ExactPoly variable(std::size_t nvars, std::size_t i);
  static ExactPoly constant(std::size_t nvars, const BigInt& c);

  std::size_t nvars() const { return nv_; }
  const std::map<std::uint64_t, BigInt>& terms() const { return terms_; }
  Exps exponents(std::uint64_t key) const;
  std::uint64_t key_of(const Exps& e) const;
  void add_term(const Exps& e, const BigInt& c);
  BigInt coeff(const Exps& e) const;
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;

  ExactPoly operator-() const;
  ExactPoly& operator+=(const ExactPoly& o);
  ExactPoly& operator-=(const ExactPoly& o);
  friend ExactPoly operator+(ExactPoly a, const ExactPoly& b) { return a += b; }
  friend ExactPoly operator-(ExactPoly a, const ExactPoly& b) { return a -= b; }
  friend ExactPoly operator*(const ExactPoly& a, const ExactPoly& b);
  friend bool operator==(const ExactPoly& a, const ExactPoly& b) { return a.nv_ == b.nv_ && a.terms_ == b.terms_; }

  ExactPoly scaled(const BigInt& c) const;
  ExactPoly pow(std::uint64_t e) const;
  /// Division of every coefficient by d; throws InexactDivision if any is not divisible.
  ExactPoly divided_exact(const BigInt& d) const;

  BigInt evaluate(const std::vector<BigInt>& x) const;
  /// Evaluates in any commutative ring T; `lift` maps an integer coefficient into T.
  template <class T, class Lift>
  T evaluate_in(const std::vector<T>& x, const T& zero, const T& one, Lift lift) const;

  std::string to_string(const std::vector<std::string>& names) const;

 private:
  std::size_t nv_;
  std::map<std::uint64_t, BigInt> terms_;
};

template <class T, class Lift>
T ExactPoly::evaluate_in(const std::vector<T>& x, const T& zero, const T& one, Lift lift) const {
  std::vector<std::vector<T>> powers(nv_);
  for (const auto& [key, c] : terms_) {
    Exps e = exponents(key);
    for (std::size_t i = 0; i < nv_; ++i) {
      auto& pw = powers[i];
      if (pw.empty()) pw.push_back(one);
      while (static_cast<int>(pw.size()) <= e[i]) pw.push_back(pw.back() * x[i]);
    }
  }
  T acc = zero;
  for (const auto& [key, c] : terms_) {
    Exps e = exponents(key);
    T term = lift(c);
    for (std::size_t i = 0; i < nv_; ++i)
      if (e[i] > 0) term = term * powers[i][static_cast<std::size_t>(e[i])];
    acc = acc + term;
  }
  return acc;
}

}  // namespace deltacrys
