#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "deltacrys/padic.hpp"

namespace deltacrys {

using Exponents = std::vector<int>;

/// Multivariate power series over Q_p truncated at total degree max_degree.
///
/// Terms are kept sorted by packed exponent key (variable 0 most significant),
/// so iteration order is lexicographic in the exponent tuple. A coefficient
/// that is zero only to some precision is kept: it records how much is known.
/// `working_precision` is the relative precision given to integer constants
/// created by the series itself (e.g. the 1 in a variable).
class TruncatedSeries {
 public:
  struct Term {
    std::uint64_t key;
    int deg;
    PadicRational c;
  };

  TruncatedSeries() = default;
  TruncatedSeries(std::uint64_t p, std::vector<std::string> vars, int max_degree, int working_precision);

  static TruncatedSeries variable(std::uint64_t p, const std::vector<std::string>& vars, int max_degree,
                                  int working_precision, std::size_t index);
  /// A series with the same shape as `like` and no terms.
  static TruncatedSeries zero_like(const TruncatedSeries& like);
  static TruncatedSeries constant_like(const TruncatedSeries& like, const PadicRational& c);

  std::uint64_t p() const { return p_; }
  const std::vector<std::string>& variables() const { return vars_; }
  std::size_t nvars() const { return vars_.size(); }
  int max_degree() const { return max_deg_; }
  int working_precision() const { return rel_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  std::uint64_t key_of(const Exponents& e) const;
  Exponents exponents(std::uint64_t key) const;

  /// Adds c·x^e (ignored when deg e > max_degree).
  void add_term(const Exponents& e, const PadicRational& c);
  PadicRational coeff(const Exponents& e) const;
  /// Coefficient of the i-th variable to the first power.
  PadicRational linear_coeff(std::size_t i) const;
  PadicRational constant_term() const { return coeff(Exponents(nvars(), 0)); }

  TruncatedSeries operator-() const;
  TruncatedSeries& operator+=(const TruncatedSeries& o);
  TruncatedSeries& operator-=(const TruncatedSeries& o);
  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);

  TruncatedSeries scaled(const PadicRational& c) const;
  TruncatedSeries scaled(std::int64_t c) const;
  /// Multiply every coefficient by p^k.
  TruncatedSeries shifted(int k) const;
  TruncatedSeries pow(unsigned e) const;
  TruncatedSeries truncated(int max_degree) const;
  TruncatedSeries with_absolute_precision(int absolute_precision) const;

  /// f(args): every arg must share one variable list and have zero constant term.
  /// The result lives in the args' variables, truncated at the args' degree.
  TruncatedSeries compose(const std::vector<TruncatedSeries>& args) const;
  /// Compositional inverse of a univariate f = u·t + O(t²) with u a unit.
  TruncatedSeries reversion() const;
  /// Multiplicative inverse; the constant term must be nonzero.
  TruncatedSeries inverse() const;

  TruncatedSeries derivative(std::size_t i) const;
  /// Antiderivative in variable i with zero constant of integration.
  TruncatedSeries integral(std::size_t i) const;
  /// Sets variable i to 0 (the variable list is unchanged).
  TruncatedSeries substitute_zero(std::size_t i) const;
  /// Re-expresses the series over `vars`; old variable j becomes vars[placement[j]].
  TruncatedSeries embed(const std::vector<std::string>& vars, const std::vector<std::size_t>& placement) const;
  /// Keeps only the terms of total degree exactly d.
  TruncatedSeries homogeneous_part(int d) const;

  bool is_zero() const;
  /// Minimum valuation over stored coefficients; a coefficient that is zero
  /// contributes its absolute precision. Empty series give kExact.
  int min_valuation() const;
  /// Minimum absolute precision over stored coefficients (kExact if none).
  int precision() const;

  /// "c*x^2*y + ..." with coefficients in signed-unit form.
  std::string to_string() const;

 private:
  void check_compatible(const TruncatedSeries& o) const;
  void normalize_from(std::vector<Term>&& unsorted);
  TruncatedSeries compose_level(const std::vector<TruncatedSeries>& args, std::size_t level, std::size_t begin,
                                std::size_t end, int budget, const std::vector<int>& min_deg) const;

  std::uint64_t p_ = 3;
  std::vector<std::string> vars_;
  int max_deg_ = 0;
  int rel_ = 1;
  int bits_ = 32;
  std::vector<Term> terms_;
};

/// Residual valuation of a − b: min_valuation of the difference.
int residual_valuation(const TruncatedSeries& a, const TruncatedSeries& b);

}  // namespace deltacrys
