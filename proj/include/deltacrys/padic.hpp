#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace deltacrys {

using BigInt = boost::multiprecision::cpp_int;

/// p^k, for k <= max_precision(p). Uses a per-thread table for the last p.
std::uint64_t ipow(std::uint64_t p, int k);

/// Largest k such that p^k < 2^62; residues modulo p^k fit the 64-bit kernels.
int max_precision(std::uint64_t p);

bool is_prime(std::uint64_t n);

/// v_p of a nonzero big integer.
int valuation_of(const BigInt& n, std::uint64_t p);

// An element of Z_p known modulo p^precision (absolute precision).
class PadicScalar {
 public:
  PadicScalar() = default;

  static PadicScalar from_int(std::uint64_t p, int precision, std::int64_t value);
  static PadicScalar from_big(std::uint64_t p, int precision, const BigInt& value);

  std::uint64_t p() const { return p_; }
  int precision() const { return prec_; }
  std::uint64_t residue() const { return r_; }
  std::uint64_t modulus() const { return mod_; }
  /// Representative in (-p^N/2, p^N/2].
  std::int64_t signed_residue() const;

  bool is_zero() const { return r_ == 0; }
  bool is_unit() const { return r_ % p_ != 0; }
  /// Exact valuation when nonzero, otherwise the precision (meaning ">= N").
  int valuation() const;

  PadicScalar with_precision(int precision) const;
  /// Multiplicative inverse; the operand must be a unit.
  PadicScalar inverse() const;
  /// Exact division by p^k; requires valuation >= k, loses k digits.
  PadicScalar divide_by_p(int k) const;

  PadicScalar operator-() const;
  PadicScalar& operator+=(const PadicScalar& o);
  PadicScalar& operator-=(const PadicScalar& o);
  PadicScalar& operator*=(const PadicScalar& o);
  friend PadicScalar operator+(PadicScalar a, const PadicScalar& b) { return a += b; }
  friend PadicScalar operator-(PadicScalar a, const PadicScalar& b) { return a -= b; }
  friend PadicScalar operator*(PadicScalar a, const PadicScalar& b) { return a *= b; }

  /// Equality modulo the smaller of the two precisions.
  friend bool operator==(const PadicScalar& a, const PadicScalar& b);

  std::string to_string() const;

 private:
  PadicScalar(std::uint64_t p, int prec, std::uint64_t mod, std::uint64_t r)
      : p_(p), prec_(prec), mod_(mod), r_(r) {}
  void align(const PadicScalar& o);

  std::uint64_t p_ = 3;
  int prec_ = 1;
  std::uint64_t mod_ = 3;
  std::uint64_t r_ = 0;
};

PadicScalar pow(const PadicScalar& x, std::uint64_t e);

/// An element of Q_p stored as unit * p^valuation with a capped relative
/// precision. A zero value records the absolute precision it is known to
/// ("O(p^w)"); the exact zero has unbounded precision.
class PadicRational {
 public:
  static constexpr int kExact = 1 << 28;

  PadicRational() = default;

  static PadicRational exact_zero(std::uint64_t p);
  static PadicRational zero(std::uint64_t p, int absolute_precision);
  static PadicRational from_int(std::uint64_t p, int relative_precision, std::int64_t value);
  static PadicRational from_big(std::uint64_t p, int relative_precision, const BigInt& value);
  /// num/den with den != 0.
  static PadicRational from_fraction(std::uint64_t p, int relative_precision, const BigInt& num,
                                     const BigInt& den);
  static PadicRational from_scalar(const PadicScalar& s);
  /// unit * p^valuation, where unit is reduced to relative_precision digits.
  static PadicRational from_parts(std::uint64_t p, int valuation, std::uint64_t unit,
                                  int relative_precision);

  std::uint64_t p() const { return p_; }
  bool is_zero() const { return unit_ == 0; }
  bool is_exact_zero() const { return unit_ == 0 && val_ >= kExact; }
  /// Valuation when nonzero; the absolute precision when zero.
  int valuation() const { return val_; }
  int relative_precision() const { return rel_; }
  int absolute_precision() const { return is_zero() ? val_ : val_ + rel_; }
  std::uint64_t unit_residue() const { return unit_; }
  PadicScalar unit() const;
  bool is_integral() const { return val_ >= 0; }

  /// Reduce to a Z_p element known modulo p^precision (capped by what is known).
  /// Requires valuation >= 0.
  PadicScalar to_scalar(int precision) const;
  /// Drop digits beyond the given absolute precision.
  PadicRational with_absolute_precision(int absolute_precision) const;

  PadicRational inverse() const;
  PadicRational operator-() const;
  PadicRational& operator+=(const PadicRational& o);
  PadicRational& operator-=(const PadicRational& o) { return *this += -o; }
  PadicRational& operator*=(const PadicRational& o);
  PadicRational& operator/=(const PadicRational& o) { return *this *= o.inverse(); }
  friend PadicRational operator+(PadicRational a, const PadicRational& b) { return a += b; }
  friend PadicRational operator-(PadicRational a, const PadicRational& b) { return a -= b; }
  friend PadicRational operator*(PadicRational a, const PadicRational& b) { return a *= b; }
  friend PadicRational operator/(PadicRational a, const PadicRational& b) { return a /= b; }

  /// Multiply by p^k (k may be negative); no precision is lost.
  PadicRational shifted(int k) const;

  /// Equal modulo the smaller absolute precision.
  friend bool operator==(const PadicRational& a, const PadicRational& b);

  /// Signed representative of the unit in (-p^r/2, p^r/2].
  std::int64_t signed_unit() const;

  /// "u*p^v + O(p^w)"; zero prints as "O(p^w)" and exact zero as "0".
  std::string to_string() const;

 private:
  std::uint64_t unit_ = 0;
  std::uint64_t mod_ = 1;  // p^rel_
  int val_ = kExact;
  int rel_ = 0;
  std::uint64_t p_ = 3;
};

PadicRational pow(const PadicRational& x, std::uint64_t e);

std::ostream& operator<<(std::ostream& os, const PadicScalar& x);
std::ostream& operator<<(std::ostream& os, const PadicRational& x);

}  // namespace deltacrys
