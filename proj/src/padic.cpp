#include "deltacrys/padic.hpp"

#include <array>
#include <ostream>
#include <sstream>

#include "deltacrys/error.hpp"

namespace deltacrys {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((static_cast<u128>(a) * b) % m); }

// Inverse of a unit modulo m (m a power of p).
u64 invmod(u64 a, u64 m) {
  std::int64_t t = 0, nt = 1;
  std::int64_t r = static_cast<std::int64_t>(m), nr = static_cast<std::int64_t>(a % m);
  while (nr != 0) {
    std::int64_t q = r / nr;
    std::int64_t tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw Error(ErrorKind::DivisionByZero, "element is not a unit");
  if (t < 0) t += static_cast<std::int64_t>(m);
  return static_cast<u64>(t);
}

u64 reduce_signed(std::int64_t v, u64 m) {
  if (v >= 0) return static_cast<u64>(v) % m;
  u64 r = static_cast<u64>(-(v + 1)) % m;  // avoids overflow at INT64_MIN
  return (m - 1 - r) % m;
}

u64 reduce_big(const BigInt& v, u64 m) {
  BigInt r = v % m;
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

constexpr u64 kLimit = u64{1} << 62;

}  // namespace

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::VariableMismatch: return "VariableMismatch";
    case ErrorKind::NonzeroConstantTerm: return "NonzeroConstantTerm";
    case ErrorKind::NonUnitLinearCoefficient: return "NonUnitLinearCoefficient";
    case ErrorKind::InexactDivision: return "InexactDivision";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::LengthTooShort: return "LengthTooShort";
    case ErrorKind::BadReduction: return "BadReduction";
    case ErrorKind::IdentityViolation: return "IdentityViolation";
    case ErrorKind::IntegralityViolation: return "IntegralityViolation";
    case ErrorKind::AmbiguousRank: return "AmbiguousRank";
    case ErrorKind::RankMismatch: return "RankMismatch";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

int max_precision(u64 p) {
  int k = 0;
  u64 v = 1;
  while (v <= (kLimit - 1) / p) {
    v *= p;
    ++k;
  }
  return k;
}

u64 ipow(u64 p, int k) {
  thread_local u64 cached_p = 0;
  thread_local std::array<u64, 64> table{};
  thread_local int table_len = 0;
  if (cached_p != p) {
    cached_p = p;
    table[0] = 1;
    table_len = 1;
    while (table_len < 64 && table[table_len - 1] <= (kLimit - 1) / p) {
      table[table_len] = table[table_len - 1] * p;
      ++table_len;
    }
  }
  if (k < 0 || k >= table_len)
    throw Error(ErrorKind::InvalidArgument, "p^" + std::to_string(k) + " exceeds the 62-bit kernel");
  return table[static_cast<std::size_t>(k)];
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

int valuation_of(const BigInt& n, u64 p) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "valuation of zero");
  BigInt m = n;
  int v = 0;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}

// ---------------------------------------------------------------- PadicScalar

PadicScalar PadicScalar::from_int(u64 p, int precision, std::int64_t value) {
  if (precision < 1) throw Error(ErrorKind::PrecisionExhausted, "scalar precision below 1");
  u64 m = ipow(p, precision);
  return PadicScalar(p, precision, m, reduce_signed(value, m));
}

PadicScalar PadicScalar::from_big(u64 p, int precision, const BigInt& value) {
  if (precision < 1) throw Error(ErrorKind::PrecisionExhausted, "scalar precision below 1");
  u64 m = ipow(p, precision);
  return PadicScalar(p, precision, m, reduce_big(value, m));
}

std::int64_t PadicScalar::signed_residue() const {
  if (r_ > mod_ / 2) return -static_cast<std::int64_t>(mod_ - r_);
  return static_cast<std::int64_t>(r_);
}

int PadicScalar::valuation() const {
  if (r_ == 0) return prec_;
  int v = 0;
  u64 r = r_;
  while (r % p_ == 0) {
    r /= p_;
    ++v;
  }
  return v;
}

PadicScalar PadicScalar::with_precision(int precision) const {
  if (precision >= prec_) return *this;
  if (precision < 1) throw Error(ErrorKind::PrecisionExhausted, "scalar precision below 1");
  u64 m = ipow(p_, precision);
  return PadicScalar(p_, precision, m, r_ % m);
}

PadicScalar PadicScalar::inverse() const {
  if (r_ == 0) throw Error(ErrorKind::DivisionByZero, "inverse of zero");
  if (!is_unit()) throw Error(ErrorKind::DivisionByZero, "inverse of a non-unit in Z_p");
  return PadicScalar(p_, prec_, mod_, invmod(r_, mod_));
}

PadicScalar PadicScalar::divide_by_p(int k) const {
  if (k == 0) return *this;
  if (prec_ - k < 1) throw Error(ErrorKind::PrecisionExhausted, "division by p^k exhausts precision");
  u64 pk = ipow(p_, k);
  if (r_ % pk != 0) throw Error(ErrorKind::InexactDivision, "not divisible by p^k");
  u64 m = ipow(p_, prec_ - k);
  return PadicScalar(p_, prec_ - k, m, (r_ / pk) % m);
}

void PadicScalar::align(const PadicScalar& o) {
  if (o.p_ != p_) throw Error(ErrorKind::InvalidArgument, "mixed primes");
  if (o.prec_ < prec_) {
    prec_ = o.prec_;
    mod_ = o.mod_;
    r_ %= mod_;
  }
}

PadicScalar PadicScalar::operator-() const { return PadicScalar(p_, prec_, mod_, r_ == 0 ? 0 : mod_ - r_); }

PadicScalar& PadicScalar::operator+=(const PadicScalar& o) {
  align(o);
  r_ = (r_ + o.r_ % mod_) % mod_;
  return *this;
}

PadicScalar& PadicScalar::operator-=(const PadicScalar& o) {
  align(o);
  r_ = (r_ + mod_ - o.r_ % mod_) % mod_;
  return *this;
}

PadicScalar& PadicScalar::operator*=(const PadicScalar& o) {
  align(o);
  r_ = mulmod(r_, o.r_ % mod_, mod_);
  return *this;
}

bool operator==(const PadicScalar& a, const PadicScalar& b) { return (a - b).is_zero(); }

std::string PadicScalar::to_string() const {
  std::ostringstream os;
  os << r_ << " + O(" << p_ << "^" << prec_ << ")";
  return os.str();
}

PadicScalar pow(const PadicScalar& x, u64 e) {
  PadicScalar result = PadicScalar::from_int(x.p(), x.precision(), 1);
  PadicScalar base = x;
  while (e) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

// -------------------------------------------------------------- PadicRational

PadicRational PadicRational::exact_zero(u64 p) {
  PadicRational r;
  r.p_ = p;
  return r;
}

PadicRational PadicRational::zero(u64 p, int absolute_precision) {
  PadicRational r;
  r.p_ = p;
  r.val_ = absolute_precision >= kExact ? kExact : absolute_precision;
  return r;
}

PadicRational PadicRational::from_parts(u64 p, int valuation, u64 unit, int relative_precision) {
  if (relative_precision < 1) return zero(p, valuation + std::max(relative_precision, 0));
  PadicRational r;
  r.p_ = p;
  r.mod_ = ipow(p, relative_precision);
  r.unit_ = unit % r.mod_;
  r.val_ = valuation;
  r.rel_ = relative_precision;
  if (r.unit_ == 0) return zero(p, valuation + relative_precision);
  // Normalize if the caller handed a non-unit.
  while (r.unit_ % p == 0) {
    r.unit_ /= p;
    ++r.val_;
    --r.rel_;
    r.mod_ /= p;
  }
  return r;
}

PadicRational PadicRational::from_int(u64 p, int relative_precision, std::int64_t value) {
  return from_big(p, relative_precision, BigInt(value));
}

PadicRational PadicRational::from_big(u64 p, int relative_precision, const BigInt& value) {
  if (value == 0) return exact_zero(p);
  int v = valuation_of(value, p);
  BigInt u = value;
  for (int i = 0; i < v; ++i) u /= p;
  u64 m = ipow(p, relative_precision);
  return from_parts(p, v, reduce_big(u, m), relative_precision);
}

PadicRational PadicRational::from_fraction(u64 p, int relative_precision, const BigInt& num,
                                           const BigInt& den) {
  if (den == 0) throw Error(ErrorKind::DivisionByZero, "zero denominator");
  return from_big(p, relative_precision, num) / from_big(p, relative_precision, den);
}

PadicRational PadicRational::from_scalar(const PadicScalar& s) {
  if (s.is_zero()) return zero(s.p(), s.precision());
  int v = s.valuation();
  u64 u = s.residue() / ipow(s.p(), v);
  return from_parts(s.p(), v, u, s.precision() - v);
}

PadicScalar PadicRational::unit() const {
  if (is_zero()) throw Error(ErrorKind::DivisionByZero, "unit part of zero");
  return PadicScalar::from_int(p_, rel_, static_cast<std::int64_t>(unit_));
}

PadicScalar PadicRational::to_scalar(int precision) const {
  if (val_ < 0) throw Error(ErrorKind::IntegralityViolation, "value is not in Z_p: " + to_string());
  int target = std::min(precision, absolute_precision());
  if (target < 1) throw Error(ErrorKind::PrecisionExhausted, "no p-adic digits known");
  if (is_zero() || val_ >= target) return PadicScalar::from_int(p_, target, 0);
  u64 m = ipow(p_, target);
  u64 r = mulmod(unit_ % m, ipow(p_, val_), m);
  return PadicScalar::from_big(p_, target, BigInt(r));
}

PadicRational PadicRational::with_absolute_precision(int absolute_precision) const {
  if (absolute_precision >= this->absolute_precision()) return *this;
  if (is_zero() || absolute_precision <= val_) return zero(p_, absolute_precision);
  return from_parts(p_, val_, unit_, absolute_precision - val_);
}

PadicRational PadicRational::inverse() const {
  if (is_zero()) throw Error(ErrorKind::DivisionByZero, "inverse of " + to_string());
  PadicRational r = *this;
  r.val_ = -val_;
  r.unit_ = invmod(unit_, mod_);
  return r;
}

PadicRational PadicRational::operator-() const {
  PadicRational r = *this;
  if (!is_zero()) r.unit_ = mod_ - unit_;
  return r;
}

PadicRational PadicRational::shifted(int k) const {
  if (is_exact_zero()) return *this;
  PadicRational r = *this;
  r.val_ += k;
  return r;
}

PadicRational& PadicRational::operator+=(const PadicRational& o) {
  if (o.is_exact_zero()) return *this;
  if (is_exact_zero()) return *this = o;
  const int abs = std::min(absolute_precision(), o.absolute_precision());
  if (is_zero()) return *this = o.with_absolute_precision(abs);
  if (o.is_zero()) return *this = with_absolute_precision(abs);
  const int v = std::min(val_, o.val_);
  if (abs <= v) return *this = zero(p_, abs);
  const int r = abs - v;
  const u64 m = ipow(p_, r);
  auto lift = [&](const PadicRational& x) -> u64 {
    int shift = x.val_ - v;
    if (shift >= r) return 0;
    return mulmod(x.unit_ % m, ipow(p_, shift), m);
  };
  u64 s = lift(*this) + lift(o);
  if (s >= m) s -= m;
  if (s == 0) return *this = zero(p_, abs);
  int k = 0;
  u64 mod = m;
  while (s % p_ == 0) {
    s /= p_;
    mod /= p_;
    ++k;
  }
  unit_ = s;
  mod_ = mod;
  val_ = v + k;
  rel_ = r - k;
  return *this;
}

PadicRational& PadicRational::operator*=(const PadicRational& o) {
  if (is_exact_zero() || o.is_exact_zero()) return *this = exact_zero(p_);
  if (is_zero() || o.is_zero()) {
    long long a = static_cast<long long>(val_) + o.val_;
    return *this = zero(p_, a >= kExact ? kExact : static_cast<int>(a));
  }
  if (rel_ > o.rel_) {
    rel_ = o.rel_;
    mod_ = o.mod_;
    unit_ %= mod_;
  }
  unit_ = mulmod(unit_, o.unit_ % mod_, mod_);
  val_ += o.val_;
  return *this;
}

bool operator==(const PadicRational& a, const PadicRational& b) { return (a - b).is_zero(); }

std::int64_t PadicRational::signed_unit() const {
  if (is_zero()) return 0;
  if (unit_ > mod_ / 2) return -static_cast<std::int64_t>(mod_ - unit_);
  return static_cast<std::int64_t>(unit_);
}

std::string PadicRational::to_string() const {
  std::ostringstream os;
  if (is_exact_zero()) {
    os << "0";
  } else if (is_zero()) {
    os << "O(" << p_ << "^" << val_ << ")";
  } else {
    os << unit_ << "*" << p_ << "^" << val_ << " + O(" << p_ << "^" << absolute_precision() << ")";
  }
  return os.str();
}

PadicRational pow(const PadicRational& x, u64 e) {
  if (e == 0) return PadicRational::from_int(x.p(), max_precision(x.p()), 1);
  PadicRational result = x;
  PadicRational base = x;
  --e;
  while (e) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

std::ostream& operator<<(std::ostream& os, const PadicScalar& x) { return os << x.to_string(); }
std::ostream& operator<<(std::ostream& os, const PadicRational& x) { return os << x.to_string(); }

}  // namespace deltacrys
