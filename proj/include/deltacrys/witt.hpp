#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "deltacrys/context.hpp"
#include "deltacrys/exact_poly.hpp"
#include "deltacrys/padic.hpp"

namespace deltacrys {

/// p-typical Witt vector (a_0, ..., a_n) with components in Z_p mod p^N.
struct WittVector {
  std::vector<PadicScalar> a;

  std::size_t length() const { return a.size(); }
  int level() const { return static_cast<int>(a.size()) - 1; }
  /// "[a0, a1, ...]" with symmetric residues.
  std::string to_string() const;
};

WittVector witt_from_ints(const Context& ctx, const std::vector<std::int64_t>& comps);

/// Universal addition, multiplication, negation and Frobenius polynomials of
/// level n in variables X_0..X_n, Y_0..Y_n (Frob uses only the X's).
struct StructurePolySet {
  std::uint64_t p = 0;
  int n = 0;
  std::vector<ExactPoly> S, P, Neg, Frob;
  std::vector<std::string> names() const;
};

/// Derived by the ghost recursion with exact integer division and checked
/// against the ghost identities before return. Cached per (p, n); n <= 2.
std::shared_ptr<const StructurePolySet> structure_polynomials(const Context& ctx, int n);

/// w_i(X_0..X_i) = sum_j p^j X_j^{p^{i-j}} as an exact polynomial in
/// `nvars` variables, with X_j at index offset + j.
ExactPoly ghost_polynomial(std::uint64_t p, int i, std::size_t nvars, std::size_t offset);

/// Ghost components as exact integers of the lifted residues.
std::vector<BigInt> ghost(const WittVector& w, std::uint64_t p);

enum class WittOp { Add, Mul, Neg };
enum class WittBackend { StructurePolynomials, GhostLift };

WittVector witt_arith(const Context& ctx, const WittVector& a, const WittVector& b, WittOp op,
                      WittBackend backend = WittBackend::StructurePolynomials);
WittVector witt_add(const Context& ctx, const WittVector& a, const WittVector& b);
WittVector witt_mul(const Context& ctx, const WittVector& a, const WittVector& b);
WittVector witt_neg(const Context& ctx, const WittVector& a);

/// F: W_n -> W_{n-1}, ghost(F a) = (w_1(a), ..., w_n(a)).
WittVector witt_frobenius(const Context& ctx, const WittVector& a);
/// T: drop the last component.
WittVector witt_truncate(const WittVector& a);
/// V: (a_0..a_n) -> (0, a_0..a_n).
WittVector witt_verschiebung(const WittVector& a);
WittVector teichmuller(const PadicScalar& c, std::size_t length);

/// delta(x) = (x - x^p)/p, known to precision N-1.
PadicScalar delta_map(const PadicScalar& x);
/// C_p(x, y) = (x^p + y^p - (x+y)^p)/p, known to precision N-1.
PadicScalar carry_polynomial(const PadicScalar& x, const PadicScalar& y);

struct DeltaAxiomFailure {
  std::string axiom;
  std::int64_t x, y;
};

struct DeltaAxiomReport {
  int samples = 0;
  std::vector<DeltaAxiomFailure> failures;
  bool ok() const { return failures.empty(); }
};

/// Checks delta(0)=delta(1)=0, additivity with the carry and the product rule
/// on `samples` random pairs.
DeltaAxiomReport check_delta_axioms(const Context& ctx, int samples, std::uint64_t seed = 1);

}  // namespace deltacrys
