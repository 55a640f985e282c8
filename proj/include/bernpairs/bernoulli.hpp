#pragma once

// Exact and modular Bernoulli numbers.
//
// B_n is defined by z/(e^z - 1) = sum B_n z^n / n!, so B_1 = -1/2 and
// B_n = 0 for odd n > 1. Exact values come from an integer-only boustrophedon
// (Seidel) triangle; modular values for a whole prime come from reducing the
// defining series over F_p.

#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "bernpairs/arith.hpp"

namespace bernpairs {

/// Largest index accepted by the exact routines. Default 20000; the CLI
/// overrides it from BERNPAIRS_MAX_EXACT_N.
std::uint64_t max_exact_index() noexcept;
void set_max_exact_index(std::uint64_t n) noexcept;

/// Exact B_n. Throws ResourceLimit above max_exact_index(). Results are cached
/// process-wide; safe to call concurrently.
Rational bernoulli_exact(std::uint64_t n);

/// Exact B_n / n for n >= 1.
Rational divided_bernoulli_exact(std::uint64_t n);

/// |num(B_m/m)| and |num(B_m/(m(m-1)))| for even m >= 2.
struct NumeratorPair {
  mpz_class divided;         // N1
  mpz_class doubly_divided;  // N2
};
NumeratorPair numerator_pair(std::uint64_t m);

/// B_k mod p for the even k in [2, p-3].
class BernoulliModP {
 public:
  BernoulliModP(std::uint64_t p, std::vector<std::uint32_t> even_values)
      : p_(p), values_(std::move(even_values)) {}

  std::uint64_t prime() const noexcept { return p_; }
  /// k even, 2 <= k <= p-3.
  Residue at(std::uint64_t k) const;
  /// Even k in [2, p-3] with p | B_k, ascending.
  std::vector<std::uint64_t> zeros() const;

 private:
  std::uint64_t p_;
  std::vector<std::uint32_t> values_;  // values_[i] = B_{2i+2} mod p
};

/// Requires an odd prime 5 <= p < 2^32. O(p^2/8) word operations.
BernoulliModP bernoulli_mod_p_all(std::uint64_t p);

enum class ModularMethod {
  kAuto,           // exact below the interpolation range, interpolation above
  kExact,          // reduce bernoulli_exact(n)/n
  kInterpolation,  // Kummer-class interpolation from the first k exact nodes
  kVoronoi,        // Voronoi congruence, p^{k+v_p(n)} terms
};

/// The p-integral number B_n/n reduced mod p^k, for even n >= 2 with
/// (p-1) not dividing n. Throws PoleAtIndex when (p-1) | n and ResourceLimit
/// when the selected method is infeasible under the configured bounds.
Residue divided_bernoulli_mod_pk(std::uint64_t n, std::uint64_t p, unsigned k,
                                 ModularMethod method = ModularMethod::kAuto);

/// Largest p^{k+v} the Voronoi route will sum over.
inline constexpr std::uint64_t kVoronoiTermLimit = 50'000'000;

}  // namespace bernpairs
