#include "bernpairs/bernoulli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>

#include "bernpairs/errors.hpp"

namespace bernpairs {

namespace {

std::atomic<std::uint64_t> g_max_exact{20000};

// Rows of the boustrophedon triangle yield the zigzag numbers E_0, E_1, ...;
// E_{2j-1} is the tangent number T_j and
//   B_{2j} = (-1)^{j-1} 2j T_j / (4^j (4^j - 1)).
class ExactTable {
 public:
  ExactTable() {
    row_.emplace_back(1);
    even_.emplace_back(1);  // B_0
  }

  mpq_class even(std::uint64_t half) {
    std::lock_guard<std::mutex> lock(mu_);
    if (half >= even_.size()) extend(half);
    return even_[half];
  }

 private:
  void extend(std::uint64_t half) {
    // Round up so that nearby requests share one extension.
    const std::uint64_t target = std::min<std::uint64_t>((half | 31), max_exact_index() / 2);
    const std::uint64_t want = std::max(half, target);
    std::vector<mpz_class> next;
    while (even_.size() <= want) {
      const std::size_t n = row_.size();  // next row index
      next.assign(n + 1, 0);
      for (std::size_t i = 0; i < n; ++i) next[i + 1] = next[i] + row_[n - 1 - i];
      row_.swap(next);
      if (n % 2 == 1) {
        const std::uint64_t j = (n + 1) / 2;
        mpz_class four_j;
        mpz_ui_pow_ui(four_j.get_mpz_t(), 4, j);
        mpz_class num = row_.back() * 2 * static_cast<unsigned long>(j);
        if (j % 2 == 0) num = -num;
        mpq_class b(num, four_j * (four_j - 1));
        b.canonicalize();
        even_.push_back(std::move(b));
      }
    }
  }

  std::mutex mu_;
  std::vector<mpz_class> row_;
  std::vector<mpq_class> even_;
};

ExactTable& exact_table() {
  static ExactTable table;
  return table;
}

void check_exact_bound(std::uint64_t n) {
  if (n > max_exact_index())
    throw ResourceLimit("exact Bernoulli index " + std::to_string(n) + " exceeds bound " +
                        std::to_string(max_exact_index()));
}

void check_modular_args(std::uint64_t n, std::uint64_t p, unsigned k) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("index must be even and >= 2");
  if (p < 3 || !is_prime(p)) throw std::invalid_argument("modulus base must be an odd prime");
  if (k == 0) throw std::invalid_argument("precision k must be positive");
  if (n % (p - 1) == 0)
    throw PoleAtIndex("B_" + std::to_string(n) + "/" + std::to_string(n) +
                      " is not integral at " + std::to_string(p));
}

Residue mod_exact(std::uint64_t n, std::uint64_t modulus) {
  check_exact_bound(n);
  return divided_bernoulli_exact(n).mod(modulus);
}

// (1 - p^{n-1}) B_n/n on the class n == l (mod p-1), as a function of
// t = (n - l)/(p - 1), has Mahler coefficients c_i with p^i | c_i. Modulo p^k
// it is therefore the degree k-1 interpolant through t = 0..k-1.
Residue mod_interpolated(std::uint64_t n, std::uint64_t p, unsigned k, std::uint64_t modulus) {
  const std::uint64_t l = n % (p - 1);
  const std::uint64_t t = (n - l) / (p - 1);
  const std::uint64_t last_node = l + (k - 1) * (p - 1);
  if (last_node > max_exact_index())
    throw ResourceLimit("interpolation mod " + std::to_string(p) + "^" + std::to_string(k) +
                        " needs exact B up to index " + std::to_string(last_node));

  auto euler = [&](std::uint64_t m) {
    return Residue(1, modulus) - Residue(powmod(p, m - 1, modulus), modulus);
  };

  std::vector<Residue> node;
  node.reserve(k);
  for (unsigned j = 0; j < k; ++j) {
    const std::uint64_t nj = l + j * (p - 1);
    node.push_back(euler(nj) * mod_exact(nj, modulus));
  }

  Residue value(0, modulus);
  mpz_class binom;
  for (unsigned i = 0; i < k; ++i) {
    Residue diff(0, modulus);
    for (unsigned j = 0; j <= i; ++j) {
      mpz_bin_uiui(binom.get_mpz_t(), i, j);
      const Residue term = Residue::from_mpz(binom, modulus) * node[j];
      diff = ((i - j) % 2 == 0) ? diff + term : diff - term;
    }
    mpz_class t_big;
    mpz_import(t_big.get_mpz_t(), 1, 1, sizeof(t), 0, 0, &t);
    mpz_bin_ui(binom.get_mpz_t(), t_big.get_mpz_t(), i);
    value = value + diff * Residue::from_mpz(binom, modulus);
  }
  return value * euler(n).inverse();
}

// (a^n - 1) B_n == n a^{n-1} sum_{j<N} j^{n-1} floor(ja/N)  (mod N), N = p^{k+v}.
Residue mod_voronoi(std::uint64_t n, std::uint64_t p, unsigned k, std::uint64_t modulus) {
  const unsigned v = valuation(n, p);
  const std::uint64_t big = checked_pow(p, k + v);
  if (big > kVoronoiTermLimit)
    throw ResourceLimit("Voronoi sum needs " + std::to_string(big) + " terms");

  std::uint64_t a = 2;
  while (powmod(a, n, p) == 1) ++a;

  std::uint64_t sum = 0;
  for (std::uint64_t j = (big + a - 1) / a; j < big; ++j) {
    const std::uint64_t q = j * a / big;
    const std::uint64_t term = mulmod(powmod(j, n - 1, big), q, big);
    sum += term;
    if (sum >= big) sum -= big;
  }
  const Residue s(sum, modulus);
  const Residue ar(a, modulus);
  return ar.pow(n - 1) * s * (ar.pow(n) - Residue(1, modulus)).inverse();
}

}  // namespace

std::uint64_t max_exact_index() noexcept { return g_max_exact.load(std::memory_order_relaxed); }

void set_max_exact_index(std::uint64_t n) noexcept { g_max_exact.store(n, std::memory_order_relaxed); }

Rational bernoulli_exact(std::uint64_t n) {
  check_exact_bound(n);
  if (n == 1) return Rational(mpz_class(-1), mpz_class(2));
  if (n % 2 == 1) return Rational(0);
  return Rational(exact_table().even(n / 2));
}

Rational divided_bernoulli_exact(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("B_n/n needs n >= 1");
  return bernoulli_exact(n) / Rational(static_cast<long>(n));
}

NumeratorPair numerator_pair(std::uint64_t m) {
  if (m < 2 || m % 2 != 0) throw std::invalid_argument("numerator_pair needs even m >= 2");
  const Rational once = divided_bernoulli_exact(m);
  const Rational twice = once / Rational(static_cast<long>(m - 1));
  return {abs(once.numerator()), abs(twice.numerator())};
}

Residue BernoulliModP::at(std::uint64_t k) const {
  if (k < 2 || k % 2 != 0 || k + 3 > p_)
    throw std::out_of_range("index " + std::to_string(k) + " outside [2, p-3]");
  return {values_[k / 2 - 1], p_};
}

std::vector<std::uint64_t> BernoulliModP::zeros() const {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (values_[i] == 0) out.push_back(2 * i + 2);
  return out;
}

BernoulliModP bernoulli_mod_p_all(std::uint64_t p) {
  if (p < 5 || p > std::numeric_limits<std::uint32_t>::max() || !is_prime(p))
    throw std::invalid_argument("bernoulli_mod_p_all needs a prime 5 <= p < 2^32");

  // Invert (e^z - 1)/z = sum z^j/(j+1)! over F_p up to degree p-3. With
  // g = z/(e^z - 1) and f_j = 1/(j+1)!, for even n >= 2:
  //   g_n = -(f_n + g_1 f_{n-1} + sum_{even 2<=i<=n-2} g_i f_{n-i}),  g_1 = -1/2.
  const std::uint64_t top = p - 3;
  std::vector<std::uint64_t> fact(p - 1), inv_fact(p - 1);
  fact[0] = 1;
  for (std::uint64_t i = 1; i <= p - 2; ++i) fact[i] = fact[i - 1] * i % p;
  inv_fact[p - 2] = Residue(fact[p - 2], p).inverse().value();
  for (std::uint64_t i = p - 2; i >= 1; --i) inv_fact[i - 1] = inv_fact[i] * i % p;

  const std::uint64_t half_top = top / 2;
  // even_f[i] = f_{2i} = 1/(2i+1)!, stored reversed so the convolution runs forward.
  std::vector<std::uint32_t> rev_f(half_top + 1);
  for (std::uint64_t i = 0; i <= half_top; ++i)
    rev_f[half_top - i] = static_cast<std::uint32_t>(inv_fact[2 * i + 1]);
  std::vector<std::uint32_t> g(half_top + 1);
  g[0] = 1;

  const std::uint64_t inv2 = (p + 1) / 2;
  const std::uint64_t sq = (p - 1) * (p - 1);
  const std::uint64_t block = std::max<std::uint64_t>(1, std::numeric_limits<std::uint64_t>::max() / sq);

  std::vector<std::uint32_t> values(half_top);
  for (std::uint64_t m = 1; m <= half_top; ++m) {
    // sum_{i=1}^{m-1} g[i] * f_{2(m-i)}, f_{2(m-i)} = rev_f[half_top - m + i]
    const std::uint32_t* fp = rev_f.data() + (half_top - m);
    std::uint64_t acc = 0;
    for (std::uint64_t start = 1; start < m; start += block) {
      const std::uint64_t stop = std::min(m, start + block);
      std::uint64_t part = 0;
      for (std::uint64_t i = start; i < stop; ++i)
        part += static_cast<std::uint64_t>(g[i]) * fp[i];
      acc = (acc + part % p) % p;
    }
    // f_{2m} = inv_fact[2m+1]; g_1 f_{2m-1} = -inv2 * inv_fact[2m]
    std::uint64_t rhs = (acc + inv_fact[2 * m + 1]) % p;
    rhs = (rhs + p - inv2 * inv_fact[2 * m] % p) % p;
    const std::uint64_t gm = (p - rhs) % p;
    g[m] = static_cast<std::uint32_t>(gm);
    values[m - 1] = static_cast<std::uint32_t>(gm * fact[2 * m] % p);
  }
  return {p, std::move(values)};
}

Residue divided_bernoulli_mod_pk(std::uint64_t n, std::uint64_t p, unsigned k, ModularMethod method) {
  check_modular_args(n, p, k);
  const std::uint64_t modulus = checked_pow(p, k);
  switch (method) {
    case ModularMethod::kExact:
      return mod_exact(n, modulus);
    case ModularMethod::kInterpolation:
      return mod_interpolated(n, p, k, modulus);
    case ModularMethod::kVoronoi:
      return mod_voronoi(n, p, k, modulus);
    case ModularMethod::kAuto:
      break;
  }
  const std::uint64_t t = n / (p - 1);
  if (t < k) return mod_exact(n, modulus);
  return mod_interpolated(n, p, k, modulus);
}

}  // namespace bernpairs
