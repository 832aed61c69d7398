#pragma once

// Integer machinery: primality, factorization, almost-prime predicates,
// short-interval witness scanning and the modular arithmetic used by the
// Cayley-graph constructors.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace exforge::numtheory {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Exponent of the short interval (x - x^theta, x] known to contain an
/// integer with at most two prime factors.
inline constexpr double kWuExponent = 101.0 / 232.0;

/// Slack toward inclusion when comparing against x - x^theta.
inline constexpr double kIntervalGuard = 1e-9;

/// Trial division bound used before switching to Pollard rho.
inline constexpr u64 kTrialDivisionLimit = 1'000'000;

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

/// floor(sqrt(n)) exactly, for the full 64-bit range.
inline u64 isqrt(u64 n) {
  auto r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

/// Primes up to kTrialDivisionLimit, built once.
inline const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<bool> composite(kTrialDivisionLimit + 1, false);
    std::vector<std::uint32_t> out;
    for (u64 i = 2; i <= kTrialDivisionLimit; ++i) {
      if (composite[i]) continue;
      out.push_back(static_cast<std::uint32_t>(i));
      for (u64 j = i * i; j <= kTrialDivisionLimit; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

/// Deterministic Miller-Rabin; the first twelve prime bases cover all of 64 bits.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  constexpr std::array<u64, 12> bases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : bases) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (u64 a : bases) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

struct PrimePower {
  u64 prime;
  unsigned exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// An integer together with its prime factorization, primes ascending.
struct FactoredInteger {
  u64 n = 1;
  std::vector<PrimePower> factors;

  unsigned big_omega() const {
    unsigned total = 0;
    for (const auto& f : factors) total += f.exponent;
    return total;
  }

  u64 divisor_count() const {
    u64 total = 1;
    for (const auto& f : factors) total *= f.exponent + 1;
    return total;
  }
};

namespace detail {

// Brent's variant of Pollard rho. Returns a nontrivial factor of the odd
// composite n; the polynomial constant walks a fixed sequence so results
// are reproducible.
inline u64 pollard_brent(u64 n) {
  for (u64 c = 1;; ++c) {
    u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
    const u64 block = 128;
    auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
    for (u64 r = 1; g == 1; r <<= 1U) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      for (u64 k = 0; k < r && g == 1; k += block) {
        ys = y;
        for (u64 i = 0; i < std::min(block, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void split_large(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  u64 root = isqrt(n);
  if (root * root == n) {
    split_large(root, out);
    split_large(root, out);
    return;
  }
  u64 d = pollard_brent(n);
  split_large(d, out);
  split_large(n / d, out);
}

} // namespace detail

inline FactoredInteger factor(u64 n) {
  if (n == 0) throw std::invalid_argument("factor: n must be positive");
  FactoredInteger result{n, {}};
  u64 rest = n;
  for (std::uint32_t p : small_primes()) {
    if (static_cast<u64>(p) * p > rest) break;
    if (rest % p != 0) continue;
    unsigned e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    result.factors.push_back({p, e});
  }
  if (rest == 1) return result;
  if (is_prime(rest)) {
    result.factors.push_back({rest, 1});
    return result;
  }
  std::vector<u64> large;
  detail::split_large(rest, large);
  std::sort(large.begin(), large.end());
  for (u64 p : large) {
    if (!result.factors.empty() && result.factors.back().prime == p) {
      ++result.factors.back().exponent;
    } else {
      result.factors.push_back({p, 1});
    }
  }
  return result;
}

/// Number of prime factors counted with multiplicity.
inline unsigned big_omega(u64 n) { return factor(n).big_omega(); }

inline u64 divisor_count(u64 n) { return factor(n).divisor_count(); }

/// True for primes and semiprimes (Omega in {1, 2}).
inline bool is_p2(u64 n) {
  if (n < 2) return false;
  const unsigned omega = big_omega(n);
  return omega == 1 || omega == 2;
}

/// Left end x - x^theta of the almost-prime interval (exclusive).
inline double wu_interval_lo(u64 x) {
  const auto xd = static_cast<double>(x);
  return xd - std::pow(xd, kWuExponent);
}

inline bool in_wu_interval(u64 q, u64 x) {
  return q <= x && static_cast<double>(q) > wu_interval_lo(x) - kIntervalGuard;
}

struct P2Selection {
  u64 q;
  bool in_interval; ///< q > x - x^theta
};

inline P2Selection find_p2_at_or_below(u64 x) {
  if (x < 2) throw std::invalid_argument("find_p2_at_or_below: x must be at least 2");
  u64 q = x;
  while (!is_p2(q)) --q; // 2 is prime, so this terminates
  return {q, in_wu_interval(q, x)};
}

struct AlmostPrimeWitness {
  u64 x = 0;
  double interval_lo = 0.0;
  std::optional<u64> q; ///< absent when the interval holds no P2 number

  std::optional<u64> gap() const {
    if (!q) return std::nullopt;
    return x - *q;
  }
};

inline AlmostPrimeWitness wu_witness(u64 x) {
  if (x < 16) throw std::invalid_argument("wu_witness: x must be at least 16");
  AlmostPrimeWitness w{x, wu_interval_lo(x), std::nullopt};
  for (u64 q = x; in_wu_interval(q, x); --q) {
    if (is_p2(q)) {
      w.q = q;
      break;
    }
  }
  return w;
}

namespace detail {

// Omega(n) <= 2 flags for every n in [lo, hi] via a segmented sieve over the
// primes up to sqrt(hi). Requires sqrt(hi) within the small-prime table.
inline std::vector<bool> p2_flags(u64 lo, u64 hi) {
  const std::size_t width = hi - lo + 1;
  std::vector<u64> rest(width);
  std::vector<std::uint8_t> count(width, 0);
  for (std::size_t i = 0; i < width; ++i) rest[i] = lo + i;
  const u64 root = isqrt(hi);
  for (std::uint32_t p : small_primes()) {
    if (p > root) break;
    u64 first = (lo + p - 1) / p * p;
    for (u64 m = first; m <= hi; m += p) {
      const std::size_t i = m - lo;
      while (count[i] < 3 && rest[i] % p == 0) {
        rest[i] /= p;
        ++count[i];
      }
    }
  }
  std::vector<bool> flags(width);
  for (std::size_t i = 0; i < width; ++i) {
    unsigned omega = count[i];
    if (omega < 3 && rest[i] > 1) ++omega;
    flags[i] = (lo + i >= 2) && (omega == 1 || omega == 2);
  }
  return flags;
}

} // namespace detail

struct WuScanResult {
  std::vector<AlmostPrimeWitness> witnesses; ///< ascending x
  std::size_t absent = 0;
};

/// Witness records for x = lo, lo + stride, ..., up to hi.
inline WuScanResult wu_scan(u64 lo, u64 hi, u64 stride) {
  if (stride == 0) throw std::invalid_argument("wu_scan: stride must be positive");
  if (lo < 16) throw std::invalid_argument("wu_scan: lo must be at least 16");
  if (lo > hi) throw std::invalid_argument("wu_scan: empty range (lo > hi)");

  WuScanResult result;
  const u64 sieve_limit = kTrialDivisionLimit * kTrialDivisionLimit;
  constexpr u64 kWindow = u64{1} << 16;
  auto has_next = [&](u64 v) { return hi - v >= stride; };

  for (u64 x = lo;;) {
    // Chunk of sampled points spanning at most kWindow integers.
    std::vector<u64> points{x};
    while (has_next(points.back()) && points.back() + stride - x < kWindow) {
      points.push_back(points.back() + stride);
    }
    if (hi > sieve_limit) {
      for (u64 point : points) result.witnesses.push_back(wu_witness(point));
    } else {
      const auto window_lo = static_cast<u64>(std::max(1.0, std::floor(wu_interval_lo(x))));
      const auto flags = detail::p2_flags(window_lo, points.back());
      for (u64 point : points) {
        AlmostPrimeWitness w{point, wu_interval_lo(point), std::nullopt};
        for (u64 q = point; q >= window_lo && in_wu_interval(q, point); --q) {
          if (flags[q - window_lo]) {
            w.q = q;
            break;
          }
        }
        result.witnesses.push_back(w);
      }
    }
    if (!has_next(points.back())) break;
    x = points.back() + stride;
  }
  result.absent = static_cast<std::size_t>(std::count_if(
      result.witnesses.begin(), result.witnesses.end(), [](const auto& w) { return !w.q; }));
  return result;
}

namespace detail {

inline void require_odd_prime(u64 p, const char* op) {
  if (p < 3 || !is_prime(p)) {
    throw std::invalid_argument(std::string(op) + ": modulus " + std::to_string(p) +
                                " is not an odd prime");
  }
}

} // namespace detail

/// Legendre symbol by Euler's criterion.
inline int legendre(std::int64_t a, u64 p) {
  detail::require_odd_prime(p, "legendre");
  const auto sp = static_cast<std::int64_t>(p);
  const auto r = static_cast<u64>(((a % sp) + sp) % sp);
  if (r == 0) return 0;
  return pow_mod(r, (p - 1) / 2, p) == 1 ? 1 : -1;
}

/// Tonelli-Shanks square root; returns the smaller of the two roots.
inline u64 sqrt_mod(std::int64_t a, u64 p) {
  detail::require_odd_prime(p, "sqrt_mod");
  if (legendre(a, p) != 1) {
    throw std::domain_error("sqrt_mod: " + std::to_string(a) +
                            " is not a nonzero quadratic residue mod " + std::to_string(p));
  }
  const auto sp = static_cast<std::int64_t>(p);
  const auto n = static_cast<u64>(((a % sp) + sp) % sp);

  u64 q = p - 1;
  unsigned s = 0;
  while ((q & 1U) == 0) {
    q >>= 1U;
    ++s;
  }
  u64 z = 2;
  while (pow_mod(z, (p - 1) / 2, p) != p - 1) ++z;

  u64 m = s;
  u64 c = pow_mod(z, q, p);
  u64 t = pow_mod(n, q, p);
  u64 r = pow_mod(n, (q + 1) / 2, p);
  while (t != 1) {
    u64 i = 0;
    for (u64 tt = t; tt != 1; tt = mul_mod(tt, tt, p)) ++i;
    u64 b = c;
    for (u64 j = 0; j + i + 1 < m; ++j) b = mul_mod(b, b, p);
    m = i;
    c = mul_mod(b, b, p);
    t = mul_mod(t, c, p);
    r = mul_mod(r, b, p);
  }
  return std::min(r, p - r);
}

using FourSquares = std::array<std::int64_t, 4>;

/// All (a0, a1, a2, a3) with a0 > 0 odd, a1..a3 even and sum of squares p.
/// For a prime p = 1 (mod 4) there are exactly p + 1 of them.
inline std::vector<FourSquares> four_squares(u64 p) {
  if (!is_prime(p)) throw std::invalid_argument("four_squares: " + std::to_string(p) + " is not prime");
  if (p % 4 != 1) throw std::invalid_argument("four_squares: " + std::to_string(p) + " is not 1 mod 4");

  std::vector<FourSquares> out;
  const auto bound = static_cast<std::int64_t>(isqrt(p));
  const auto target = static_cast<std::int64_t>(p);
  for (std::int64_t a0 = 1; a0 <= bound; a0 += 2) {
    for (std::int64_t a1 = -bound + (bound & 1); a1 <= bound; a1 += 2) {
      for (std::int64_t a2 = -bound + (bound & 1); a2 <= bound; a2 += 2) {
        const std::int64_t rem = target - a0 * a0 - a1 * a1 - a2 * a2;
        if (rem < 0) continue;
        const auto a3 = static_cast<std::int64_t>(isqrt(static_cast<u64>(rem)));
        if (a3 * a3 != rem || (a3 & 1) != 0) continue;
        out.push_back({a0, a1, a2, -a3});
        if (a3 != 0) out.push_back({a0, a1, a2, a3});
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace exforge::numtheory
