#pragma once

// Explicit base graphs: reference families with closed-form spectra and the
// LPS Cayley graphs over PSL(2, q) / PGL(2, q).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "exforge/graph.hpp"
#include "exforge/numtheory.hpp"

namespace exforge::constructions {

using numtheory::u64;

inline RegularGraph complete_graph(std::size_t m) {
  if (m < 2) throw std::invalid_argument("complete_graph: need at least 2 vertices");
  AdjacencyRows rows(m);
  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t v = 0; v < m; ++v) {
      if (u != v) rows[u].push_back({static_cast<vertex_t>(v), 1});
    }
  }
  return validate(std::move(rows), static_cast<unsigned>(m - 1), "complete:" + std::to_string(m))
      .value();
}

inline RegularGraph cycle_graph(std::size_t m) {
  if (m < 3) throw std::invalid_argument("cycle_graph: need at least 3 vertices");
  AdjacencyRows rows(m);
  for (std::size_t u = 0; u < m; ++u) {
    rows[u].push_back({static_cast<vertex_t>((u + 1) % m), 1});
    rows[u].push_back({static_cast<vertex_t>((u + m - 1) % m), 1});
  }
  return validate(std::move(rows), 2, "cycle:" + std::to_string(m)).value();
}

/// Q_d with vertex i joined to i xor 2^j.
inline RegularGraph hypercube(unsigned d) {
  if (d < 1 || d > 20) throw std::invalid_argument("hypercube: dimension must be in [1, 20]");
  const std::size_t n = std::size_t{1} << d;
  AdjacencyRows rows(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (unsigned j = 0; j < d; ++j) rows[u].push_back({static_cast<vertex_t>(u ^ (std::size_t{1} << j)), 1});
  }
  return validate(std::move(rows), d, "hypercube:" + std::to_string(d)).value();
}

/// Kneser graph K(5, 2).
inline RegularGraph petersen_graph() {
  std::vector<unsigned> pairs;
  for (unsigned a = 0; a < 5; ++a) {
    for (unsigned b = a + 1; b < 5; ++b) pairs.push_back((1U << a) | (1U << b));
  }
  AdjacencyRows rows(pairs.size());
  for (std::size_t u = 0; u < pairs.size(); ++u) {
    for (std::size_t v = 0; v < pairs.size(); ++v) {
      if ((pairs[u] & pairs[v]) == 0) rows[u].push_back({static_cast<vertex_t>(v), 1});
    }
  }
  return validate(std::move(rows), 3, "petersen").value();
}

/// x ~ y iff x - y is a nonzero square mod q.
inline RegularGraph paley_graph(u64 q) {
  if (!numtheory::is_prime(q)) throw std::invalid_argument("paley_graph: " + std::to_string(q) + " is not prime");
  if (q % 4 != 1) throw std::invalid_argument("paley_graph: " + std::to_string(q) + " is not 1 mod 4");
  std::vector<bool> residue(q, false);
  for (u64 x = 1; x < q; ++x) residue[x * x % q] = true;
  AdjacencyRows rows(q);
  for (u64 u = 0; u < q; ++u) {
    for (u64 v = 0; v < q; ++v) {
      if (u != v && residue[(u + q - v) % q]) rows[u].push_back({static_cast<vertex_t>(v), 1});
    }
  }
  return validate(std::move(rows), static_cast<unsigned>((q - 1) / 2), "paley:" + std::to_string(q))
      .value();
}

enum class LpsKind { non_bipartite, bipartite };

inline const char* to_string(LpsKind k) {
  return k == LpsKind::bipartite ? "bipartite" : "non-bipartite";
}

/// Degree parameter p and field size q of an LPS graph X^{p,q}.
struct LpsParameters {
  u64 p;
  u64 q;
  LpsKind kind;

  u64 degree() const { return p + 1; }
  u64 vertex_count() const {
    const u64 pgl = q * (q * q - 1);
    return kind == LpsKind::bipartite ? pgl : pgl / 2;
  }
};

/// q admissible as an LPS companion of p: prime, 1 mod 4, distinct from p,
/// and q > 2 sqrt(p) so the Cayley graph is simple.
inline bool lps_admissible_companion(u64 p, u64 q) {
  return q != p && q % 4 == 1 && numtheory::is_prime(q) && q * q > 4 * p;
}

inline LpsParameters make_lps_parameters(u64 p, u64 q) {
  if (!numtheory::is_prime(p)) throw std::invalid_argument("lps: p = " + std::to_string(p) + " is not prime");
  if (p % 4 != 1) throw std::invalid_argument("lps: p = " + std::to_string(p) + " is not 1 mod 4");
  if (!numtheory::is_prime(q)) throw std::invalid_argument("lps: q = " + std::to_string(q) + " is not prime");
  if (q % 4 != 1) throw std::invalid_argument("lps: q = " + std::to_string(q) + " is not 1 mod 4");
  if (q == p) throw std::invalid_argument("lps: p and q must differ");
  if (q * q <= 4 * p) throw std::invalid_argument("lps: q must exceed 2 sqrt(p) for a simple graph");
  const int symbol = numtheory::legendre(static_cast<std::int64_t>(p), q);
  return {p, q, symbol == 1 ? LpsKind::non_bipartite : LpsKind::bipartite};
}

/// Admissible companions of p in increasing order; index 1 is the smallest.
inline u64 lps_companion(u64 p, std::size_t index) {
  if (index < 1) throw std::invalid_argument("lps_companion: family index starts at 1");
  u64 q = 1;
  for (std::size_t found = 0; found < index;) {
    q += 4;
    if (lps_admissible_companion(p, q)) ++found;
  }
  return q;
}

namespace detail {

// 2x2 matrix over F_q, row-major.
using Mat2 = std::array<u64, 4>;

inline Mat2 mat_mul(const Mat2& x, const Mat2& y, u64 q) {
  return {(x[0] * y[0] + x[1] * y[2]) % q, (x[0] * y[1] + x[1] * y[3]) % q,
          (x[2] * y[0] + x[3] * y[2]) % q, (x[2] * y[1] + x[3] * y[3]) % q};
}

// Scale so the first nonzero entry in row-major order is 1.
inline Mat2 projective_normal(Mat2 m, u64 q) {
  const u64 lead = m[0] != 0 ? m[0] : m[1];
  const u64 inv = numtheory::pow_mod(lead, q - 2, q);
  for (auto& e : m) e = e * inv % q;
  return m;
}

inline u64 encode(const Mat2& m, u64 q) { return ((m[0] * q + m[1]) * q + m[2]) * q + m[3]; }

inline u64 det(const Mat2& m, u64 q) { return (m[0] * m[3] % q + q - m[1] * m[2] % q) % q; }

} // namespace detail

/// Generator matrices of X^{p,q}, projectively normalized, one per
/// four-squares solution of p.
inline std::vector<std::array<u64, 4>> lps_generators(const LpsParameters& params) {
  const u64 q = params.q;
  const u64 i = numtheory::sqrt_mod(static_cast<std::int64_t>(q) - 1, q);
  auto mod = [q](std::int64_t v) {
    const auto sq = static_cast<std::int64_t>(q);
    return static_cast<u64>(((v % sq) + sq) % sq);
  };
  std::vector<std::array<u64, 4>> gens;
  for (const auto& a : numtheory::four_squares(params.p)) {
    const u64 ia1 = i * mod(a[1]) % q;
    const u64 ia3 = i * mod(a[3]) % q;
    detail::Mat2 m{(mod(a[0]) + ia1) % q, (mod(a[2]) + ia3) % q, (mod(-a[2]) + ia3) % q,
                   (mod(a[0]) + q - ia1) % q};
    m = detail::projective_normal(m, q);
    if (m[1] == 0 && m[2] == 0 && m[0] == m[3]) {
      throw std::logic_error("lps_generators: scalar generator for p = " + std::to_string(params.p) +
                             ", q = " + std::to_string(q));
    }
    gens.push_back(m);
  }
  return gens;
}

/// Cayley graph of PGL(2, q) (bipartite kind) or PSL(2, q) (non-bipartite
/// kind) on the LPS generators, with left multiplication g -> s g. Vertices
/// are the projective classes in ascending order of their normalized
/// row-major encoding.
inline RegularGraph lps_graph(const LpsParameters& params, std::size_t budget = kDefaultSizeBudget) {
  const u64 q = params.q;
  check_budget(params.vertex_count(), budget, "lps graph");

  std::vector<u64> keys;
  keys.reserve(params.vertex_count());
  auto consider = [&](const detail::Mat2& m) {
    const u64 d = detail::det(m, q);
    if (d == 0) return;
    if (params.kind == LpsKind::non_bipartite &&
        numtheory::legendre(static_cast<std::int64_t>(d), q) != 1) {
      return;
    }
    keys.push_back(detail::encode(m, q));
  };
  for (u64 b = 0; b < q; ++b)
    for (u64 c = 0; c < q; ++c)
      for (u64 d = 0; d < q; ++d) consider({1, b, c, d});
  for (u64 c = 0; c < q; ++c)
    for (u64 d = 0; d < q; ++d) consider({0, 1, c, d});
  std::sort(keys.begin(), keys.end());
  if (keys.size() != params.vertex_count()) {
    throw std::logic_error("lps_graph: enumerated " + std::to_string(keys.size()) +
                           " group elements, expected " + std::to_string(params.vertex_count()));
  }

  auto decode = [q](u64 key) {
    detail::Mat2 m{};
    for (int j = 3; j >= 0; --j) {
      m[j] = key % q;
      key /= q;
    }
    return m;
  };
  auto index_of = [&](u64 key) {
    auto it = std::lower_bound(keys.begin(), keys.end(), key);
    if (it == keys.end() || *it != key) throw std::logic_error("lps_graph: product left the group");
    return static_cast<vertex_t>(it - keys.begin());
  };

  const auto gens = lps_generators(params);
  AdjacencyRows rows(keys.size());
  for (std::size_t v = 0; v < keys.size(); ++v) {
    const detail::Mat2 g = decode(keys[v]);
    rows[v].reserve(gens.size());
    for (const auto& s : gens) {
      const auto prod = detail::projective_normal(detail::mat_mul(s, g, q), q);
      rows[v].push_back({index_of(detail::encode(prod, q)), 1});
    }
  }
  return validate(std::move(rows), static_cast<unsigned>(params.degree()),
                  "lps:" + std::to_string(params.p) + "," + std::to_string(q))
      .value();
}

/// Numeric eigenvalue bound d(q+1) sqrt(q) for the (q+1)-regular Pizer family.
inline double pizer_bound(u64 q) {
  if (q < 3) throw std::invalid_argument("pizer_bound: q must be at least 3");
  return static_cast<double>(numtheory::divisor_count(q + 1)) * std::sqrt(static_cast<double>(q));
}

/// log d(n) * log log n / log n; the divisor bound says this stays O(1).
inline double divisor_bound_ratio(u64 n) {
  if (n < 3) throw std::invalid_argument("divisor_bound_ratio: n must be at least 3");
  const double ln = std::log(static_cast<double>(n));
  return std::log(static_cast<double>(numtheory::divisor_count(n))) * std::log(ln) / ln;
}

} // namespace exforge::constructions
