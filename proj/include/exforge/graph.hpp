#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <queue>
#include <regex>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "exforge/errors.hpp"

namespace exforge {

using vertex_t = std::uint32_t;

/// Default ceiling on vertex counts of constructed graphs.
inline constexpr std::size_t kDefaultSizeBudget = 1'000'000;

/// One nonzero entry of an adjacency row.
struct Neighbor {
  vertex_t vertex;
  std::uint32_t multiplicity;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Adjacency rows as handed to validate(); entries in any order, repeated
/// entries for the same neighbor are summed.
using AdjacencyRows = std::vector<std::vector<Neighbor>>;

class RegularGraph;

struct ValidationResult;

/// Finite k-regular multigraph without loops, stored as compressed rows.
/// Immutable once built; only validate() and the trusted builders in this
/// header produce instances.
class RegularGraph {
public:
  std::size_t vertex_count() const noexcept { return offsets_.size() - 1; }
  unsigned degree() const noexcept { return degree_; }
  const std::string& label() const noexcept { return label_; }

  std::span<const Neighbor> neighbors(vertex_t v) const {
    return {entries_.data() + offsets_[v], entries_.data() + offsets_[v + 1]};
  }

  std::uint32_t multiplicity(vertex_t u, vertex_t v) const {
    auto row = neighbors(u);
    auto it = std::lower_bound(row.begin(), row.end(), v,
                               [](const Neighbor& e, vertex_t x) { return e.vertex < x; });
    return (it != row.end() && it->vertex == v) ? it->multiplicity : 0;
  }

  /// Number of edges counted with multiplicity.
  std::size_t edge_count() const noexcept { return vertex_count() * degree_ / 2; }

  /// y = A x.
  void apply(std::span<const double> x, std::span<double> y) const {
    const std::size_t n = vertex_count();
    for (std::size_t v = 0; v < n; ++v) {
      double acc = 0.0;
      for (std::size_t i = offsets_[v]; i < offsets_[v + 1]; ++i) {
        acc += entries_[i].multiplicity * x[entries_[i].vertex];
      }
      y[v] = acc;
    }
  }

  RegularGraph with_label(std::string label) const {
    RegularGraph copy = *this;
    copy.label_ = std::move(label);
    return copy;
  }

  friend bool operator==(const RegularGraph& a, const RegularGraph& b) {
    return a.degree_ == b.degree_ && a.offsets_ == b.offsets_ && a.entries_ == b.entries_;
  }

private:
  friend ValidationResult validate(AdjacencyRows rows, unsigned k, std::string label);

  RegularGraph() = default;

  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> entries_;
  unsigned degree_ = 0;
  std::string label_;
};

struct ValidationResult {
  std::optional<RegularGraph> graph;
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
  const RegularGraph& value() const;
};

inline const RegularGraph& ValidationResult::value() const {
  if (!graph) {
    std::string msg = "invalid regular graph:";
    for (const auto& v : violations) msg += "\n  " + v;
    throw std::invalid_argument(msg);
  }
  return *graph;
}

/// Checks the regular-multigraph invariants and builds the graph, or lists
/// every violated invariant.
inline ValidationResult validate(AdjacencyRows rows, unsigned k, std::string label = {}) {
  ValidationResult result;
  auto& bad = result.violations;
  const std::size_t n = rows.size();
  if (n < 2) bad.push_back("vertex count " + std::to_string(n) + " is below 2");
  if (k < 1) bad.push_back("degree must be at least 1");

  for (std::size_t u = 0; u < n; ++u) {
    auto& row = rows[u];
    std::sort(row.begin(), row.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.vertex < b.vertex; });
    std::vector<Neighbor> merged;
    for (const auto& e : row) {
      if (e.vertex >= n) {
        bad.push_back("vertex " + std::to_string(u) + " lists out-of-range neighbor " +
                      std::to_string(e.vertex));
        continue;
      }
      if (e.multiplicity == 0) continue;
      if (!merged.empty() && merged.back().vertex == e.vertex) {
        merged.back().multiplicity += e.multiplicity;
      } else {
        merged.push_back(e);
      }
    }
    row = std::move(merged);
  }

  auto lookup = [&](std::size_t u, vertex_t v) -> std::uint32_t {
    const auto& row = rows[u];
    auto it = std::lower_bound(row.begin(), row.end(), v,
                               [](const Neighbor& e, vertex_t x) { return e.vertex < x; });
    return (it != row.end() && it->vertex == v) ? it->multiplicity : 0;
  };

  for (std::size_t u = 0; u < n; ++u) {
    std::uint64_t sum = 0;
    for (const auto& e : rows[u]) {
      sum += e.multiplicity;
      if (e.vertex == u) {
        bad.push_back("loop at vertex " + std::to_string(u));
      } else if (lookup(e.vertex, static_cast<vertex_t>(u)) != e.multiplicity) {
        if (e.vertex > u || lookup(e.vertex, static_cast<vertex_t>(u)) == 0) {
          bad.push_back("asymmetric entry (" + std::to_string(u) + "," +
                        std::to_string(e.vertex) + ")");
        }
      }
    }
    if (sum != k) {
      bad.push_back("row " + std::to_string(u) + " sums to " + std::to_string(sum) +
                    ", expected " + std::to_string(k));
    }
  }
  if (!bad.empty()) return result;

  RegularGraph g;
  g.degree_ = k;
  g.label_ = std::move(label);
  g.offsets_.reserve(n + 1);
  g.entries_.reserve(n * k);
  for (const auto& row : rows) {
    g.entries_.insert(g.entries_.end(), row.begin(), row.end());
    g.offsets_.push_back(g.entries_.size());
  }
  result.graph = std::move(g);
  return result;
}

/// Convenience overload for small dense matrices (tests, hand-written graphs).
inline ValidationResult validate(const std::vector<std::vector<int>>& dense, unsigned k,
                                 std::string label = {}) {
  AdjacencyRows rows(dense.size());
  std::vector<std::string> negatives;
  for (std::size_t u = 0; u < dense.size(); ++u) {
    if (dense[u].size() != dense.size()) {
      negatives.push_back("row " + std::to_string(u) + " has length " +
                          std::to_string(dense[u].size()));
      continue;
    }
    for (std::size_t v = 0; v < dense[u].size(); ++v) {
      if (dense[u][v] < 0) {
        negatives.push_back("negative entry (" + std::to_string(u) + "," + std::to_string(v) + ")");
      } else if (dense[u][v] > 0) {
        rows[u].push_back({static_cast<vertex_t>(v), static_cast<std::uint32_t>(dense[u][v])});
      }
    }
  }
  if (!negatives.empty()) return {std::nullopt, std::move(negatives)};
  return validate(std::move(rows), k, std::move(label));
}

inline void check_budget(std::size_t vertices, std::size_t budget, const std::string& what) {
  if (vertices > budget) {
    throw budget_error(what + " needs " + std::to_string(vertices) +
                       " vertices, over the budget of " + std::to_string(budget));
  }
}

namespace detail {

// Splits "base+k2^s" labels; s = 0 when the suffix is absent.
inline std::pair<std::string, unsigned> split_augment_label(const std::string& label) {
  static const std::regex suffix(R"(^(.*)\+k2\^([0-9]+)$)");
  std::smatch m;
  if (std::regex_match(label, m, suffix)) {
    return {m[1].str(), static_cast<unsigned>(std::stoul(m[2].str()))};
  }
  return {label, 0};
}

inline std::string augment_label(const std::string& label, unsigned steps) {
  if (steps == 0) return label;
  auto [base, s] = split_augment_label(label);
  return base + "+k2^" + std::to_string(s + steps);
}

} // namespace detail

/// X □ Y. Vertex (u, a) has index u * |Y| + a, so the second factor varies
/// fastest.
inline RegularGraph cartesian_product(const RegularGraph& x, const RegularGraph& y,
                                      std::size_t budget = kDefaultSizeBudget) {
  const std::size_t nx = x.vertex_count();
  const std::size_t ny = y.vertex_count();
  if (ny != 0 && nx > budget / ny) {
    throw budget_error("cartesian product of " + std::to_string(nx) + " and " +
                       std::to_string(ny) + " vertices exceeds the budget of " +
                       std::to_string(budget));
  }
  check_budget(nx * ny, budget, "cartesian product");
  AdjacencyRows rows(nx * ny);
  for (std::size_t u = 0; u < nx; ++u) {
    for (std::size_t a = 0; a < ny; ++a) {
      auto& row = rows[u * ny + a];
      row.reserve(x.degree() + y.degree());
      for (const auto& e : x.neighbors(static_cast<vertex_t>(u))) {
        row.push_back({static_cast<vertex_t>(e.vertex * ny + a), e.multiplicity});
      }
      for (const auto& e : y.neighbors(static_cast<vertex_t>(a))) {
        row.push_back({static_cast<vertex_t>(u * ny + e.vertex), e.multiplicity});
      }
    }
  }
  return validate(std::move(rows), x.degree() + y.degree(),
                  "product(" + x.label() + ";" + y.label() + ")")
      .value();
}

/// X □ K2 laid out as two stacked copies: vertex i is joined to i + n.
inline RegularGraph augment_with_k2(const RegularGraph& x, std::size_t budget = kDefaultSizeBudget) {
  const std::size_t n = x.vertex_count();
  check_budget(2 * n, budget, "K2 augmentation");
  AdjacencyRows rows(2 * n);
  for (std::size_t copy = 0; copy < 2; ++copy) {
    for (std::size_t u = 0; u < n; ++u) {
      auto& row = rows[copy * n + u];
      for (const auto& e : x.neighbors(static_cast<vertex_t>(u))) {
        row.push_back({static_cast<vertex_t>(copy * n + e.vertex), e.multiplicity});
      }
      row.push_back({static_cast<vertex_t>((1 - copy) * n + u), 1});
    }
  }
  return validate(std::move(rows), x.degree() + 1, detail::augment_label(x.label(), 1)).value();
}

inline RegularGraph augment_iterated(const RegularGraph& x, unsigned steps,
                                     std::size_t budget = kDefaultSizeBudget) {
  if (steps >= 8 * sizeof(std::size_t) ||
      x.vertex_count() > (budget >> steps)) {
    throw budget_error(std::to_string(steps) + " K2 augmentations of " +
                       std::to_string(x.vertex_count()) + " vertices exceed the budget of " +
                       std::to_string(budget));
  }
  RegularGraph g = x;
  for (unsigned i = 0; i < steps; ++i) g = augment_with_k2(g, budget);
  return g;
}

namespace detail {

// BFS 2-colouring over every component; colour -1 means unvisited.
inline std::pair<std::size_t, bool> components_and_bipartite(const RegularGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<int> colour(n, -1);
  std::size_t components = 0;
  bool bipartite = true;
  std::queue<vertex_t> frontier;
  for (std::size_t s = 0; s < n; ++s) {
    if (colour[s] != -1) continue;
    ++components;
    colour[s] = 0;
    frontier.push(static_cast<vertex_t>(s));
    while (!frontier.empty()) {
      const vertex_t u = frontier.front();
      frontier.pop();
      for (const auto& e : g.neighbors(u)) {
        if (colour[e.vertex] == -1) {
          colour[e.vertex] = 1 - colour[u];
          frontier.push(e.vertex);
        } else if (colour[e.vertex] == colour[u]) {
          bipartite = false;
        }
      }
    }
  }
  return {components, bipartite};
}

} // namespace detail

inline bool is_connected(const RegularGraph& g) {
  return detail::components_and_bipartite(g).first == 1;
}

inline bool is_bipartite(const RegularGraph& g) {
  return detail::components_and_bipartite(g).second;
}

/// Disjoint union, vertices of `b` following those of `a`.
inline RegularGraph disjoint_union(const RegularGraph& a, const RegularGraph& b) {
  if (a.degree() != b.degree()) throw std::invalid_argument("disjoint_union: degrees differ");
  const std::size_t na = a.vertex_count();
  AdjacencyRows rows(na + b.vertex_count());
  for (std::size_t u = 0; u < na; ++u) {
    auto row = a.neighbors(static_cast<vertex_t>(u));
    rows[u].assign(row.begin(), row.end());
  }
  for (std::size_t u = 0; u < b.vertex_count(); ++u) {
    for (const auto& e : b.neighbors(static_cast<vertex_t>(u))) {
      rows[na + u].push_back({static_cast<vertex_t>(na + e.vertex), e.multiplicity});
    }
  }
  return validate(std::move(rows), a.degree(), "union(" + a.label() + ";" + b.label() + ")").value();
}

// ---------------------------------------------------------------------------
// Text format: optional `#` comment lines, a header `n k`, then one `u v`
// line per edge (u < v), repeated for multiplicity.

inline void write_graph(std::ostream& os, const RegularGraph& g,
                        const std::vector<std::string>& comments = {}) {
  if (!g.label().empty()) os << "# label: " << g.label() << '\n';
  for (const auto& c : comments) os << "# " << c << '\n';
  os << g.vertex_count() << ' ' << g.degree() << '\n';
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    for (const auto& e : g.neighbors(static_cast<vertex_t>(u))) {
      if (e.vertex <= u) continue;
      for (std::uint32_t m = 0; m < e.multiplicity; ++m) os << u << ' ' << e.vertex << '\n';
    }
  }
}

inline RegularGraph read_graph(std::istream& is) {
  std::string line;
  std::string label;
  std::optional<std::pair<std::size_t, unsigned>> header;
  AdjacencyRows rows;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) {
    throw parse_error("line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(is, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '#') {
      static const std::string tag = "# label: ";
      if (line.compare(first, tag.size(), tag) == 0) {
        label = line.substr(first + tag.size());
        while (!label.empty() && (label.back() == '\r' || label.back() == ' ')) label.pop_back();
      }
      continue;
    }
    std::istringstream fields(line);
    long long a = 0, b = 0;
    std::string extra;
    if (!(fields >> a >> b) || (fields >> extra)) fail("expected two integers");
    if (!header) {
      if (a < 2 || b < 1) fail("header must be `n k` with n >= 2 and k >= 1");
      header = {static_cast<std::size_t>(a), static_cast<unsigned>(b)};
      rows.resize(header->first);
      continue;
    }
    if (a < 0 || b < 0 || static_cast<std::size_t>(b) >= header->first) fail("vertex index out of range");
    if (a >= b) fail("edge endpoints must satisfy u < v");
    rows[a].push_back({static_cast<vertex_t>(b), 1});
    rows[b].push_back({static_cast<vertex_t>(a), 1});
  }
  if (!header) throw parse_error("missing `n k` header");
  auto result = validate(std::move(rows), header->second, label);
  if (!result.ok()) {
    std::string msg = "graph file violates regularity:";
    for (std::size_t i = 0; i < std::min<std::size_t>(result.violations.size(), 5); ++i) {
      msg += " " + result.violations[i] + ";";
    }
    throw parse_error(msg);
  }
  return std::move(*result.graph);
}

} // namespace exforge
