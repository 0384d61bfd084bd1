#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <queue>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fiid/error.hpp"

namespace fiid {

using Edge = std::pair<int, int>;

/// Immutable simple undirected graph on vertices 0..n-1.
class FiniteGraph {
 public:
  FiniteGraph() = default;

  /// Throws LoopEdge, DuplicateEdge or VertexOutOfRange.
  FiniteGraph(int n, std::span<const Edge> edges) : adjacency_(static_cast<std::size_t>(n))
  {
    if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative vertex count");
    for (auto [u, v] : edges) {
      if (u < 0 || v < 0 || u >= n || v >= n) {
        throw Error(ErrorCode::VertexOutOfRange,
                    "edge (" + std::to_string(u) + "," + std::to_string(v) + ") with n=" + std::to_string(n));
      }
      if (u == v) throw Error(ErrorCode::LoopEdge, "loop at vertex " + std::to_string(u));
      adjacency_[u].push_back(v);
      adjacency_[v].push_back(u);
    }
    for (std::size_t v = 0; v < adjacency_.size(); ++v) {
      auto& nbrs = adjacency_[v];
      std::sort(nbrs.begin(), nbrs.end());
      auto dup = std::adjacent_find(nbrs.begin(), nbrs.end());
      if (dup != nbrs.end()) {
        throw Error(ErrorCode::DuplicateEdge,
                    "edge (" + std::to_string(v) + "," + std::to_string(*dup) + ") given twice");
      }
    }
    edge_count_ = static_cast<int>(edges.size());
  }

  int vertex_count() const { return static_cast<int>(adjacency_.size()); }
  int edge_count() const { return edge_count_; }
  int degree(int v) const { return static_cast<int>(adjacency_[v].size()); }
  std::span<const int> neighbors(int v) const { return adjacency_[v]; }
  const std::vector<int>& operator[](int v) const { return adjacency_[v]; }

  bool adjacent(int u, int v) const
  {
    if (u < 0 || v < 0 || u >= vertex_count() || v >= vertex_count()) return false;
    const auto& nbrs = adjacency_[u];
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
  }

  int max_degree() const
  {
    int best = 0;
    for (const auto& nbrs : adjacency_) best = std::max(best, static_cast<int>(nbrs.size()));
    return best;
  }

  /// Edges with u < v in lexicographic order.
  std::vector<Edge> edges() const
  {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(edge_count_));
    for (int u = 0; u < vertex_count(); ++u) {
      for (int v : adjacency_[u]) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  friend bool operator==(const FiniteGraph&, const FiniteGraph&) = default;

 private:
  std::vector<std::vector<int>> adjacency_;
  int edge_count_ = 0;
};

inline FiniteGraph build_graph(int n, std::span<const Edge> edges) { return FiniteGraph(n, edges); }

/// Shortest cycle length, or Infinite for forests. Compare with
/// is_infinite() / exceeds().
class Girth {
 public:
  static constexpr Girth infinite() { return Girth(); }
  static constexpr Girth finite(int length) { return Girth(length); }

  constexpr bool is_infinite() const { return length_ == 0; }
  int length() const
  {
    if (is_infinite()) throw Error(ErrorCode::InvalidArgument, "girth is infinite");
    return length_;
  }
  /// girth > k
  constexpr bool exceeds(long long k) const { return is_infinite() || length_ > k; }

  std::string to_string() const { return is_infinite() ? "Infinite" : std::to_string(length_); }

  friend constexpr bool operator==(Girth, Girth) = default;

 private:
  constexpr Girth() = default;
  constexpr explicit Girth(int length) : length_(length) {}
  int length_ = 0;
};

struct GraphProfile {
  Girth girth = Girth::infinite();
  std::optional<int> regular_degree;
  bool bipartite = true;
  bool connected = true;
};

/// Exact girth via one BFS per root: the first non-tree edge met from root s
/// closes a cycle through s of length dist(x)+dist(y)+1, and the minimum over
/// all roots is the girth.
inline Girth girth(const FiniteGraph& g)
{
  const int n = g.vertex_count();
  int best = std::numeric_limits<int>::max();
  std::vector<int> dist(static_cast<std::size_t>(n), -1);
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  std::vector<int> touched;
  std::queue<int> queue;
  for (int s = 0; s < n; ++s) {
    for (int v : touched) dist[v] = -1;
    touched.clear();
    queue = {};
    dist[s] = 0;
    parent[s] = -1;
    touched.push_back(s);
    queue.push(s);
    while (!queue.empty()) {
      const int x = queue.front();
      queue.pop();
      if (2 * dist[x] + 1 >= best) break;
      for (int y : g[x]) {
        if (dist[y] < 0) {
          dist[y] = dist[x] + 1;
          parent[y] = x;
          touched.push_back(y);
          queue.push(y);
        } else if (y != parent[x]) {
          best = std::min(best, dist[x] + dist[y] + 1);
        }
      }
    }
  }
  return best == std::numeric_limits<int>::max() ? Girth::infinite() : Girth::finite(best);
}

inline GraphProfile profile(const FiniteGraph& g)
{
  GraphProfile out;
  out.girth = girth(g);
  const int n = g.vertex_count();
  if (n > 0) {
    const int d0 = g.degree(0);
    bool regular = true;
    for (int v = 1; v < n && regular; ++v) regular = g.degree(v) == d0;
    if (regular) out.regular_degree = d0;
  } else {
    out.regular_degree = 0;
  }
  std::vector<int> side(static_cast<std::size_t>(n), -1);
  int components = 0;
  for (int s = 0; s < n; ++s) {
    if (side[s] >= 0) continue;
    ++components;
    side[s] = 0;
    std::queue<int> queue;
    queue.push(s);
    while (!queue.empty()) {
      const int x = queue.front();
      queue.pop();
      for (int y : g[x]) {
        if (side[y] < 0) {
          side[y] = 1 - side[x];
          queue.push(y);
        } else if (side[y] == side[x]) {
          out.bipartite = false;
        }
      }
    }
  }
  out.connected = components <= 1;
  return out;
}

/// Configuration-model pairing of n*d stubs, resampled from scratch whenever
/// the pairing has a loop or a repeated edge.
inline FiniteGraph random_regular(int n, int d, std::uint64_t rng_seed, int retry_budget = 10000)
{
  if (n <= 0 || d < 0) throw Error(ErrorCode::InvalidArgument, "random_regular needs n > 0 and d >= 0");
  if ((static_cast<long long>(n) * d) % 2 != 0) {
    throw Error(ErrorCode::ParityError, "n*d must be even (n=" + std::to_string(n) + ", d=" + std::to_string(d) + ")");
  }
  if (d >= n) throw Error(ErrorCode::InvalidArgument, "random_regular needs d < n");
  std::mt19937_64 rng(rng_seed);
  std::vector<int> stubs;
  stubs.reserve(static_cast<std::size_t>(n) * d);
  std::vector<Edge> edges;
  for (int attempt = 0; attempt < retry_budget; ++attempt) {
    stubs.clear();
    for (int v = 0; v < n; ++v) {
      for (int k = 0; k < d; ++k) stubs.push_back(v);
    }
    std::shuffle(stubs.begin(), stubs.end(), rng);
    edges.clear();
    bool simple = true;
    for (std::size_t i = 0; i < stubs.size(); i += 2) {
      int u = stubs[i];
      int v = stubs[i + 1];
      if (u == v) {
        simple = false;
        break;
      }
      edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    if (!simple) continue;
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) continue;
    return FiniteGraph(n, edges);
  }
  throw Error(ErrorCode::RetryBudgetExceeded,
              "no simple pairing after " + std::to_string(retry_budget) + " attempts");
}

namespace detail {

inline FiniteGraph cycle_graph(int n)
{
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(std::min(i, (i + 1) % n), std::max(i, (i + 1) % n));
  return FiniteGraph(n, edges);
}

inline FiniteGraph complete_graph(int n)
{
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  }
  return FiniteGraph(n, edges);
}

// Hamiltonian cycle 0..n-1 plus chords i -- i+shift[i mod |shift|].
inline FiniteGraph lcf_graph(int n, std::span<const int> shifts)
{
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(std::min(i, (i + 1) % n), std::max(i, (i + 1) % n));
  for (int i = 0; i < n; ++i) {
    const int j = ((i + shifts[static_cast<std::size_t>(i) % shifts.size()]) % n + n) % n;
    if (i < j) edges.emplace_back(i, j);
  }
  return FiniteGraph(n, edges);
}

}  // namespace detail

/// Standard small graphs with fixed numbering (see README):
///   K2, K3, K4   complete graphs on 0..n-1
///   C5           cycle 0-1-2-3-4-0
///   Petersen     outer cycle 0..4, spokes i -- i+5, inner pentagram 5+i -- 5+(i+2)%5
///   Heawood      LCF [5,-5]^7 on the cycle 0..13
///   McGee        LCF [12,7,-7]^8 on the cycle 0..23
inline FiniteGraph named_graph(std::string_view name)
{
  if (name == "K2") return detail::complete_graph(2);
  if (name == "K3") return detail::complete_graph(3);
  if (name == "K4") return detail::complete_graph(4);
  if (name == "C5") return detail::cycle_graph(5);
  if (name == "Petersen") {
    std::vector<Edge> edges;
    for (int i = 0; i < 5; ++i) {
      edges.emplace_back(std::min(i, (i + 1) % 5), std::max(i, (i + 1) % 5));
      edges.emplace_back(i, i + 5);
      const int a = 5 + i;
      const int b = 5 + (i + 2) % 5;
      edges.emplace_back(std::min(a, b), std::max(a, b));
    }
    return FiniteGraph(10, edges);
  }
  if (name == "Heawood") {
    const int shifts[] = {5, -5};
    return detail::lcf_graph(14, shifts);
  }
  if (name == "McGee") {
    const int shifts[] = {12, 7, -7};
    return detail::lcf_graph(24, shifts);
  }
  throw Error(ErrorCode::UnknownName, "unknown graph '" + std::string(name) + "'");
}

inline bool is_named_graph(std::string_view name)
{
  for (auto known : {"K2", "K3", "K4", "C5", "Petersen", "Heawood", "McGee"}) {
    if (name == known) return true;
  }
  return false;
}

enum class TwoColor { A, B };

inline char to_char(TwoColor c) { return c == TwoColor::A ? 'A' : 'B'; }

/// vertex -> color, sorted by vertex.
using PartialColoring = std::vector<std::pair<int, TwoColor>>;

/// Proper 2-coloring of G[S] by BFS alternation per component, rooted at the
/// component's smallest vertex (colored A). Throws InducedCycleError when
/// G[S] is not a forest.
inline PartialColoring induced_two_coloring(const FiniteGraph& g, std::span<const int> subset)
{
  const int n = g.vertex_count();
  std::vector<char> in_set(static_cast<std::size_t>(n), 0);
  for (int v : subset) {
    if (v < 0 || v >= n) throw Error(ErrorCode::VertexOutOfRange, "vertex " + std::to_string(v));
    in_set[v] = 1;
  }
  std::vector<int> color(static_cast<std::size_t>(n), -1);
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  std::vector<int> depth(static_cast<std::size_t>(n), 0);
  for (int s = 0; s < n; ++s) {
    if (!in_set[s] || color[s] >= 0) continue;
    color[s] = 0;
    std::queue<int> queue;
    queue.push(s);
    while (!queue.empty()) {
      const int x = queue.front();
      queue.pop();
      for (int y : g[x]) {
        if (!in_set[y] || y == parent[x]) continue;
        if (color[y] < 0) {
          color[y] = 1 - color[x];
          parent[y] = x;
          depth[y] = depth[x] + 1;
          queue.push(y);
          continue;
        }
        // Non-tree edge: walk both ends up to their common ancestor.
        std::vector<int> left{x};
        std::vector<int> right{y};
        int a = x;
        int b = y;
        while (depth[a] > depth[b]) left.push_back(a = parent[a]);
        while (depth[b] > depth[a]) right.push_back(b = parent[b]);
        while (a != b) {
          left.push_back(a = parent[a]);
          right.push_back(b = parent[b]);
        }
        right.pop_back();
        left.insert(left.end(), right.rbegin(), right.rend());
        throw InducedCycleError(std::move(left));
      }
    }
  }
  PartialColoring out;
  for (int v = 0; v < n; ++v) {
    if (in_set[v]) out.emplace_back(v, color[v] == 0 ? TwoColor::A : TwoColor::B);
  }
  return out;
}

struct ExactInvariants {
  int independence_number = 0;
  int chromatic_number = 0;
};

namespace detail {

using Mask = std::uint64_t;

inline int popcount(Mask m) { return __builtin_popcountll(m); }

struct MisSearch {
  std::vector<Mask> nbr;
  int best = 0;

  void run(Mask candidates, int size)
  {
    if (candidates == 0) {
      best = std::max(best, size);
      return;
    }
    if (size + popcount(candidates) <= best) return;
    // Vertices without neighbours in the candidate set always join.
    int pick = -1;
    int pick_degree = -1;
    for (Mask m = candidates; m != 0; m &= m - 1) {
      const int v = __builtin_ctzll(m);
      const int deg = popcount(nbr[v] & candidates);
      if (deg == 0) {
        run(candidates & ~(Mask{1} << v), size + 1);
        return;
      }
      if (deg > pick_degree) {
        pick = v;
        pick_degree = deg;
      }
    }
    run(candidates & ~(Mask{1} << pick) & ~nbr[pick], size + 1);
    run(candidates & ~(Mask{1} << pick), size);
  }
};

// DSATUR-ordered backtracking for k-colorability.
struct ColoringSearch {
  const FiniteGraph* g = nullptr;
  int k = 0;
  std::vector<int> color;

  bool run(int colored)
  {
    const int n = g->vertex_count();
    if (colored == n) return true;
    int pick = -1;
    int pick_sat = -1;
    int pick_deg = -1;
    for (int v = 0; v < n; ++v) {
      if (color[v] >= 0) continue;
      Mask used = 0;
      int deg = 0;
      for (int y : (*g)[v]) {
        if (color[y] >= 0) used |= Mask{1} << color[y];
        else ++deg;
      }
      const int sat = popcount(used);
      if (sat > pick_sat || (sat == pick_sat && deg > pick_deg)) {
        pick = v;
        pick_sat = sat;
        pick_deg = deg;
      }
    }
    Mask used = 0;
    int max_used = -1;
    for (int c : color) max_used = std::max(max_used, c);
    for (int y : (*g)[pick]) {
      if (color[y] >= 0) used |= Mask{1} << color[y];
    }
    // Colors above max_used+1 are symmetric to max_used+1.
    const int limit = std::min(k, max_used + 2);
    for (int c = 0; c < limit; ++c) {
      if (used & (Mask{1} << c)) continue;
      color[pick] = c;
      if (run(colored + 1)) return true;
      color[pick] = -1;
    }
    return false;
  }
};

inline int greedy_dsatur_colors(const FiniteGraph& g)
{
  ColoringSearch s{&g, g.vertex_count(), std::vector<int>(static_cast<std::size_t>(g.vertex_count()), -1)};
  const int n = g.vertex_count();
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    int pick_sat = -1;
    for (int v = 0; v < n; ++v) {
      if (s.color[v] >= 0) continue;
      Mask used = 0;
      for (int y : g[v]) {
        if (s.color[y] >= 0) used |= Mask{1} << s.color[y];
      }
      if (popcount(used) > pick_sat) {
        pick = v;
        pick_sat = popcount(used);
      }
    }
    Mask used = 0;
    for (int y : g[pick]) {
      if (s.color[y] >= 0) used |= Mask{1} << s.color[y];
    }
    int c = 0;
    while (used & (Mask{1} << c)) ++c;
    s.color[pick] = c;
  }
  int colors = 0;
  for (int c : s.color) colors = std::max(colors, c + 1);
  return colors;
}

}  // namespace detail

inline constexpr int kExactInvariantLimit = 40;

/// Exact independence and chromatic numbers by branch and bound (n <= 40).
inline ExactInvariants exact_invariants(const FiniteGraph& g)
{
  const int n = g.vertex_count();
  if (n > kExactInvariantLimit) {
    throw Error(ErrorCode::TooLarge, "exact invariants need n <= 40, got " + std::to_string(n));
  }
  ExactInvariants out;
  if (n == 0) return out;

  detail::MisSearch mis;
  mis.nbr.assign(static_cast<std::size_t>(n), 0);
  for (int v = 0; v < n; ++v) {
    for (int y : g[v]) mis.nbr[v] |= detail::Mask{1} << y;
  }
  const detail::Mask all = n == 64 ? ~detail::Mask{0} : (detail::Mask{1} << n) - 1;
  mis.run(all, 0);
  out.independence_number = mis.best;

  const int upper = detail::greedy_dsatur_colors(g);
  int lower = (n + out.independence_number - 1) / out.independence_number;
  if (g.edge_count() > 0) lower = std::max(lower, 2);
  int chi = upper;
  for (int k = lower; k < upper; ++k) {
    detail::ColoringSearch search{&g, k, std::vector<int>(static_cast<std::size_t>(n), -1)};
    if (search.run(0)) {
      chi = k;
      break;
    }
  }
  out.chromatic_number = chi;
  return out;
}

/// Graph file: `n m` then m lines `u v`, 0-based, lexicographically sorted
/// with u < v on write.
inline void write_graph(std::ostream& out, const FiniteGraph& g)
{
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

inline FiniteGraph read_graph(std::istream& in)
{
  long long n = -1;
  long long m = -1;
  if (!(in >> n >> m) || n < 0 || m < 0) throw Error(ErrorCode::ParseError, "graph header must be `n m`");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    long long u = 0;
    long long v = 0;
    if (!(in >> u >> v)) throw Error(ErrorCode::ParseError, "expected " + std::to_string(m) + " edge lines");
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw Error(ErrorCode::VertexOutOfRange, "edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    }
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  std::string extra;
  if (in >> extra) throw Error(ErrorCode::ParseError, "trailing data after edge list");
  return FiniteGraph(static_cast<int>(n), edges);
}

}  // namespace fiid
