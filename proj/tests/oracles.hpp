#pragma once

// Slow reference implementations used to check the library. None of them
// calls into the code under test beyond plain data accessors and
// LocalRule::evaluate (the table lookup itself).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "fiid/fiid.hpp"

namespace oracle {

using fiid::BigInt;
using fiid::Rational;

// graphs

inline bool has_cycle_of_length(const fiid::FiniteGraph& g, int k)
{
  const int n = g.vertex_count();
  std::vector<int> path;
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  // Cycles are rooted at their smallest vertex.
  auto dfs = [&](auto&& self, int root, int v) -> bool {
    if (static_cast<int>(path.size()) == k) return g.adjacent(v, root);
    for (int w : g.neighbors(v)) {
      if (w <= root || used[static_cast<std::size_t>(w)]) continue;
      used[static_cast<std::size_t>(w)] = 1;
      path.push_back(w);
      const bool found = self(self, root, w);
      path.pop_back();
      used[static_cast<std::size_t>(w)] = 0;
      if (found) return true;
    }
    return false;
  };
  for (int root = 0; root < n; ++root) {
    path.assign(1, root);
    used.assign(static_cast<std::size_t>(n), 0);
    used[static_cast<std::size_t>(root)] = 1;
    if (dfs(dfs, root, root)) return true;
  }
  return false;
}

/// Shortest cycle by trying every length; nullopt for forests.
inline std::optional<int> girth(const fiid::FiniteGraph& g)
{
  for (int k = 3; k <= g.vertex_count(); ++k) {
    if (has_cycle_of_length(g, k)) return k;
  }
  return std::nullopt;
}

inline bool independent(const fiid::FiniteGraph& g, std::uint64_t mask)
{
  for (auto [u, v] : g.edges()) {
    if ((mask >> u & 1) && (mask >> v & 1)) return false;
  }
  return true;
}

inline int independence_number(const fiid::FiniteGraph& g)
{
  int best = 0;
  const int n = g.vertex_count();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    if (std::popcount(mask) > best && independent(g, mask)) best = std::popcount(mask);
  }
  return best;
}

inline bool colorable(const fiid::FiniteGraph& g, int k)
{
  const int n = g.vertex_count();
  std::vector<int> color(static_cast<std::size_t>(n), 0);
  // Odometer over all k^n colorings.
  while (true) {
    bool ok = true;
    for (auto [u, v] : g.edges()) {
      if (color[static_cast<std::size_t>(u)] == color[static_cast<std::size_t>(v)]) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
    int i = 0;
    while (i < n && color[static_cast<std::size_t>(i)] == k - 1) color[static_cast<std::size_t>(i++)] = 0;
    if (i == n) return false;
    ++color[static_cast<std::size_t>(i)];
  }
}

inline int chromatic_number(const fiid::FiniteGraph& g)
{
  if (g.vertex_count() == 0) return 0;
  int k = 1;
  while (!colorable(g, k)) ++k;
  return k;
}

inline bool induced_acyclic(const fiid::FiniteGraph& g, const std::vector<int>& s)
{
  // A graph is a forest iff edges = vertices - components.
  std::vector<int> parent(s.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (!g.adjacent(s[i], s[j])) continue;
      const int a = find(static_cast<int>(i));
      const int b = find(static_cast<int>(j));
      if (a == b) return false;
      parent[static_cast<std::size_t>(a)] = b;
    }
  }
  return true;
}

// balls

/// Root-fixing automorphisms of a rooted tree, as vertex permutations, found
/// by testing every permutation.
inline std::vector<std::vector<int>> automorphisms(const fiid::TreeShape& shape)
{
  const int n = shape.size();
  std::vector<std::set<int>> adj(static_cast<std::size_t>(n));
  for (int v = 1; v < n; ++v) {
    adj[static_cast<std::size_t>(v)].insert(shape.parent[static_cast<std::size_t>(v)]);
    adj[static_cast<std::size_t>(shape.parent[static_cast<std::size_t>(v)])].insert(v);
  }
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    if (perm[0] != 0) break;  // permutations fixing 0 come first
    bool ok = true;
    for (int v = 1; v < n && ok; ++v) {
      ok = adj[static_cast<std::size_t>(perm[static_cast<std::size_t>(v)])].count(
               perm[static_cast<std::size_t>(shape.parent[static_cast<std::size_t>(v)])]) > 0;
    }
    if (ok) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

/// Orbit representative: the lexicographically least relabeled vector.
inline std::vector<int> orbit_min(const std::vector<std::vector<int>>& auts, const std::vector<int>& labels)
{
  std::vector<int> best;
  std::vector<int> image(labels.size());
  for (const auto& p : auts) {
    for (std::size_t v = 0; v < labels.size(); ++v) image[static_cast<std::size_t>(p[v])] = labels[v];
    if (best.empty() || image < best) best = image;
  }
  return best;
}

/// Distinct orbits of q-ary labelings.
inline std::size_t alphabet_orbit_count(const fiid::TreeShape& shape, int q)
{
  const auto auts = automorphisms(shape);
  const int n = shape.size();
  std::set<std::vector<int>> reps;
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  while (true) {
    reps.insert(orbit_min(auts, labels));
    int i = 0;
    while (i < n && labels[static_cast<std::size_t>(i)] == q - 1) labels[static_cast<std::size_t>(i++)] = 0;
    if (i == n) break;
    ++labels[static_cast<std::size_t>(i)];
  }
  return reps.size();
}

/// Distinct orderings up to automorphism: the action is free, so n!/|Aut|.
inline BigInt rank_orbit_count(const fiid::TreeShape& shape)
{
  BigInt f = 1;
  for (int i = 2; i <= shape.size(); ++i) f *= i;
  return f / automorphisms(shape).size();
}

// edge laws

/// A finite piece of T_d around the edge {0, 1}, big enough to hold both
/// radius-t balls, built by plain BFS growth.
struct EdgeNeighbourhood {
  std::vector<std::vector<int>> adj;
};

inline EdgeNeighbourhood grow_edge(int d, int t)
{
  EdgeNeighbourhood e;
  e.adj = {{1}, {0}};
  std::vector<int> dist = {0, 0};
  for (std::size_t i = 0; i < e.adj.size(); ++i) {
    if (dist[i] >= t) continue;
    while (static_cast<int>(e.adj[i].size()) < d) {
      const int w = static_cast<int>(e.adj.size());
      e.adj.push_back({static_cast<int>(i)});
      e.adj[i].push_back(w);
      dist.push_back(dist[i] + 1);
    }
  }
  return e;
}

/// Lays the ball around `root` out in the order of `shape`: node k goes to an
/// unused neighbour of the image of its parent.
inline std::vector<int> embed(const EdgeNeighbourhood& e, const fiid::TreeShape& shape, int root)
{
  const int n = shape.size();
  std::vector<int> image(static_cast<std::size_t>(n), -1);
  std::vector<std::size_t> next(e.adj.size(), 0);
  image[0] = root;
  std::vector<int> parent_image(e.adj.size(), -1);
  for (int k = 1; k < n; ++k) {
    const int p = image[static_cast<std::size_t>(shape.parent[static_cast<std::size_t>(k)])];
    auto& cursor = next[static_cast<std::size_t>(p)];
    while (e.adj[static_cast<std::size_t>(p)][cursor] == parent_image[static_cast<std::size_t>(p)]) ++cursor;
    const int w = e.adj[static_cast<std::size_t>(p)][cursor++];
    parent_image[static_cast<std::size_t>(w)] = p;
    image[static_cast<std::size_t>(k)] = w;
  }
  return image;
}

struct Laws {
  std::vector<Rational> vertex;
  std::vector<Rational> pair;  // row-major, (label at 0, label at 1)
};

/// Exact vertex and pair laws by summing over every seed configuration of
/// the edge neighbourhood (tags: all q^N strings; ranks: all N! orders).
inline Laws pair_law(const fiid::LocalRule& rule)
{
  const auto e = grow_edge(rule.d(), rule.t());
  const auto& shape = rule.shape();
  const auto at_u = embed(e, shape, 0);
  const auto at_v = embed(e, shape, 1);
  const std::size_t n = e.adj.size();
  const std::size_t k = rule.alphabet().size();
  const auto& model = rule.model();
  std::vector<BigInt> counts(k * k, 0);
  BigInt total = 0;
  std::vector<fiid::Seed> seeds(n);
  std::vector<fiid::Seed> ball(static_cast<std::size_t>(shape.size()));
  std::vector<int> tags(n, 0);
  std::vector<int> order(n);
  auto tally = [&] {
    for (std::size_t i = 0; i < ball.size(); ++i) ball[i] = seeds[static_cast<std::size_t>(at_u[i])];
    const auto a = rule.evaluate(ball);
    for (std::size_t i = 0; i < ball.size(); ++i) ball[i] = seeds[static_cast<std::size_t>(at_v[i])];
    const auto b = rule.evaluate(ball);
    ++counts[a * k + b];
    ++total;
  };
  while (true) {
    for (std::size_t i = 0; i < n; ++i) seeds[i].tag = static_cast<std::uint32_t>(tags[i]);
    if (model.has_ranks()) {
      std::iota(order.begin(), order.end(), 0);
      do {
        for (std::size_t i = 0; i < n; ++i) seeds[i].value = 0.5 + order[i];
        tally();
      } while (std::next_permutation(order.begin(), order.end()));
    } else {
      tally();
    }
    if (!model.has_tags()) break;
    std::size_t i = 0;
    while (i < n && tags[i] == static_cast<int>(model.q) - 1) tags[i++] = 0;
    if (i == n) break;
    ++tags[i];
  }
  Laws out;
  out.pair.resize(k * k);
  out.vertex.assign(k, 0);
  for (std::size_t i = 0; i < k * k; ++i) {
    out.pair[i] = Rational(counts[i], total);
    out.vertex[i / k] += out.pair[i];
  }
  return out;
}

// numbers

inline double entropy(const std::vector<double>& p)
{
  double h = 0.0;
  for (double x : p) {
    if (x > 0) h += x * std::log(1.0 / x);
  }
  return h;
}

/// True iff N is the least integer strictly above r^(a/b): N^b > r^a >= (N-1)^b.
inline bool least_integer_above_power(const BigInt& N, int r, const BigInt& a, const BigInt& b)
{
  using boost::multiprecision::pow;
  const auto ua = a.convert_to<unsigned>();
  const auto ub = b.convert_to<unsigned>();
  const BigInt rhs = pow(BigInt(r), ua);
  return pow(N, ub) > rhs && pow(BigInt(N - 1), ub) <= rhs;
}

/// Sum of -p ln p over the labels left after removing the `keep` heaviest
/// (ties to the smaller index), by repeated arg-max.
inline double tail_entropy(std::vector<double> p, std::size_t keep)
{
  for (std::size_t round = 0; round < keep && round < p.size(); ++round) {
    std::size_t best = 0;
    bool any = false;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i] < 0) continue;
      if (!any || p[i] > p[best]) {
        best = i;
        any = true;
      }
    }
    p[best] = -1.0;
  }
  double h = 0.0;
  for (double x : p) {
    if (x > 0) h -= x * std::log(x);
  }
  return h;
}

}  // namespace oracle
