#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fiid/ball.hpp"
#include "fiid/error.hpp"
#include "fiid/rule.hpp"

namespace fiid {

/// Union of the radius-t balls of the endpoints u=0, v=1 of an edge of T_d.
/// Vertex ids: 0 = u, 1 = v, then u's side (vertices closer to u) in BFS
/// order, then v's side.
struct EdgeBall {
  int d = 0;
  int t = 0;
  std::vector<std::vector<int>> adjacency;
  std::vector<int> ball_u;  // edge-ball ids in TreeShape::ball(d, t) layout
  std::vector<int> ball_v;
  std::vector<int> side_u;  // edge-ball ids in TreeShape::half(d, t) layout
  std::vector<int> side_v;

  static EdgeBall make(int d, int t)
  {
    EdgeBall e;
    e.d = d;
    e.t = t;
    const TreeShape half = TreeShape::half(d, t);
    const int h = half.size();
    e.adjacency.assign(static_cast<std::size_t>(2 * h), {});
    auto id = [&](int side, int node) {
      if (node == 0) return side;
      return 2 + side * (h - 1) + (node - 1);
    };
    e.adjacency[0].push_back(1);
    e.adjacency[1].push_back(0);
    for (int side = 0; side < 2; ++side) {
      for (int node = 1; node < h; ++node) {
        const int a = id(side, half.parent[static_cast<std::size_t>(node)]);
        const int b = id(side, node);
        e.adjacency[static_cast<std::size_t>(a)].push_back(b);
        e.adjacency[static_cast<std::size_t>(b)].push_back(a);
      }
    }
    for (int node = 0; node < h; ++node) {
      e.side_u.push_back(id(0, node));
      e.side_v.push_back(id(1, node));
    }
    // Endpoint balls are complete inside the edge ball; the far side is cut
    // off by the depth bound.
    auto extract = [&](int root, std::vector<int>& out) { bfs_to_depth(e.adjacency, root, t, out); };
    extract(0, e.ball_u);
    extract(1, e.ball_v);
    return e;
  }

  int size() const { return static_cast<int>(adjacency.size()); }

 private:
  static void bfs_to_depth(const std::vector<std::vector<int>>& adj, int root, int t, std::vector<int>& out)
  {
    out.assign(1, root);
    std::vector<int> parent(1, -1);
    std::vector<int> depth(1, 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (depth[i] == t) continue;
      for (int y : adj[static_cast<std::size_t>(out[i])]) {
        if (y == parent[i]) continue;
        out.push_back(y);
        parent.push_back(out[i]);
        depth.push_back(depth[i] + 1);
      }
    }
  }
};

/// Outputs at both endpoints for edge-ball seeds indexed by EdgeBall ids.
class EdgeEvaluator {
 public:
  EdgeEvaluator(const LocalRule& rule, const EdgeBall& edge) : rule_(&rule), edge_(&edge)
  {
    if (edge.d != rule.d() || edge.t != rule.t()) throw Error(ErrorCode::InvalidArgument, "edge ball / rule shape mismatch");
    scratch_.resize(edge.ball_u.size());
  }

  std::pair<Label, Label> operator()(std::span<const Seed> seeds)
  {
    return {labels_at(seeds, edge_->ball_u), labels_at(seeds, edge_->ball_v)};
  }

  /// Indices of the two endpoint balls in rule.codes().
  std::pair<std::uint32_t, std::uint32_t> ball_indices(std::span<const Seed> seeds)
  {
    return {index_at(seeds, edge_->ball_u), index_at(seeds, edge_->ball_v)};
  }

 private:
  Code code_at(std::span<const Seed> seeds, const std::vector<int>& ids)
  {
    for (std::size_t i = 0; i < ids.size(); ++i) scratch_[i] = seeds[static_cast<std::size_t>(ids[i])];
    return canonical_code(rule_->shape(), rule_->model(), scratch_);
  }
  Label labels_at(std::span<const Seed> seeds, const std::vector<int>& ids) { return rule_->lookup(code_at(seeds, ids)); }
  std::uint32_t index_at(std::span<const Seed> seeds, const std::vector<int>& ids)
  {
    return rule_->ball_index(code_at(seeds, ids));
  }

  const LocalRule* rule_;
  const EdgeBall* edge_;
  std::vector<Seed> scratch_;
};

inline void check_edge_budget(const EdgeBall& edge, const SeedModel& model)
{
  const bool ok = raw_configuration_count(model, edge.size()) <= kEnumerationBudget &&
                  (!model.has_ranks() || edge.size() <= kRankBallLimit);
  if (!ok) {
    throw Error(ErrorCode::BudgetExceeded, "edge ball of " + std::to_string(edge.size()) + " vertices under " +
                                               model.to_string() + " is beyond the exact enumeration budget");
  }
}

/// Visits every raw seed configuration of the edge ball in lexicographic
/// order: tags as base-q digits with vertex 0 most significant, then rank
/// permutations in lexicographic order (seed value = rank). `visit` returns
/// false to stop early. Caller checks the budget.
template <class Visit>
void for_each_edge_configuration(const EdgeBall& edge, const SeedModel& model, Visit&& visit)
{
  const auto n = static_cast<std::size_t>(edge.size());
  std::vector<Seed> seeds(n);
  std::vector<std::uint32_t> tags(n, 0);
  std::vector<int> perm(n);
  while (true) {
    for (std::size_t i = 0; i < n; ++i) seeds[i].tag = tags[i];
    if (model.has_ranks()) {
      std::iota(perm.begin(), perm.end(), 1);
      do {
        for (std::size_t i = 0; i < n; ++i) seeds[i].value = perm[i];
        if (!visit(std::span<const Seed>(seeds))) return;
      } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
      if (!visit(std::span<const Seed>(seeds))) return;
    }
    if (!model.has_tags()) return;
    // Odometer, last vertex fastest.
    std::size_t k = n;
    while (k > 0 && tags[k - 1] + 1 == model.q) tags[--k] = 0;
    if (k == 0) return;
    ++tags[k - 1];
  }
}

/// Uniform random edge-ball configuration: i.i.d. tags and a uniform random
/// order (ranks 1..n as values).
template <class Rng>
void sample_edge_configuration(const SeedModel& model, Rng& rng, std::span<Seed> seeds)
{
  const auto n = seeds.size();
  if (model.has_tags()) {
    std::uniform_int_distribution<std::uint32_t> tag(0, model.q - 1);
    for (auto& s : seeds) s.tag = tag(rng);
  }
  if (model.has_ranks()) {
    for (std::size_t i = 0; i < n; ++i) seeds[i].value = static_cast<double>(i + 1);
    for (std::size_t i = n; i > 1; --i) {
      std::uniform_int_distribution<std::size_t> pick(0, i - 1);
      std::swap(seeds[i - 1].value, seeds[pick(rng)].value);
    }
  }
}

}  // namespace fiid
