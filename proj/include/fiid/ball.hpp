#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fiid/error.hpp"

namespace fiid {

// Seed models -----------------------------------------------------------------

enum class SeedKind { Alphabet, Rank, Hybrid };

/// How i.i.d. randomness enters a rule. Alphabet: uniform tags in 0..q-1.
/// Rank: only the relative order of continuous seeds inside the ball.
/// Hybrid: a q-ary tag plus the rank.
struct SeedModel {
  SeedKind kind = SeedKind::Rank;
  unsigned q = 0;

  static SeedModel alphabet(unsigned q) { return check({SeedKind::Alphabet, q}); }
  static SeedModel rank() { return {SeedKind::Rank, 0}; }
  static SeedModel hybrid(unsigned q) { return check({SeedKind::Hybrid, q}); }

  bool has_tags() const { return kind != SeedKind::Rank; }
  bool has_ranks() const { return kind != SeedKind::Alphabet; }
  /// Bytes per vertex in a canonical code.
  std::size_t width() const { return kind == SeedKind::Hybrid ? 2 : 1; }

  std::string to_string() const
  {
    switch (kind) {
      case SeedKind::Alphabet: return "alphabet:" + std::to_string(q);
      case SeedKind::Rank: return "rank";
      case SeedKind::Hybrid: return "hybrid:" + std::to_string(q);
    }
    return "?";
  }

  /// Accepts `alphabet:q`, `rank`, `hybrid:q`.
  static SeedModel parse(std::string_view text)
  {
    if (text == "rank") return rank();
    auto parse_q = [&](std::string_view rest) {
      unsigned value = 0;
      if (rest.empty()) throw Error(ErrorCode::ParseError, "missing alphabet size in '" + std::string(text) + "'");
      for (char c : rest) {
        if (c < '0' || c > '9') throw Error(ErrorCode::ParseError, "bad alphabet size in '" + std::string(text) + "'");
        value = value * 10 + static_cast<unsigned>(c - '0');
        if (value > 1000) throw Error(ErrorCode::ParseError, "alphabet size too large");
      }
      return value;
    };
    if (text.starts_with("alphabet:")) return alphabet(parse_q(text.substr(9)));
    if (text.starts_with("hybrid:")) return hybrid(parse_q(text.substr(7)));
    throw Error(ErrorCode::ParseError, "unknown seed model '" + std::string(text) + "'");
  }

  friend bool operator==(const SeedModel&, const SeedModel&) = default;

 private:
  static SeedModel check(SeedModel m)
  {
    if (m.q < 2 || m.q > 255) throw Error(ErrorCode::InvalidArgument, "alphabet size must be in 2..255");
    return m;
  }
};

/// Per-vertex seed data. `tag` is read under Alphabet/Hybrid, `value` (only
/// its order within the ball) under Rank/Hybrid.
struct Seed {
  std::uint32_t tag = 0;
  double value = 0.0;

  friend bool operator==(const Seed&, const Seed&) = default;
};

// Ball shapes -------------------------------------------------------------------

/// A rooted tree of fixed depth laid out in BFS order: the root has
/// `root_arity` children, every other internal vertex has d-1.
/// TreeShape::ball(d, t) is the radius-t ball of T_d.
struct TreeShape {
  int d = 0;
  int t = 0;
  int root_arity = 0;
  std::vector<int> parent;
  std::vector<int> depth;
  std::vector<std::vector<int>> children;

  static TreeShape make(int d, int t, int root_arity)
  {
    if (d < 1 || d > 16 || t < 0) throw Error(ErrorCode::InvalidArgument, "tree shape needs 1 <= d <= 16, t >= 0");
    TreeShape s;
    s.d = d;
    s.t = t;
    s.root_arity = root_arity;
    s.parent.push_back(-1);
    s.depth.push_back(0);
    s.children.emplace_back();
    for (std::size_t i = 0; i < s.parent.size(); ++i) {
      if (s.depth[i] == t) continue;
      const int arity = i == 0 ? root_arity : d - 1;
      for (int k = 0; k < arity; ++k) {
        const int id = static_cast<int>(s.parent.size());
        s.parent.push_back(static_cast<int>(i));
        s.depth.push_back(s.depth[i] + 1);
        s.children.emplace_back();
        s.children[i].push_back(id);
      }
      if (s.parent.size() > 4096) throw Error(ErrorCode::BudgetExceeded, "ball too large");
    }
    return s;
  }

  static TreeShape ball(int d, int t) { return make(d, t, d); }
  /// One side of an edge ball: the root keeps d-1 children.
  static TreeShape half(int d, int t) { return make(d, t, d - 1); }

  int size() const { return static_cast<int>(parent.size()); }
};

inline int ball_size(int d, int t) { return TreeShape::ball(d, t).size(); }

// Canonical codes -------------------------------------------------------------

/// Canonical code of a seed-labeled rooted ball: depth-first, each vertex
/// emits its label bytes followed by its children's codes sorted
/// lexicographically. Siblings sit at equal depth, so their codes have equal
/// length and the concatenation is unambiguous.
using Code = std::string;

inline std::string to_hex(std::string_view bytes)
{
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

inline std::string from_hex(std::string_view hex)
{
  auto nibble = [&](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw Error(ErrorCode::ParseError, "bad hex '" + std::string(hex) + "'");
  };
  if (hex.size() % 2 != 0) throw Error(ErrorCode::ParseError, "odd-length hex '" + std::string(hex) + "'");
  std::string out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    out.push_back(static_cast<char>(nibble(hex[i]) * 16 + nibble(hex[i + 1])));
  }
  return out;
}

struct CanonicalBall {
  int d = 0;
  int t = 0;
  SeedModel model;
  Code code;

  std::string hex() const { return to_hex(code); }

  friend bool operator==(const CanonicalBall&, const CanonicalBall&) = default;
};

namespace detail {

/// Per-vertex label bytes, packed as the model's width.
struct NodeLabels {
  std::array<char, 2> bytes[64];
  std::size_t width = 1;
};

inline void append_code(const TreeShape& shape, const NodeLabels& labels, int node, int remaining, Code& out)
{
  out.append(labels.bytes[node].data(), labels.width);
  const auto& kids = shape.children[static_cast<std::size_t>(node)];
  if (remaining == 0 || kids.empty()) return;
  if (kids.size() == 1) {
    append_code(shape, labels, kids[0], remaining - 1, out);
    return;
  }
  std::array<Code, 16> parts;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    parts[i].clear();
    append_code(shape, labels, kids[i], remaining - 1, parts[i]);
  }
  std::sort(parts.begin(), parts.begin() + static_cast<std::ptrdiff_t>(kids.size()));
  for (std::size_t i = 0; i < kids.size(); ++i) out += parts[i];
}

/// Fills `labels` from seeds; under Rank/Hybrid the value is replaced by its
/// 1-based rank among the given seeds (ascending). Ties are rejected.
inline void fill_labels(std::span<const Seed> seeds, const SeedModel& model, NodeLabels& labels)
{
  const std::size_t n = seeds.size();
  if (n > 64) throw Error(ErrorCode::MalformedBall, "ball too large for canonical encoding");
  labels.width = model.width();
  std::array<std::uint8_t, 64> rank{};
  if (model.has_ranks()) {
    std::array<std::uint8_t, 64> order{};
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint8_t>(i);
    std::sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n),
              [&](std::uint8_t a, std::uint8_t b) { return seeds[a].value < seeds[b].value; });
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0 && !(seeds[order[i - 1]].value < seeds[order[i]].value)) {
        throw Error(ErrorCode::MalformedBall, "tied rank seeds");
      }
      rank[order[i]] = static_cast<std::uint8_t>(i + 1);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (model.has_tags() && seeds[i].tag >= model.q) {
      throw Error(ErrorCode::MalformedBall, "tag " + std::to_string(seeds[i].tag) + " outside alphabet");
    }
    switch (model.kind) {
      case SeedKind::Alphabet: labels.bytes[i][0] = static_cast<char>(seeds[i].tag); break;
      case SeedKind::Rank: labels.bytes[i][0] = static_cast<char>(rank[i]); break;
      case SeedKind::Hybrid:
        labels.bytes[i][0] = static_cast<char>(seeds[i].tag);
        labels.bytes[i][1] = static_cast<char>(rank[i]);
        break;
    }
  }
}

}  // namespace detail

/// Canonical code of the radius-t ball whose seeds are given in
/// TreeShape::ball(d, t) layout. Throws MalformedBall on wrong size, tags
/// outside the alphabet, or tied rank seeds.
inline Code canonical_code(const TreeShape& shape, const SeedModel& model, std::span<const Seed> seeds)
{
  if (static_cast<int>(seeds.size()) != shape.size()) {
    throw Error(ErrorCode::MalformedBall, "expected " + std::to_string(shape.size()) + " seeds, got " +
                                              std::to_string(seeds.size()));
  }
  detail::NodeLabels labels;
  detail::fill_labels(seeds, model, labels);
  Code code;
  code.reserve(seeds.size() * labels.width);
  detail::append_code(shape, labels, 0, shape.t, code);
  return code;
}

inline CanonicalBall canonicalize(int d, int t, const SeedModel& model, std::span<const Seed> seeds)
{
  return {d, t, model, canonical_code(TreeShape::ball(d, t), model, seeds)};
}

/// Seeds in BFS layout reproducing the canonical arrangement of `ball`
/// (ranks become values 1..size). canonicalize(decode(b)) == b.
inline std::vector<Seed> decode(const CanonicalBall& ball)
{
  const TreeShape shape = TreeShape::ball(ball.d, ball.t);
  const std::size_t width = ball.model.width();
  if (ball.code.size() != static_cast<std::size_t>(shape.size()) * width) {
    throw Error(ErrorCode::MalformedBall, "code length does not match ball shape");
  }
  std::vector<Seed> seeds(static_cast<std::size_t>(shape.size()));
  // Pre-order walk with children in layout order matches the code layout.
  std::size_t pos = 0;
  auto visit = [&](auto&& self, int node) -> void {
    const auto* bytes = reinterpret_cast<const unsigned char*>(ball.code.data()) + pos;
    pos += width;
    switch (ball.model.kind) {
      case SeedKind::Alphabet: seeds[node].tag = bytes[0]; break;
      case SeedKind::Rank: seeds[node].value = bytes[0]; break;
      case SeedKind::Hybrid:
        seeds[node].tag = bytes[0];
        seeds[node].value = bytes[1];
        break;
    }
    for (int child : shape.children[static_cast<std::size_t>(node)]) self(self, child);
  };
  visit(visit, 0);
  if (canonical_code(shape, ball.model, seeds) != ball.code) {
    throw Error(ErrorCode::MalformedBall, "code is not canonical");
  }
  return seeds;
}

/// Number of raw labelings in the orbit of `ball` under root-fixing
/// automorphisms: |Aut(shape)| / |Aut(labeled ball)|.
inline std::uint64_t orbit_size(const CanonicalBall& ball)
{
  const TreeShape shape = TreeShape::ball(ball.d, ball.t);
  const std::vector<Seed> seeds = decode(ball);
  detail::NodeLabels labels;
  detail::fill_labels(seeds, ball.model, labels);
  auto factorial = [](std::size_t k) {
    std::uint64_t f = 1;
    for (std::size_t i = 2; i <= k; ++i) f *= i;
    return f;
  };
  std::uint64_t orbit = 1;
  for (int node = 0; node < shape.size(); ++node) {
    const auto& kids = shape.children[static_cast<std::size_t>(node)];
    if (kids.empty()) continue;
    std::vector<Code> parts;
    for (int child : kids) {
      Code c;
      detail::append_code(shape, labels, child, shape.t, c);
      parts.push_back(std::move(c));
    }
    std::sort(parts.begin(), parts.end());
    std::uint64_t stabilizer = 1;
    std::size_t run = 1;
    for (std::size_t i = 1; i <= parts.size(); ++i) {
      if (i < parts.size() && parts[i] == parts[i - 1]) {
        ++run;
      } else {
        stabilizer *= factorial(run);
        run = 1;
      }
    }
    orbit *= factorial(kids.size()) / stabilizer;
  }
  return orbit;
}

// Enumeration --------------------------------------------------------------------

inline constexpr double kEnumerationBudget = 1e7;
inline constexpr int kRankBallLimit = 10;

/// Number of raw seed configurations on `vertices` vertices (as a double, for
/// budget checks).
inline double raw_configuration_count(const SeedModel& model, int vertices)
{
  double count = 1.0;
  if (model.has_tags()) count *= std::pow(static_cast<double>(model.q), vertices);
  if (model.has_ranks()) count *= std::tgamma(vertices + 1.0);
  return count;
}

inline void check_vertex_budget(int d, int t, const SeedModel& model)
{
  const int size = ball_size(d, t);
  const bool ok = model.kind == SeedKind::Rank ? size <= kRankBallLimit
                                               : raw_configuration_count(model, size) <= kEnumerationBudget &&
                                                     (!model.has_ranks() || size <= kRankBallLimit);
  if (!ok) {
    throw Error(ErrorCode::BudgetExceeded, "ball of " + std::to_string(size) + " vertices under " +
                                               model.to_string() + " is beyond the enumeration budget");
  }
}

namespace detail {

// All canonical codes of a subtree whose root has `arity` children and whose
// non-root vertices have d-1, to the given depth; sorted ascending.
inline std::vector<Code> alphabet_subtree_codes(int d, int depth, int arity, unsigned q)
{
  std::vector<Code> below;
  if (depth > 0) below = alphabet_subtree_codes(d, depth - 1, d - 1, q);
  std::vector<Code> out;
  std::vector<std::size_t> pick(static_cast<std::size_t>(depth > 0 ? arity : 0), 0);
  for (unsigned tag = 0; tag < q; ++tag) {
    if (depth == 0 || arity == 0) {
      out.emplace_back(1, static_cast<char>(tag));
      continue;
    }
    std::fill(pick.begin(), pick.end(), 0);
    while (true) {
      Code c(1, static_cast<char>(tag));
      for (std::size_t i : pick) c += below[i];
      out.push_back(std::move(c));
      // Next nondecreasing index tuple.
      int k = static_cast<int>(pick.size()) - 1;
      while (k >= 0 && pick[static_cast<std::size_t>(k)] + 1 == below.size()) --k;
      if (k < 0) break;
      const std::size_t v = pick[static_cast<std::size_t>(k)] + 1;
      for (std::size_t j = static_cast<std::size_t>(k); j < pick.size(); ++j) pick[j] = v;
    }
  }
  return out;
}

// Canonical layouts under Rank/Hybrid: all labels are distinct, so a layout
// is canonical iff every sibling group is increasing by (tag, rank).
inline void ranked_layouts(const TreeShape& shape, const SeedModel& model, std::vector<Code>& out)
{
  const int n = shape.size();
  std::vector<Seed> seeds(static_cast<std::size_t>(n));
  std::vector<int> prev_sibling(static_cast<std::size_t>(n), -1);
  for (const auto& kids : shape.children) {
    for (std::size_t i = 1; i < kids.size(); ++i) prev_sibling[kids[i]] = kids[i - 1];
  }
  std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
  const unsigned tags = model.has_tags() ? model.q : 1;
  auto less = [](const Seed& a, const Seed& b) {
    return a.tag != b.tag ? a.tag < b.tag : a.value < b.value;
  };
  auto place = [&](auto&& self, int pos) -> void {
    if (pos == n) {
      out.push_back(canonical_code(shape, model, seeds));
      return;
    }
    for (unsigned tag = 0; tag < tags; ++tag) {
      for (int r = 1; r <= n; ++r) {
        if (used[r]) continue;
        Seed s{tag, static_cast<double>(r)};
        const int sib = prev_sibling[pos];
        if (sib >= 0 && !less(seeds[sib], s)) continue;
        seeds[pos] = s;
        used[r] = 1;
        self(self, pos + 1);
        used[r] = 0;
      }
    }
  };
  place(place, 0);
}

}  // namespace detail

/// One representative per orbit of root-fixing automorphisms, sorted by code.
/// Budget: Alphabet q^size <= 1e7; Rank size <= 10; Hybrid both.
inline std::vector<CanonicalBall> enumerate_canonical_balls(int d, int t, const SeedModel& model)
{
  check_vertex_budget(d, t, model);
  std::vector<Code> codes;
  if (model.kind == SeedKind::Alphabet) {
    codes = detail::alphabet_subtree_codes(d, t, d, model.q);
  } else {
    detail::ranked_layouts(TreeShape::ball(d, t), model, codes);
    std::sort(codes.begin(), codes.end());
  }
  std::vector<CanonicalBall> out;
  out.reserve(codes.size());
  for (auto& c : codes) out.push_back({d, t, model, std::move(c)});
  return out;
}

// Ball extraction from host graphs ----------------------------------------------

/// Maps the radius-t ball around `root` of a host graph onto the
/// TreeShape::ball(d, t) layout. Succeeds only when the ball is an induced
/// tree and every vertex at depth < t has degree exactly d, i.e. when the
/// ball is isomorphic to the ball of T_d. `mark` holds one zeroed entry per
/// host vertex and is zero again on return.
template <class Adjacency>
bool extract_tree_ball(const Adjacency& adj, int root, int d, int t, std::vector<char>& mark, std::vector<int>& out)
{
  out.clear();
  out.push_back(root);
  thread_local std::vector<int> parent;
  thread_local std::vector<int> depth;
  parent.assign(1, -1);
  depth.assign(1, 0);
  mark[static_cast<std::size_t>(root)] = 1;
  bool ok = true;
  for (std::size_t i = 0; i < out.size() && ok; ++i) {
    const int x = out[i];
    const auto& nbrs = adj[x];
    const int deg = static_cast<int>(std::size(nbrs));
    if (depth[i] < t) {
      if (deg != d) {
        ok = false;
        break;
      }
      for (int y : nbrs) {
        if (y == parent[i]) continue;
        if (mark[static_cast<std::size_t>(y)]) {
          ok = false;
          break;
        }
        mark[static_cast<std::size_t>(y)] = 1;
        out.push_back(y);
        parent.push_back(x);
        depth.push_back(depth[i] + 1);
      }
    } else {
      // Leaves: an edge back into the ball would close a cycle.
      for (int y : nbrs) {
        if (y != parent[i] && mark[static_cast<std::size_t>(y)]) {
          ok = false;
          break;
        }
      }
    }
  }
  for (int v : out) mark[static_cast<std::size_t>(v)] = 0;
  return ok;
}

}  // namespace fiid
