#include <catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "fiid/graph.hpp"
#include "oracles.hpp"

using namespace fiid;

namespace {

FiniteGraph random_simple_graph(int n, double p, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.emplace_back(u, v);
    }
  }
  return FiniteGraph(n, edges);
}

FiniteGraph path_graph(int n)
{
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return FiniteGraph(n, edges);
}

ErrorCode code_of(auto&& f)
{
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("build_graph basics", "[graphs]")
{
  const std::vector<Edge> k2 = {{0, 1}};
  const auto g = build_graph(2, k2);
  CHECK(g.vertex_count() == 2);
  CHECK(g.edge_count() == 1);
  CHECK(g.adjacent(0, 1));
  CHECK(g.adjacent(1, 0));

  std::vector<Edge> c5;
  for (int i = 0; i < 5; ++i) c5.emplace_back(i, (i + 1) % 5);
  CHECK(build_graph(5, c5).edge_count() == 5);
}

TEST_CASE("build_graph rejects bad edges", "[graphs]")
{
  const std::vector<Edge> loop = {{0, 0}};
  CHECK(code_of([&] { build_graph(3, loop); }) == ErrorCode::LoopEdge);
  const std::vector<Edge> dup = {{0, 1}, {1, 0}};
  CHECK(code_of([&] { build_graph(3, dup); }) == ErrorCode::DuplicateEdge);
  const std::vector<Edge> out = {{0, 3}};
  CHECK(code_of([&] { build_graph(3, out); }) == ErrorCode::VertexOutOfRange);
  const std::vector<Edge> neg = {{-1, 0}};
  CHECK(code_of([&] { build_graph(3, neg); }) == ErrorCode::VertexOutOfRange);
}

TEST_CASE("adjacency is sorted, symmetric and counts edges", "[graphs]")
{
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = random_simple_graph(12, 0.3, seed);
    long long degree_sum = 0;
    for (int v = 0; v < g.vertex_count(); ++v) {
      const auto nb = g.neighbors(v);
      CHECK(std::is_sorted(nb.begin(), nb.end()));
      CHECK(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
      for (int w : nb) {
        CHECK(w != v);
        CHECK(g.adjacent(w, v));
      }
      degree_sum += g.degree(v);
    }
    CHECK(degree_sum == 2LL * g.edge_count());
  }
}

TEST_CASE("profile examples", "[graphs]")
{
  const auto c5 = profile(named_graph("C5"));
  CHECK(c5.girth.length() == 5);
  CHECK(c5.regular_degree == 2);
  CHECK_FALSE(c5.bipartite);
  CHECK(c5.connected);

  const auto p4 = profile(path_graph(4));
  CHECK(p4.girth.is_infinite());
  CHECK(p4.bipartite);
  CHECK_FALSE(p4.regular_degree.has_value());
  CHECK(p4.girth.to_string() == "Infinite");
  CHECK_THROWS_AS(p4.girth.length(), Error);

  const auto heawood = named_graph("Heawood");
  const auto hp = profile(heawood);
  CHECK(hp.girth.length() == 6);
  CHECK(hp.regular_degree == 3);
  CHECK(hp.bipartite);
  CHECK(oracle::girth(heawood) == 6);

  const auto empty = profile(FiniteGraph(0, {}));
  CHECK(empty.girth.is_infinite());
}

TEST_CASE("named graphs", "[graphs]")
{
  struct Row {
    const char* name;
    int n;
    int degree;
    int girth;
  };
  const Row rows[] = {{"K2", 2, 1, 0},      {"K3", 3, 2, 3},      {"K4", 4, 3, 3},      {"C5", 5, 2, 5},
                      {"Petersen", 10, 3, 5}, {"Heawood", 14, 3, 6}, {"McGee", 24, 3, 7}};
  for (const auto& row : rows) {
    INFO(row.name);
    CHECK(is_named_graph(row.name));
    const auto g = named_graph(row.name);
    const auto p = profile(g);
    CHECK(g.vertex_count() == row.n);
    CHECK(p.regular_degree == row.degree);
    CHECK(p.connected);
    const auto brute = oracle::girth(g);
    if (row.girth == 0) {
      CHECK(p.girth.is_infinite());
      CHECK_FALSE(brute.has_value());
    } else {
      CHECK(p.girth.length() == row.girth);
      CHECK(brute == row.girth);
    }
  }
  CHECK_FALSE(is_named_graph("K5"));
  CHECK(code_of([] { named_graph("Octahedron"); }) == ErrorCode::UnknownName);
}

TEST_CASE("named graph numbering is fixed", "[graphs]")
{
  const auto p = named_graph("Petersen");
  for (int i = 0; i < 5; ++i) {
    CHECK(p.adjacent(i, (i + 1) % 5));
    CHECK(p.adjacent(i, i + 5));
    CHECK(p.adjacent(5 + i, 5 + (i + 2) % 5));
  }
  const auto h = named_graph("Heawood");
  for (int i = 0; i < 14; ++i) CHECK(h.adjacent(i, (i + 1) % 14));
  CHECK(h.adjacent(0, 5));
  CHECK(h.adjacent(1, 10));
  const auto m = named_graph("McGee");
  for (int i = 0; i < 24; ++i) CHECK(m.adjacent(i, (i + 1) % 24));
  CHECK(m.adjacent(0, 12));
  CHECK(m.adjacent(1, 8));
  CHECK(m.adjacent(2, 19));
}

TEST_CASE("BFS girth matches brute-force cycle search", "[graphs][property]")
{
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    std::mt19937_64 rng(seed);
    const int n = 3 + static_cast<int>(rng() % 10);
    const double p = 0.15 + 0.05 * static_cast<double>(rng() % 8);
    const auto g = random_simple_graph(n, p, seed * 7 + 1);
    const auto bfs = girth(g);
    const auto brute = oracle::girth(g);
    INFO("seed " << seed);
    CHECK(bfs.is_infinite() == !brute.has_value());
    if (brute) CHECK(bfs.length() == *brute);
    const auto prof = profile(g);
    if (prof.bipartite && !prof.girth.is_infinite()) CHECK(prof.girth.length() % 2 == 0);
  }
}

TEST_CASE("random_regular examples", "[graphs]")
{
  const auto g = random_regular(100, 3, 7);
  CHECK(g.edge_count() == 150);
  for (int v = 0; v < 100; ++v) CHECK(g.degree(v) == 3);
  CHECK(code_of([] { random_regular(5, 3, 1); }) == ErrorCode::ParityError);
  CHECK(code_of([] { random_regular(4, 4, 1); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { random_regular(4, 3, 1, 0); }) == ErrorCode::RetryBudgetExceeded);
}

TEST_CASE("random_regular is deterministic, simple and regular", "[graphs][property]")
{
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto a = random_regular(200, 3, seed);
    const auto b = random_regular(200, 3, seed);
    CHECK(a == b);
    CHECK(profile(a).regular_degree == 3);
  }
  CHECK_FALSE(random_regular(200, 3, 1) == random_regular(200, 3, 2));
  CHECK(profile(random_regular(30, 4, 5)).regular_degree == 4);
}

TEST_CASE("few vertices of random cubic graphs lie on short cycles", "[graphs]")
{
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto g = random_regular(10000, 3, seed);
    // A vertex is on a cycle of length <= 6 iff some edge at it closes a path
    // of length <= 5 avoiding that edge.
    int on_short = 0;
    for (int v = 0; v < g.vertex_count(); ++v) {
      bool found = false;
      for (int w : g.neighbors(v)) {
        std::vector<int> dist(static_cast<std::size_t>(g.vertex_count()), -1);
        std::vector<int> queue = {w};
        dist[static_cast<std::size_t>(w)] = 0;
        for (std::size_t i = 0; i < queue.size() && !found; ++i) {
          const int x = queue[i];
          if (dist[static_cast<std::size_t>(x)] >= 5) break;
          for (int y : g.neighbors(x)) {
            if (x == w && y == v) continue;
            if (y == v) {
              found = true;
              break;
            }
            if (dist[static_cast<std::size_t>(y)] < 0) {
              dist[static_cast<std::size_t>(y)] = dist[static_cast<std::size_t>(x)] + 1;
              queue.push_back(y);
            }
          }
        }
        if (found) break;
      }
      on_short += found;
    }
    CHECK(on_short < 200);
  }
}

TEST_CASE("induced_two_coloring examples", "[graphs]")
{
  const auto c5 = named_graph("C5");
  const std::vector<int> s = {0, 1, 2};
  const auto col = induced_two_coloring(c5, s);
  const PartialColoring expected = {{0, TwoColor::A}, {1, TwoColor::B}, {2, TwoColor::A}};
  CHECK(col == expected);

  const std::vector<int> all = {0, 1, 2, 3, 4};
  try {
    induced_two_coloring(c5, all);
    FAIL("expected InducedCycle");
  } catch (const InducedCycleError& e) {
    CHECK(e.code() == ErrorCode::InducedCycle);
    const auto& cyc = e.cycle();
    REQUIRE(cyc.size() == 5);
    for (std::size_t i = 0; i < cyc.size(); ++i) CHECK(c5.adjacent(cyc[i], cyc[(i + 1) % cyc.size()]));
  }

  // Components are rooted at their smallest vertex.
  const std::vector<int> split = {3, 0, 1};
  const auto two = induced_two_coloring(c5, split);
  for (auto [v, c] : two) {
    if (v == 0 || v == 3) CHECK((v == 0 ? c == TwoColor::A : true));
  }
  CHECK(induced_two_coloring(c5, std::vector<int>{}).empty());
}

TEST_CASE("subsets smaller than the girth induce forests", "[graphs][property]")
{
  const auto pet = named_graph("Petersen");
  int subsets = 0;
  for (int mask = 0; mask < (1 << 10); ++mask) {
    if (std::popcount(static_cast<unsigned>(mask)) != 4) continue;
    std::vector<int> s;
    for (int v = 0; v < 10; ++v) {
      if (mask >> v & 1) s.push_back(v);
    }
    const auto col = induced_two_coloring(pet, s);
    for (auto [a, ca] : col) {
      for (auto [b, cb] : col) {
        if (pet.adjacent(a, b)) CHECK(ca != cb);
      }
    }
    ++subsets;
  }
  CHECK(subsets == 210);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = random_simple_graph(10, 0.3, seed + 100);
    const auto gi = girth(g);
    for (int mask = 0; mask < (1 << 10); ++mask) {
      std::vector<int> s;
      for (int v = 0; v < 10; ++v) {
        if (mask >> v & 1) s.push_back(v);
      }
      const bool acyclic = oracle::induced_acyclic(g, s);
      if (gi.exceeds(static_cast<long long>(s.size()))) CHECK(acyclic);
      if (acyclic) {
        CHECK_NOTHROW(induced_two_coloring(g, s));
      } else {
        CHECK_THROWS_AS(induced_two_coloring(g, s), InducedCycleError);
      }
    }
  }
}

TEST_CASE("exact invariants examples", "[graphs]")
{
  const auto c5 = exact_invariants(named_graph("C5"));
  CHECK(c5.independence_number == 2);
  CHECK(c5.chromatic_number == 3);
  const auto k4 = exact_invariants(named_graph("K4"));
  CHECK(k4.independence_number == 1);
  CHECK(k4.chromatic_number == 4);
  const auto pet = exact_invariants(named_graph("Petersen"));
  CHECK(pet.independence_number == 4);
  CHECK(pet.chromatic_number == 3);
  CHECK(oracle::independence_number(named_graph("Petersen")) == 4);
  CHECK(oracle::chromatic_number(named_graph("Petersen")) == 3);
  const auto hea = exact_invariants(named_graph("Heawood"));
  CHECK(hea.independence_number == 7);
  CHECK(hea.chromatic_number == 2);
  const auto mcg = exact_invariants(named_graph("McGee"));
  CHECK(mcg.independence_number == 10);
  CHECK(mcg.chromatic_number == 3);
  CHECK(code_of([] { exact_invariants(random_regular(42, 3, 1)); }) == ErrorCode::TooLarge);
  const auto none = exact_invariants(FiniteGraph(0, {}));
  CHECK(none.independence_number == 0);
  CHECK(none.chromatic_number == 0);
}

TEST_CASE("exact invariants agree with exhaustive search", "[graphs][property]")
{
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int n = 1 + static_cast<int>(seed % 10);
    const auto g = random_simple_graph(n, 0.2 + 0.1 * static_cast<double>(seed % 6), seed + 500);
    const auto inv = exact_invariants(g);
    INFO("seed " << seed);
    CHECK(inv.independence_number == oracle::independence_number(g));
    CHECK(inv.chromatic_number == oracle::chromatic_number(g));
    CHECK(inv.chromatic_number * inv.independence_number >= n);
  }
}

TEST_CASE("graph file round trip", "[graphs]")
{
  const auto g = random_regular(30, 3, 11);
  std::stringstream buf;
  write_graph(buf, g);
  const std::string text = buf.str();
  CHECK(text.substr(0, text.find('\n')) == "30 45");
  const auto back = read_graph(buf);
  CHECK(back == g);
  std::stringstream again;
  write_graph(again, back);
  CHECK(again.str() == text);

  std::stringstream bad_header("x y");
  CHECK(code_of([&] { read_graph(bad_header); }) == ErrorCode::ParseError);
  std::stringstream short_list("3 2\n0 1\n");
  CHECK(code_of([&] { read_graph(short_list); }) == ErrorCode::ParseError);
  std::stringstream range("3 1\n0 7\n");
  CHECK(code_of([&] { read_graph(range); }) == ErrorCode::VertexOutOfRange);
  std::stringstream trailing("2 1\n0 1\n5\n");
  CHECK(code_of([&] { read_graph(trailing); }) == ErrorCode::ParseError);
}
