#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fiid/homsearch.hpp"
#include "fiid/simulate.hpp"

using namespace fiid;
using Catch::Matchers::WithinAbs;

namespace {

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

std::vector<double> histogram_law(const SimulationReport& rep)
{
  std::vector<double> p;
  for (auto c : rep.histogram) p.push_back(static_cast<double>(c) / static_cast<double>(rep.covered));
  return p;
}

Marginals uniform_edge_law(const FiniteGraph& h)
{
  const auto n = static_cast<std::size_t>(h.vertex_count());
  std::vector<Rational> q(n * n, 0);
  const Rational w(1, 2 * h.edge_count());
  for (auto [u, v] : h.edges()) {
    q[static_cast<std::size_t>(u) * n + static_cast<std::size_t>(v)] = w;
    q[static_cast<std::size_t>(v) * n + static_cast<std::size_t>(u)] = w;
  }
  Marginals m;
  m.edge = PairDistribution::from_exact(vertex_alphabet(h.vertex_count()), q);
  m.vertex = m.edge.row_marginal();
  return m;
}

}  // namespace

TEST_CASE("max-seed rule emulates an independent set", "[simulate]")
{
  const auto g = random_regular(10'000, 3, 1);
  const auto [labeling, rep] = run_on_graph(max_seed_independent_rule(), g, 2);
  REQUIRE(rep.in_fraction);
  CHECK_THAT(*rep.in_fraction, WithinAbs(0.25, 0.01));
  CHECK(*rep.adjacent_in_in == 0);
  CHECK(rep.covered_fraction > 0.95);
  CHECK(rep.n == 10'000);
  CHECK(rep.rank_collisions == 0);
  for (auto [u, v] : g.edges()) {
    const auto& a = labeling[static_cast<std::size_t>(u)];
    const auto& b = labeling[static_cast<std::size_t>(v)];
    if (a && b) CHECK_FALSE((*a == 0 && *b == 0));
  }
}

TEST_CASE("constant rules label every vertex", "[simulate]")
{
  for (const char* name : {"K4", "Petersen", "C5"}) {
    const auto g = named_graph(name);
    const auto [labeling, rep] = run_on_graph(constant_rule(3, 0, SeedModel::rank(), {"x", "y"}, 1), g, 3);
    CHECK(rep.covered_fraction == 1.0);
    CHECK(rep.histogram == std::vector<std::uint64_t>{0, static_cast<std::uint64_t>(g.vertex_count())});
    for (const auto& x : labeling) CHECK(x == Label{1});
    CHECK_FALSE(rep.in_fraction);
  }
}

TEST_CASE("vertices near short cycles are uncovered", "[simulate]")
{
  const std::vector<Edge> k4_minus = {{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}};
  const auto g = build_graph(4, k4_minus);
  const auto rule = random_rule(3, 1, SeedModel::rank(), {"a", "b"}, 4);
  const auto [labeling, rep] = run_on_graph(rule, g, 5);
  CHECK(rep.covered == 0);
  for (const auto& x : labeling) CHECK_FALSE(x);

  // Petersen has girth 5, so radius-1 balls are trees but radius-2 balls are not.
  const auto p = named_graph("Petersen");
  CHECK(run_on_graph(random_rule(3, 1, SeedModel::alphabet(2), {"a"}, 1), p, 1).second.covered_fraction == 1.0);
  CHECK(run_on_graph(random_rule(3, 2, SeedModel::alphabet(2), {"a"}, 1), p, 1).second.covered == 0);
  CHECK(run_on_graph(random_rule(3, 2, SeedModel::alphabet(2), {"a"}, 1), named_graph("Heawood"), 1).second.covered_fraction ==
        1.0);

  // A vertex of degree below d at depth < t is uncovered.
  const std::vector<Edge> path = {{0, 1}, {1, 2}};
  CHECK(run_on_graph(random_rule(3, 1, SeedModel::rank(), {"a"}, 1), build_graph(3, path), 1).second.covered == 0);
}

TEST_CASE("emulation rejects hosts of excessive degree", "[simulate]")
{
  const std::vector<Edge> star = {{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  const auto g = build_graph(5, star);
  CHECK(code_of([&] { run_on_graph(max_seed_independent_rule(), g, 1); }) == ErrorCode::DegreeMismatch);
}

TEST_CASE("emulation is deterministic and thread independent", "[simulate]")
{
  const auto g = random_regular(5'000, 3, 7);
  for (const auto& model : {SeedModel::rank(), SeedModel::alphabet(3), SeedModel::hybrid(2)}) {
    const auto rule = random_rule(3, 1, model, {"a", "b", "c"}, 8);
    const auto a = run_on_graph(rule, g, 9);
    const auto b = run_on_graph(rule, g, 9);
    const auto c = run_on_graph(rule, g, 9, nullptr, 4);
    CHECK(a.first == b.first);
    CHECK(a.first == c.first);
    CHECK(a.second.histogram == c.second.histogram);
    const auto other = run_on_graph(rule, g, 10);
    CHECK(other.first != a.first);
  }
}

TEST_CASE("host seeds follow the model", "[simulate]")
{
  const auto rank = draw_host_seeds(1000, SeedModel::rank(), 1);
  std::vector<double> values;
  for (const auto& s : rank.seeds) values.push_back(s.value);
  std::sort(values.begin(), values.end());
  for (std::size_t i = 0; i < values.size(); ++i) CHECK(values[i] == static_cast<double>(i));

  const auto tags = draw_host_seeds(1000, SeedModel::alphabet(4), 1);
  std::vector<int> seen(4, 0);
  for (const auto& s : tags.seeds) {
    REQUIRE(s.tag < 4);
    ++seen[s.tag];
  }
  for (int c : seen) CHECK(c > 150);
}

TEST_CASE("empirical histograms converge to the tree law", "[simulate]")
{
  const auto g = random_regular(100'000, 3, 11);
  const std::vector<LocalRule> rules = {max_seed_independent_rule(),
                                        random_rule(3, 1, SeedModel::alphabet(2), {"a", "b", "c"}, 12),
                                        random_rule(3, 1, SeedModel::rank(), {"a", "b", "c"}, 13)};
  for (const auto& rule : rules) {
    const auto rep = run_on_graph(rule, g, 14, nullptr, 4).second;
    CHECK(rep.covered_fraction > 0.99);
    const auto exact = exact_marginals(rule);
    CHECK(total_variation(histogram_law(rep), exact.vertex.p) < 0.02);
  }
}

TEST_CASE("violation statistics against a target", "[simulate]")
{
  const auto g = random_regular(2'000, 3, 15);
  const auto h = named_graph("K2");
  const auto ms = relabel(max_seed_independent_rule(), vertex_alphabet(2), std::vector<Label>{0, 1});
  const auto [labeling, rep] = run_on_graph(ms, g, 16, &h);
  REQUIRE(rep.covered_edges);
  std::uint64_t bad = 0;
  std::uint64_t covered_edges = 0;
  for (auto [u, v] : g.edges()) {
    const auto& a = labeling[static_cast<std::size_t>(u)];
    const auto& b = labeling[static_cast<std::size_t>(v)];
    if (!a || !b) continue;
    ++covered_edges;
    bad += *a == *b;
  }
  CHECK(*rep.covered_edges == covered_edges);
  CHECK(*rep.violating_edges == bad);
  CHECK(bad > 0);
  CHECK_THAT(*rep.violating_edge_fraction, WithinAbs(static_cast<double>(bad) / static_cast<double>(covered_edges), 1e-15));
  // Exact pair law puts 1/2 on (OUT, OUT).
  CHECK_THAT(*rep.violating_edge_fraction, WithinAbs(0.5, 0.05));
  std::uint64_t sum = 0;
  for (auto c : rep.histogram) sum += c;
  CHECK(sum == rep.covered);
}

TEST_CASE("pipeline refutes the constant rule at the support step", "[simulate][pipeline]")
{
  const auto h = named_graph("Petersen");
  const auto rule = constant_rule(3, 0, SeedModel::rank(), vertex_alphabet(10), 0);
  const auto rep = theorem_pipeline(rule, h, parse_decimal("0.089"), 5);
  CHECK(rep.refuted_at == 1);
  CHECK(rep.classification == "not a homomorphism (support)");
  CHECK(rep.steps.size() == 5);
  CHECK(rep.steps[0].status == StepStatus::Fail);
  CHECK(rep.marginal_mode == "Exact");
}

TEST_CASE("pipeline refutes the recoded max-seed rule", "[simulate][pipeline]")
{
  const auto h = named_graph("Petersen");
  REQUIRE(h.adjacent(0, 1));
  const auto rule = relabel(max_seed_independent_rule(), vertex_alphabet(10), std::vector<Label>{0, 1});
  const auto rep = theorem_pipeline(rule, h, parse_decimal("0.089"), 5);
  CHECK(rep.refuted_at == 1);
  CHECK(rep.support.margin == -0.5);
  const auto m = exact_marginals(rule);
  CHECK((*m.edge.exact)[1 * 10 + 1] == Rational(1, 2));
}

TEST_CASE("pipeline on the uniform Heawood edge law", "[simulate][pipeline]")
{
  const auto h = named_graph("Heawood");
  const auto rep = theorem_pipeline(uniform_edge_law(h), h, parse_decimal("0.089"), 5);
  CHECK(rep.r == 3);
  CHECK(rep.target_girth.length() == 6);
  CHECK(rep.steps[0].status == StepStatus::Pass);
  CHECK(rep.steps[1].status == StepStatus::Pass);
  CHECK_THAT(rep.entropy.h_vertex, WithinAbs(std::log(14.0), 1e-9));
  CHECK(rep.entropy.h_vertex <= 3 * std::log(3.0));
  CHECK(*rep.tail.outside_mass_exact == Rational(10, 14));
  CHECK(rep.tail.hypothesis_triggered);
  CHECK(rep.C_below_paper_constant);
  CHECK(rep.steps[2].status == StepStatus::Inconclusive);
  CHECK_FALSE(rep.steps[2].refutes);
  CHECK(rep.tail.inside.size() == 4);
  CHECK(rep.acyclic_by_girth);
  CHECK(rep.acyclic);
  CHECK(rep.steps[3].status == StepStatus::Pass);
  CHECK(*rep.domain_mass_exact == Rational(4, 14));
  CHECK(rep.steps[4].status == StepStatus::Pass);
  CHECK(rep.refuted_at == 0);
  CHECK(rep.classification == "no refutation at these parameters");
  CHECK_FALSE(rep.caveat.empty());
}

TEST_CASE("pipeline domain mass equals the vertex mass of S", "[simulate][pipeline][property]")
{
  std::mt19937_64 rng(17);
  for (const char* name : {"Petersen", "Heawood", "C5", "K4"}) {
    const auto h = named_graph(name);
    for (int i = 0; i < 10; ++i) {
      const auto rule = random_rule(3, 1, SeedModel::alphabet(2), vertex_alphabet(h.vertex_count()), rng());
      const auto rep = theorem_pipeline(rule, h, parse_decimal("0.2"), 2 + static_cast<long long>(rng() % 6));
      const auto m = exact_marginals(rule);
      Rational mass = 0;
      for (Label x : rep.tail.inside) mass += (*m.vertex.exact)[x];
      CHECK(*rep.domain_mass_exact == mass);
      CHECK(rep.refuted_at != 0);
    }
  }
}

TEST_CASE("every rank radius-1 rule into C5 fails a pipeline step", "[simulate][pipeline]")
{
  const auto h = named_graph("C5");
  const auto balls = enumerate_canonical_balls(3, 1, SeedModel::rank());
  for (int index = 0; index < 625; ++index) {
    const auto digits = rule_digits(BigInt(index), 5, balls.size());
    const auto rule = rule_from_digits(3, 1, SeedModel::rank(), vertex_alphabet(5), balls, digits);
    const auto rep = theorem_pipeline(rule, h, parse_decimal("0.089"), 5);
    CHECK(rep.refuted_at != 0);
  }
}

TEST_CASE("pipeline in Monte Carlo mode", "[simulate][pipeline]")
{
  const auto h = named_graph("Petersen");
  const auto rule = relabel(max_seed_independent_rule(), vertex_alphabet(10), std::vector<Label>{0, 1});
  const auto rep = theorem_pipeline(rule, h, parse_decimal("0.089"), 5, MonteCarloMode{100'000, 3, 2});
  CHECK(rep.marginal_mode == "MonteCarlo(100000)");
  CHECK(rep.refuted_at == 1);
  CHECK_FALSE(rep.domain_mass_exact);
  CHECK(code_of([&] { theorem_pipeline(max_seed_independent_rule(), h, parse_decimal("0.089"), 5); }) ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("composed partial 2-coloring is proper on host edges", "[simulate][property]")
{
  std::mt19937_64 rng(19);
  const auto h = named_graph("Heawood");
  const auto host = random_regular(3'000, 3, 20);
  int checked = 0;
  for (int i = 0; i < 10; ++i) {
    const auto rule = random_rule(3, 1, SeedModel::alphabet(2), vertex_alphabet(14), rng());
    const auto rep = theorem_pipeline(rule, h, parse_decimal("0.089"), 5);
    if (!rep.acyclic) continue;
    std::map<Label, TwoColor> color;
    for (auto [v, c] : rep.coloring) color[static_cast<Label>(v)] = c;
    const auto labeling = run_on_graph(rule, host, rng()).first;
    for (auto [u, v] : host.edges()) {
      const auto& a = labeling[static_cast<std::size_t>(u)];
      const auto& b = labeling[static_cast<std::size_t>(v)];
      if (!a || !b || !color.count(*a) || !color.count(*b)) continue;
      if (!h.adjacent(static_cast<int>(*a), static_cast<int>(*b))) continue;
      CHECK(color[*a] != color[*b]);
      ++checked;
    }
  }
  CHECK(checked > 0);
}
