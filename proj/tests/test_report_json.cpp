#include <catch_amalgamated.hpp>

#include "fiid/report_json.hpp"

using namespace fiid;

TEST_CASE("big integers and rationals serialize losslessly", "[json]")
{
  CHECK(big_to_json(BigInt(625)).is_number_unsigned());
  const BigInt huge("123456789012345678901234567890");
  CHECK(big_to_json(huge).is_string());
  CHECK(big_from_json(big_to_json(huge)) == huge);
  CHECK(big_from_json(big_to_json(BigInt(17))) == 17);
  CHECK(big_to_json(BigInt(-3)).is_string());
  CHECK(rational_from_json(rational_to_json(Rational(10, 14))) == Rational(5, 7));
  CHECK(rational_to_json(Rational(1, 4)) == "1/4");
}

TEST_CASE("entropy reports round trip", "[json]")
{
  const auto h = named_graph("C5");
  const auto rule = random_rule(3, 1, SeedModel::rank(), vertex_alphabet(5), 3);
  for (const auto& rep : {audit(exact_marginals(max_seed_independent_rule())), audit(exact_marginals(rule), std::nullopt, &h),
                          audit(mc_marginals(max_seed_independent_rule(), 10'000, 2))}) {
    const Json j = to_json(rep);
    const auto back = entropy_report_from_json(Json::parse(j.dump()));
    CHECK(back.h_vertex == rep.h_vertex);
    CHECK(back.h_edge == rep.h_edge);
    CHECK(back.h_nbr_given_vertex == rep.h_nbr_given_vertex);
    CHECK(back.slack_edge_vertex == rep.slack_edge_vertex);
    CHECK(back.r == rep.r);
    CHECK(back.tolerance == rep.tolerance);
    CHECK(back.provenance.is_exact() == rep.provenance.is_exact());
    CHECK(back.provenance.samples == rep.provenance.samples);
    REQUIRE(back.verdicts.size() == rep.verdicts.size());
    for (std::size_t i = 0; i < rep.verdicts.size(); ++i) {
      CHECK(back.verdicts[i].check == rep.verdicts[i].check);
      CHECK(back.verdicts[i].pass == rep.verdicts[i].pass);
      CHECK(back.verdicts[i].margin == rep.verdicts[i].margin);
    }
    CHECK(to_json(back).dump() == j.dump());
  }
}

TEST_CASE("simulation reports round trip", "[json]")
{
  const auto g = random_regular(500, 3, 1);
  const auto k2 = named_graph("K2");
  const auto plain = run_on_graph(max_seed_independent_rule(), g, 2).second;
  const auto against = run_on_graph(relabel(max_seed_independent_rule(), vertex_alphabet(2), std::vector<Label>{0, 1}), g, 2, &k2).second;
  for (const auto& rep : {plain, against}) {
    const Json j = to_json(rep);
    for (const char* key : {"schema_version", "n", "d", "rng_seed", "histogram", "covered_fraction", "violating_edge_fraction",
                            "in_fraction", "adjacent_in_in"}) {
      CHECK(j.contains(key));
    }
    const auto back = simulation_report_from_json(Json::parse(j.dump()));
    CHECK(back.histogram == rep.histogram);
    CHECK(back.covered_fraction == rep.covered_fraction);
    CHECK(back.in_fraction == rep.in_fraction);
    CHECK(back.violating_edges == rep.violating_edges);
    CHECK(to_json(back).dump() == j.dump());
  }
  CHECK(to_json(plain)["violating_edge_fraction"].is_null());
  CHECK(to_json(against)["in_fraction"].is_null());

  Json wrong = to_json(plain);
  wrong["schema_version"] = 99;
  CHECK_THROWS_AS(simulation_report_from_json(wrong), Error);
}

TEST_CASE("envelopes round trip", "[json]")
{
  Envelope e{"entropy exact", std::string("2026-01-01T00:00:00Z"), Json{{"x", 1}}};
  const Json j = to_json(e, "0.1.0");
  CHECK(j.begin().key() == "schema_version");
  CHECK(j["tool_version"] == "0.1.0");
  const auto back = envelope_from_json(Json::parse(j.dump()));
  CHECK(back.command == e.command);
  CHECK(back.timestamp == e.timestamp);
  CHECK(back.payload == e.payload);

  Envelope quiet{"graph profile", std::nullopt, Json::object()};
  const Json q = to_json(quiet, "0.1.0");
  CHECK_FALSE(q.contains("timestamp"));
  CHECK_FALSE(envelope_from_json(q).timestamp);
}

TEST_CASE("seeds round trip", "[json]")
{
  const std::vector<Seed> seeds = {{1, 0.0}, {0, 0.0}, {1, 0.0}};
  const auto j = seeds_to_json(SeedModel::alphabet(2), seeds);
  CHECK(j.contains("tags"));
  CHECK(seeds_from_json(j) == seeds);
  const std::vector<Seed> ranks = {{0, 3.0}, {0, 1.0}, {0, 2.0}};
  const auto r = seeds_to_json(SeedModel::rank(), ranks);
  CHECK(r.contains("ranks"));
  CHECK(seeds_from_json(r) == ranks);
}

TEST_CASE("reports carry the documented keys", "[json]")
{
  const auto g = to_json(min_girth_constant(3, parse_decimal("0.3")));
  CHECK(g["C"] == 59050);
  CHECK(g["overflow"] == false);

  const auto heawood = named_graph("Heawood");
  CHECK(to_json(profile(heawood))["girth"] == 6);
  CHECK(to_json(profile(build_graph(2, std::vector<Edge>{{0, 1}})))["girth"] == "Infinite");

  const auto search_json = to_json(search(named_graph("C5"), 3, 1, SeedModel::rank()));
  CHECK(search_json["kind"] == "ExhaustedNone");
  CHECK(search_json["rules_examined"] == 625);
  CHECK(search_json["resume_cursor"].is_null());
  CHECK(search_json["witness_sample"].size() > 0);
  CHECK(search_json["witness_sample"][0].contains("prefix"));

  const auto recoded = relabel(max_seed_independent_rule(), vertex_alphabet(10), std::vector<Label>{0, 1});
  const auto pipe = to_json(theorem_pipeline(recoded, named_graph("Petersen"), parse_decimal("0.089"), 5));
  CHECK(pipe["schema_version"] == kReportSchemaVersion);
  CHECK(pipe["refuted_at"] == 1);
  CHECK(pipe["c0"] == "0.089");
  CHECK(pipe["steps"].size() == 5);
  CHECK(pipe["steps"][0]["status"] == "fail");
}
