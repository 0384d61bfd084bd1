#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fiid/entropy.hpp"
#include "fiid/graph.hpp"
#include "fiid/homsearch.hpp"
#include "fiid/numeric.hpp"
#include "fiid/rule.hpp"
#include "fiid/simulate.hpp"

namespace fiid {

using Json = nlohmann::ordered_json;

/// Integers that fit in 64 bits become JSON numbers, larger ones strings.
inline Json big_to_json(const BigInt& x)
{
  if (x >= 0 && x <= std::numeric_limits<std::uint64_t>::max()) return Json(x.convert_to<std::uint64_t>());
  return Json(x.str());
}

inline BigInt big_from_json(const Json& j)
{
  if (j.is_string()) return BigInt(j.get<std::string>());
  return BigInt(j.get<std::uint64_t>());
}

inline Json rational_to_json(const Rational& x) { return x.str(); }

inline Rational rational_from_json(const Json& j) { return Rational(j.get<std::string>()); }

// graphs

inline Json to_json(const GraphProfile& p)
{
  Json j;
  j["girth"] = p.girth.is_infinite() ? Json("Infinite") : Json(p.girth.length());
  j["regular_degree"] = p.regular_degree ? Json(*p.regular_degree) : Json(nullptr);
  j["bipartite"] = p.bipartite;
  j["connected"] = p.connected;
  return j;
}

inline Json graph_summary(const FiniteGraph& g)
{
  Json edges = Json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  return {{"n", g.vertex_count()}, {"m", g.edge_count()}, {"edges", std::move(edges)}};
}

// seeds and rules

inline Json seeds_to_json(const SeedModel& model, std::span<const Seed> seeds)
{
  Json j;
  if (model.has_tags()) {
    Json tags = Json::array();
    for (const auto& s : seeds) tags.push_back(s.tag);
    j["tags"] = std::move(tags);
  }
  if (model.has_ranks()) {
    Json ranks = Json::array();
    for (const auto& s : seeds) ranks.push_back(s.value);
    j["ranks"] = std::move(ranks);
  }
  return j;
}

inline std::vector<Seed> seeds_from_json(const Json& j)
{
  std::vector<Seed> out;
  const std::size_t n = j.contains("tags") ? j["tags"].size() : j.at("ranks").size();
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (j.contains("tags")) out[i].tag = j["tags"][i].get<std::uint32_t>();
    if (j.contains("ranks")) out[i].value = j["ranks"][i].get<double>();
  }
  return out;
}

inline Json rule_summary(const LocalRule& rule)
{
  return {{"d", rule.d()},
          {"t", rule.t()},
          {"model", rule.model().to_string()},
          {"alphabet", rule.alphabet()},
          {"canonical_balls", rule.size()}};
}

inline Json rule_to_json(const LocalRule& rule)
{
  Json j = rule_summary(rule);
  Json table = Json::array();
  for (std::size_t i = 0; i < rule.size(); ++i) {
    table.push_back({{"ball", to_hex(rule.codes()[i])}, {"label", rule.alphabet()[rule.labels()[i]]}});
  }
  j["table"] = std::move(table);
  return j;
}

// entropy

inline Json to_json(const Provenance& p)
{
  Json j{{"kind", p.is_exact() ? "Exact" : "MonteCarlo"}};
  if (!p.is_exact()) j["samples"] = p.samples;
  return j;
}

inline Provenance provenance_from_json(const Json& j)
{
  if (j.at("kind") == "Exact") return Provenance::exact();
  return Provenance::monte_carlo(j.at("samples").get<std::uint64_t>());
}

inline Json to_json(const LabelDistribution& d)
{
  Json j{{"labels", d.labels}, {"p", d.p}};
  if (d.exact) {
    Json exact = Json::array();
    for (const auto& x : *d.exact) exact.push_back(rational_to_json(x));
    j["exact"] = std::move(exact);
  }
  j["provenance"] = to_json(d.provenance);
  return j;
}

inline Json to_json(const PairDistribution& d)
{
  Json j{{"labels", d.labels}, {"q", d.q}};
  if (d.exact) {
    Json exact = Json::array();
    for (const auto& x : *d.exact) exact.push_back(rational_to_json(x));
    j["exact"] = std::move(exact);
  }
  j["provenance"] = to_json(d.provenance);
  return j;
}

inline Json to_json(const Verdict& v) { return {{"check", v.check}, {"pass", v.pass}, {"margin", v.margin}}; }

inline Json to_json(const EntropyReport& r)
{
  Json verdicts = Json::array();
  for (const auto& v : r.verdicts) verdicts.push_back(to_json(v));
  Json j{{"h_vertex", r.h_vertex},
         {"h_edge", r.h_edge},
         {"h_nbr_given_vertex", r.h_nbr_given_vertex},
         {"slack_edge_vertex", r.slack_edge_vertex},
         {"verdicts", std::move(verdicts)},
         {"provenance", to_json(r.provenance)},
         {"tolerance", r.tolerance}};
  j["r"] = r.r ? Json(*r.r) : Json(nullptr);
  return j;
}

inline EntropyReport entropy_report_from_json(const Json& j)
{
  EntropyReport r;
  r.h_vertex = j.at("h_vertex").get<double>();
  r.h_edge = j.at("h_edge").get<double>();
  r.h_nbr_given_vertex = j.at("h_nbr_given_vertex").get<double>();
  r.slack_edge_vertex = j.at("slack_edge_vertex").get<double>();
  for (const auto& v : j.at("verdicts")) {
    r.verdicts.push_back({v.at("check").get<std::string>(), v.at("pass").get<bool>(), v.at("margin").get<double>()});
  }
  r.provenance = provenance_from_json(j.at("provenance"));
  if (j.contains("tolerance")) r.tolerance = j["tolerance"].get<double>();
  if (j.contains("r") && !j["r"].is_null()) r.r = j["r"].get<int>();
  return r;
}

inline Json to_json(const GirthConstant& g)
{
  Json j{{"r", g.r}, {"c0", to_string_decimal(g.c0)}};
  j["C"] = g.value ? big_to_json(*g.value) : Json(nullptr);
  j["overflow"] = g.overflow();
  j["log10_r_pow"] = g.log10_value;
  j["exponent"] = rational_to_json(Rational(g.exponent_numerator, g.exponent_denominator));
  return j;
}

inline Json to_json(const TailSelection& s)
{
  Json j{{"C", s.C},
         {"c0", to_string_decimal(s.c0)},
         {"S", s.inside},
         {"saturated", s.saturated},
         {"inside_mass", s.inside_mass},
         {"outside_mass", s.outside_mass}};
  j["outside_mass_exact"] = s.outside_mass_exact ? rational_to_json(*s.outside_mass_exact) : Json(nullptr);
  j["tail_entropy"] = s.tail_entropy;
  j["max_outside_p"] = s.max_outside_p;
  j["min_inside_p"] = s.min_inside_p;
  j["inverse_C"] = s.inverse_C;
  j["outside_below_inverse_C"] = s.outside_below_inverse_C;
  j["tail_lower_bound"] = s.tail_lower_bound;
  j["tail_bound_holds"] = s.tail_bound_holds;
  j["hypothesis_triggered"] = s.hypothesis_triggered;
  j["c0_ln_C"] = s.c0_ln_C;
  j["entropy_implication"] = s.entropy_implication ? Json(*s.entropy_implication) : Json(nullptr);
  return j;
}

// homsearch

inline Json to_json(const SeedModel& model, const ViolationWitness& w, const std::vector<std::string>& alphabet)
{
  Json j{{"seeds", seeds_to_json(model, w.seeds)}};
  j["pair"] = {alphabet.empty() ? Json(w.u_label) : Json(alphabet[w.u_label]),
               alphabet.empty() ? Json(w.v_label) : Json(alphabet[w.v_label])};
  return j;
}

inline Json to_json(const HomCheck& c, const LocalRule& rule)
{
  Json j{{"verdict", to_string(c.kind)}, {"exact", c.exact}, {"configurations", c.configurations}};
  j["witness"] = c.witness ? to_json(rule.model(), *c.witness, rule.alphabet()) : Json(nullptr);
  return j;
}

inline Json to_json(const ConstantSeedCertificate& c)
{
  return {{"d", c.d},
          {"t", c.t},
          {"q", c.q},
          {"seeds", seeds_to_json(SeedModel::alphabet(c.q), c.seeds)},
          {"u_ball", to_hex(c.u_code)},
          {"v_ball", to_hex(c.v_code)},
          {"reasoning", c.reasoning}};
}

inline Json to_json(const SearchOutcome& o)
{
  Json witnesses = Json::array();
  const auto alphabet = std::vector<std::string>{};
  for (const auto& rec : o.witness_sample) {
    Json w = to_json(o.model, rec.witness, alphabet);
    w["prefix"] = rec.prefix;
    witnesses.push_back(std::move(w));
  }
  Json j{{"kind", to_string(o.kind)},
         {"d", o.d},
         {"t", o.t},
         {"model", o.model.to_string()},
         {"canonical_balls", o.canonical_balls},
         {"class_size", big_to_json(o.class_size)},
         {"rules_examined", big_to_json(o.rules_examined)},
         {"nodes", o.nodes},
         {"refutations", o.refutations},
         {"constraints_exact", o.constraints_exact},
         {"constraint_pairs", o.constraint_pairs}};
  j["rule"] = o.rule ? rule_to_json(*o.rule) : Json(nullptr);
  j["witness_sample"] = std::move(witnesses);
  j["certificate"] = o.certificate ? to_json(*o.certificate) : Json(nullptr);
  j["resume_cursor"] = o.resume_cursor ? Json(o.resume_cursor->str()) : Json(nullptr);
  j["class_caveat"] = o.class_caveat;
  return j;
}

inline Json to_json(const ReplayStats& s)
{
  return {{"witnesses_checked", s.witnesses_checked},
          {"witnesses_confirmed", s.witnesses_confirmed},
          {"rules_sampled", s.rules_sampled},
          {"rules_covered_by_sample", s.rules_covered_by_sample},
          {"rules_reconstructed", s.rules_reconstructed}};
}

// simulate

template <class T>
Json optional_json(const std::optional<T>& x)
{
  return x ? Json(*x) : Json(nullptr);
}

inline Json to_json(const SimulationReport& r)
{
  Json j{{"schema_version", kReportSchemaVersion},
         {"n", r.n},
         {"d", r.d},
         {"t", r.t},
         {"rng_seed", r.rng_seed},
         {"labels", r.labels},
         {"histogram", r.histogram},
         {"covered", r.covered},
         {"covered_fraction", r.covered_fraction},
         {"rank_collisions", r.rank_collisions}};
  j["covered_edges"] = optional_json(r.covered_edges);
  j["violating_edges"] = optional_json(r.violating_edges);
  j["violating_edge_fraction"] = optional_json(r.violating_edge_fraction);
  j["in_fraction"] = optional_json(r.in_fraction);
  j["adjacent_in_in"] = optional_json(r.adjacent_in_in);
  return j;
}

template <class T>
std::optional<T> optional_from_json(const Json& j, const char* key)
{
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<T>();
}

inline SimulationReport simulation_report_from_json(const Json& j)
{
  if (j.at("schema_version").get<int>() != kReportSchemaVersion) {
    throw Error(ErrorCode::ParseError, "unsupported schema_version");
  }
  SimulationReport r;
  r.n = j.at("n").get<int>();
  r.d = j.at("d").get<int>();
  r.t = j.at("t").get<int>();
  r.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  r.labels = j.at("labels").get<std::vector<std::string>>();
  r.histogram = j.at("histogram").get<std::vector<std::uint64_t>>();
  r.covered = j.at("covered").get<std::uint64_t>();
  r.covered_fraction = j.at("covered_fraction").get<double>();
  r.rank_collisions = j.at("rank_collisions").get<std::uint64_t>();
  r.covered_edges = optional_from_json<std::uint64_t>(j, "covered_edges");
  r.violating_edges = optional_from_json<std::uint64_t>(j, "violating_edges");
  r.violating_edge_fraction = optional_from_json<double>(j, "violating_edge_fraction");
  r.in_fraction = optional_from_json<double>(j, "in_fraction");
  r.adjacent_in_in = optional_from_json<std::uint64_t>(j, "adjacent_in_in");
  return r;
}

inline Json to_json(const PipelineReport& r)
{
  Json steps = Json::array();
  for (const auto& s : r.steps) {
    steps.push_back({{"step", s.index},
                     {"name", s.name},
                     {"status", to_string(s.status)},
                     {"refutes", s.refutes},
                     {"detail", s.detail}});
  }
  Json coloring = Json::array();
  for (auto [v, c] : r.coloring) coloring.push_back({v, std::string(1, to_char(c))});
  Json j{{"schema_version", kReportSchemaVersion},
         {"c0", to_string_decimal(r.c0)},
         {"C", r.C},
         {"paper_constant", to_json(r.paper_constant)},
         {"C_below_paper_constant", r.C_below_paper_constant},
         {"marginal_mode", r.marginal_mode},
         {"r", r.r},
         {"target_girth", r.target_girth.is_infinite() ? Json("Infinite") : Json(r.target_girth.length())},
         {"support", to_json(r.support)},
         {"entropy", to_json(r.entropy)},
         {"tail", to_json(r.tail)},
         {"acyclic_by_girth", r.acyclic_by_girth},
         {"acyclic", r.acyclic},
         {"coloring", std::move(coloring)},
         {"induced_cycle", r.induced_cycle},
         {"domain_mass", r.domain_mass}};
  j["domain_mass_exact"] = r.domain_mass_exact ? rational_to_json(*r.domain_mass_exact) : Json(nullptr);
  j["steps"] = std::move(steps);
  j["refuted_at"] = r.refuted_at == 0 ? Json(nullptr) : Json(r.refuted_at);
  j["classification"] = r.classification;
  j["caveat"] = r.caveat;
  return j;
}

// envelope

struct Envelope {
  std::string command;
  std::optional<std::string> timestamp;
  Json payload;
};

inline Json to_json(const Envelope& e, std::string_view tool_version)
{
  Json j{{"schema_version", kReportSchemaVersion}, {"tool_version", tool_version}, {"command", e.command}};
  if (e.timestamp) j["timestamp"] = *e.timestamp;
  j["payload"] = e.payload;
  return j;
}

inline Envelope envelope_from_json(const Json& j)
{
  if (j.at("schema_version").get<int>() != kReportSchemaVersion) {
    throw Error(ErrorCode::ParseError, "unsupported schema_version");
  }
  Envelope e;
  e.command = j.at("command").get<std::string>();
  if (j.contains("timestamp")) e.timestamp = j["timestamp"].get<std::string>();
  e.payload = j.at("payload");
  return e;
}

}  // namespace fiid
