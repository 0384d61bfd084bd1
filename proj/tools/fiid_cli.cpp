// fiid: command-line front end. Every command prints JSON lines wrapped in an
// envelope; exit status 0 = ok, 1 = audited property failed, 2 = error.

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "fiid/fiid.hpp"

#ifndef FIID_VERSION
#define FIID_VERSION "0.0.0"
#endif

namespace {

using fiid::Json;

struct Options {
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
  bool no_timestamp = false;
  std::string target;
  std::string graph;
  int d = 3;
  int t = 0;
  std::string model = "rank";
  std::string c0 = "0.089";
  long long C = 5;
  std::optional<std::uint64_t> samples;
  std::string rule;
  std::string out;
  int n = 0;
  std::optional<int> r;
  bool exact = false;
  bool bits = false;
  std::string alphabet;
  std::string label;
  std::string relabel;
  std::string probs;
  std::uint64_t budget = fiid::SearchBudget{}.max_nodes;
  std::size_t witness_cap = fiid::SearchBudget{}.witness_cap;
  std::string resume;
  std::string labeling;
};

std::vector<std::string> split(const std::string& text, char sep)
{
  std::vector<std::string> out;
  if (text.empty()) return out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, sep);) out.push_back(item);
  return out;
}

std::string utc_now()
{
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

class Runner {
 public:
  Runner(Options& o, std::string command) : o_(o), command_(std::move(command)) {}

  unsigned threads() const { return o_.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : o_.threads; }

  // Randomized commands either take --seed or draw one and report it.
  std::uint64_t seed()
  {
    if (!o_.seed) {
      std::random_device dev;
      o_.seed = (static_cast<std::uint64_t>(dev()) << 32) ^ dev();
    }
    return *o_.seed;
  }

  fiid::FiniteGraph load_graph(const std::string& spec) const
  {
    if (spec.empty()) throw fiid::Error(fiid::ErrorCode::InvalidArgument, "a graph (--target or --graph) is required");
    if (fiid::is_named_graph(spec)) return fiid::named_graph(spec);
    std::ifstream in(spec);
    if (!in) throw fiid::Error(fiid::ErrorCode::InvalidArgument, "cannot open graph '" + spec + "' (not a named graph either)");
    return fiid::read_graph(in);
  }

  fiid::FiniteGraph target() const { return load_graph(o_.target.empty() ? o_.graph : o_.target); }
  fiid::FiniteGraph host() const { return load_graph(o_.graph.empty() ? o_.target : o_.graph); }

  std::vector<std::string> alphabet(std::size_t fallback_size = 0) const
  {
    if (!o_.alphabet.empty()) return split(o_.alphabet, ',');
    if (!o_.target.empty()) return fiid::vertex_alphabet(target().vertex_count());
    if (fallback_size > 0) return fiid::vertex_alphabet(static_cast<int>(fallback_size));
    throw fiid::Error(fiid::ErrorCode::InvalidArgument, "an output alphabet (--alphabet or --target) is required");
  }

  fiid::LocalRule load_rule() const
  {
    if (o_.rule.empty()) throw fiid::Error(fiid::ErrorCode::InvalidArgument, "--rule is required");
    auto rule = [&] {
      if (o_.rule.starts_with("builtin:")) {
        fiid::BuiltinParams p;
        p.d = o_.d;
        p.t = o_.t;
        p.model = fiid::SeedModel::parse(o_.model);
        const std::string name = o_.rule.substr(8);
        if (name == "constant") {
          p.alphabet = alphabet(1);
          p.label = o_.label.empty() ? p.alphabet.front() : o_.label;
        }
        return fiid::builtin_rule(name, p);
      }
      std::ifstream in(o_.rule);
      if (!in) throw fiid::Error(fiid::ErrorCode::InvalidArgument, "cannot open rule '" + o_.rule + "'");
      return fiid::read_rule(in);
    }();
    if (o_.relabel.empty()) return rule;
    // --relabel OLD=NEW,...; the new alphabet is V(target) or --alphabet.
    auto names = alphabet();
    std::vector<fiid::Label> mapping(rule.alphabet().size(), 0);
    std::vector<bool> seen(mapping.size(), false);
    for (const auto& item : split(o_.relabel, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw fiid::Error(fiid::ErrorCode::ParseError, "relabel entries are OLD=NEW");
      const auto from = rule.label_index(item.substr(0, eq));
      auto it = std::find(names.begin(), names.end(), item.substr(eq + 1));
      if (it == names.end()) throw fiid::Error(fiid::ErrorCode::InvalidArgument, "relabel target '" + item.substr(eq + 1) + "' unknown");
      mapping[from] = static_cast<fiid::Label>(it - names.begin());
      seen[from] = true;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      throw fiid::Error(fiid::ErrorCode::InvalidArgument, "relabel must map every label");
    }
    return fiid::relabel(rule, std::move(names), mapping);
  }

  fiid::Rational c0() const { return fiid::parse_decimal(o_.c0); }

  void emit(Json payload)
  {
    fiid::Envelope e{command_, o_.no_timestamp ? std::nullopt : std::optional<std::string>(utc_now()), std::move(payload)};
    const std::string line = fiid::to_json(e, FIID_VERSION).dump();
    if (report_to_file_) {
      if (!file_) {
        file_.emplace(o_.out);
        if (!*file_) throw fiid::Error(fiid::ErrorCode::InvalidArgument, "cannot write '" + o_.out + "'");
      }
      *file_ << line << '\n';
    } else {
      std::cout << line << '\n';
    }
  }

  // For commands whose --out is the report destination.
  void report_to_out() { report_to_file_ = !o_.out.empty(); }

  const Options& opt() const { return o_; }

 private:
  Options& o_;
  std::string command_;
  bool report_to_file_ = false;
  std::optional<std::ofstream> file_;
};

// Entropies are computed in nats; --bits rescales them for display only.
void to_bits(Json& report)
{
  const double k = 1.0 / std::log(2.0);
  for (const char* key : {"h_vertex", "h_edge", "h_nbr_given_vertex", "slack_edge_vertex"}) {
    if (report.contains(key)) report[key] = report[key].get<double>() * k;
  }
  if (report.contains("verdicts")) {
    for (auto& v : report["verdicts"]) {
      if (v["check"] != "support") v["margin"] = v["margin"].get<double>() * k;
    }
  }
  report["units"] = "bits";
}

Json entropy_payload(const fiid::EntropyReport& rep, bool bits)
{
  Json j = fiid::to_json(rep);
  if (bits) {
    to_bits(j);
  } else {
    j["units"] = "nats";
  }
  return j;
}

// Commands -------------------------------------------------------------------------

int graph_gen(Runner& run)
{
  const auto& o = run.opt();
  const std::uint64_t seed = run.seed();
  const auto g = fiid::random_regular(o.n, o.d, seed);
  Json j{{"n", o.n}, {"d", o.d}, {"seed", seed}, {"profile", fiid::to_json(fiid::profile(g))}};
  if (!o.out.empty()) {
    std::ofstream out(o.out);
    if (!out) throw fiid::Error(fiid::ErrorCode::InvalidArgument, "cannot write '" + o.out + "'");
    fiid::write_graph(out, g);
    j["written"] = o.out;
  } else {
    j["graph"] = fiid::graph_summary(g);
  }
  run.emit(std::move(j));
  return 0;
}

int graph_profile(Runner& run)
{
  run.report_to_out();
  const auto g = run.host();
  Json j{{"n", g.vertex_count()}, {"m", g.edge_count()}, {"max_degree", g.max_degree()}};
  j["profile"] = fiid::to_json(fiid::profile(g));
  run.emit(std::move(j));
  return 0;
}

int graph_invariants(Runner& run)
{
  run.report_to_out();
  const auto g = run.host();
  const auto inv = fiid::exact_invariants(g);
  run.emit({{"n", g.vertex_count()},
            {"independence_number", inv.independence_number},
            {"chromatic_number", inv.chromatic_number}});
  return 0;
}

void write_rule_out(const Options& o, const fiid::LocalRule& rule, Json& j)
{
  if (o.out.empty()) return;
  std::ofstream out(o.out);
  if (!out) throw fiid::Error(fiid::ErrorCode::InvalidArgument, "cannot write '" + o.out + "'");
  fiid::write_rule(out, rule);
  j["written"] = o.out;
}

int rule_make(Runner& run)
{
  const auto rule = run.load_rule();
  Json j = fiid::rule_to_json(rule);
  write_rule_out(run.opt(), rule, j);
  run.emit(std::move(j));
  return 0;
}

int rule_random(Runner& run)
{
  const auto& o = run.opt();
  const std::uint64_t seed = run.seed();
  const auto rule = fiid::random_rule(o.d, o.t, fiid::SeedModel::parse(o.model), run.alphabet(), seed);
  Json j = fiid::rule_to_json(rule);
  j["seed"] = seed;
  write_rule_out(o, rule, j);
  run.emit(std::move(j));
  return 0;
}

int rule_show(Runner& run)
{
  run.report_to_out();
  run.emit(fiid::rule_to_json(run.load_rule()));
  return 0;
}

int entropy_exact(Runner& run)
{
  run.report_to_out();
  const auto rule = run.load_rule();
  const auto m = fiid::exact_marginals(rule);
  Json j{{"rule", fiid::rule_summary(rule)}, {"vertex", fiid::to_json(m.vertex)}, {"edge", fiid::to_json(m.edge)}};
  j["entropy"] = entropy_payload(fiid::audit(m), run.opt().bits);
  run.emit(std::move(j));
  return 0;
}

int entropy_mc(Runner& run)
{
  run.report_to_out();
  const auto& o = run.opt();
  const auto rule = run.load_rule();
  const std::uint64_t seed = run.seed();
  const std::uint64_t n = o.samples.value_or(1'000'000);
  const auto m = fiid::mc_marginals(rule, n, seed, run.threads());
  Json j{{"rule", fiid::rule_summary(rule)}, {"seed", seed}, {"samples", n}};
  j["vertex"] = fiid::to_json(m.vertex);
  j["edge"] = fiid::to_json(m.edge);
  j["entropy"] = entropy_payload(fiid::audit(m), o.bits);
  run.emit(std::move(j));
  return 0;
}

int entropy_audit(Runner& run)
{
  run.report_to_out();
  const auto& o = run.opt();
  const auto rule = run.load_rule();
  std::optional<fiid::FiniteGraph> target;
  if (!o.target.empty()) target = run.target();
  const bool exact = o.exact || !o.samples;
  Json j{{"rule", fiid::rule_summary(rule)}};
  fiid::Marginals m = [&] {
    if (exact) return fiid::exact_marginals(rule);
    j["seed"] = run.seed();
    return fiid::mc_marginals(rule, *o.samples, run.seed(), run.threads());
  }();
  const auto rep = fiid::audit(m, o.r, target ? &*target : nullptr);
  j["report"] = entropy_payload(rep, o.bits);
  run.emit(std::move(j));
  return rep.all_pass() ? 0 : 1;
}

int entropy_constant(Runner& run)
{
  run.report_to_out();
  const auto& o = run.opt();
  if (!o.r) throw fiid::Error(fiid::ErrorCode::InvalidArgument, "--r is required");
  run.emit(fiid::to_json(fiid::min_girth_constant(*o.r, run.c0())));
  return 0;
}

int entropy_tail(Runner& run)
{
  run.report_to_out();
  const auto& o = run.opt();
  fiid::LabelDistribution dist;
  if (!o.probs.empty()) {
    std::vector<fiid::Rational> exact;
    for (const auto& item : split(o.probs, ',')) exact.push_back(fiid::parse_decimal(item));
    auto labels = fiid::vertex_alphabet(static_cast<int>(exact.size()));
    dist = fiid::LabelDistribution::from_exact(std::move(labels), std::move(exact));
  } else {
    dist = fiid::exact_marginals(run.load_rule()).vertex;
  }
  run.emit(fiid::to_json(fiid::tail_select(dist, o.C, run.c0())));
  return 0;
}

int hom_check(Runner& run)
{
  run.report_to_out();
  const auto& o = run.opt();
  const auto rule = run.load_rule();
  const auto h = run.target();
  const std::uint64_t seed = run.seed();
  const auto check = fiid::is_homomorphism_rule(rule, h, o.samples.value_or(100'000), seed);
  Json j = fiid::to_json(check, rule);
  j["seed"] = seed;
  j["class_caveat"] = fiid::class_caveat(rule.d(), rule.t(), rule.model());
  run.emit(std::move(j));
  return check.kind == fiid::CheckKind::Violation ? 1 : 0;
}

int hom_search(Runner& run)
{
  run.report_to_out();
  const auto& o = run.opt();
  const auto h = run.target();
  fiid::SearchBudget budget;
  budget.max_nodes = o.budget;
  budget.witness_cap = o.witness_cap;
  if (o.samples) budget.constraint_samples = *o.samples;
  budget.rng_seed = run.seed();
  if (!o.resume.empty()) budget.resume = fiid::BigInt(o.resume);
  const auto outcome = fiid::search(h, o.d, o.t, fiid::SeedModel::parse(o.model), budget);
  Json j = fiid::to_json(outcome);
  j["seed"] = budget.rng_seed;
  if (outcome.kind == fiid::SearchKind::ExhaustedNone) {
    j["replay"] = fiid::to_json(fiid::replay_refutations(outcome, h, 100, budget.rng_seed));
  }
  run.emit(std::move(j));
  return 0;
}

int hom_certificate(Runner& run)
{
  run.report_to_out();
  const auto& o = run.opt();
  const auto model = fiid::SeedModel::parse(o.model);
  if (model.kind != fiid::SeedKind::Alphabet) {
    throw fiid::Error(fiid::ErrorCode::InvalidArgument, "certificates exist for alphabet:q models only");
  }
  run.emit(fiid::to_json(fiid::alphabet_impossibility_certificate(run.target(), o.d, o.t, model.q)));
  return 0;
}

int sim_run(Runner& run)
{
  run.report_to_out();
  const auto& o = run.opt();
  const auto rule = run.load_rule();
  const std::uint64_t seed = run.seed();
  const auto g = o.graph.empty() ? fiid::random_regular(o.n, rule.d(), fiid::substream_seed(seed, 0)) : run.host();
  std::optional<fiid::FiniteGraph> target;
  if (!o.target.empty()) target = run.target();
  const auto [labeling, rep] = fiid::run_on_graph(rule, g, seed, target ? &*target : nullptr, run.threads());
  if (!o.labeling.empty()) {
    std::ofstream out(o.labeling);
    if (!out) throw fiid::Error(fiid::ErrorCode::InvalidArgument, "cannot write '" + o.labeling + "'");
    for (std::size_t v = 0; v < labeling.size(); ++v) {
      out << v << ' ' << (labeling[v] ? rule.alphabet()[*labeling[v]] : std::string("-")) << '\n';
    }
  }
  Json j = fiid::to_json(rep);
  j["graph"] = o.graph.empty() ? Json("random_regular") : Json(o.graph);
  run.emit(std::move(j));
  return 0;
}

int sim_pipeline(Runner& run)
{
  run.report_to_out();
  const auto& o = run.opt();
  const auto rule = run.load_rule();
  const auto h = run.target();
  fiid::MarginalMode mode = fiid::ExactMode{};
  if (o.samples && !o.exact) mode = fiid::MonteCarloMode{*o.samples, run.seed(), run.threads()};
  const auto rep = fiid::theorem_pipeline(rule, h, run.c0(), o.C, mode);
  Json j = fiid::to_json(rep);
  if (std::holds_alternative<fiid::MonteCarloMode>(mode)) j["seed"] = run.seed();
  if (o.bits) to_bits(j["entropy"]);
  run.emit(std::move(j));
  return rep.refuted_at == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
  Options o;
  CLI::App app{"Finite-radius factor-of-i.i.d. rules on regular trees"};
  app.set_version_flag("--version", std::string(FIID_VERSION));
  app.require_subcommand(1);

  std::string command;
  for (int i = 1; i < argc; ++i) command += (i > 1 ? " " : "") + std::string(argv[i]);

  using Handler = int (*)(Runner&);
  Handler handler = nullptr;

  // Flag helpers; each leaf command takes only what it uses.
  auto seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "master RNG seed (u64); drawn and reported when absent"); };
  auto threads = [&](CLI::App* c) { c->add_option("--threads", o.threads, "worker cap (default: available cores)"); };
  auto target = [&](CLI::App* c, const char* help) { return c->add_option("--target", o.target, help); };
  auto graph = [&](CLI::App* c) { c->add_option("--graph", o.graph, "named graph or graph file"); };
  auto shape = [&](CLI::App* c) {
    c->add_option("--d", o.d, "tree degree")->capture_default_str();
    c->add_option("--t", o.t, "rule radius")->capture_default_str();
    c->add_option("--model", o.model, "seed model: alphabet:q | rank | hybrid:q")->capture_default_str();
  };
  auto rule = [&](CLI::App* c) {
    c->add_option("--rule", o.rule, "builtin:<name> or rule file")->required();
    shape(c);
    c->add_option("--alphabet", o.alphabet, "comma-separated output labels (builtin:constant)");
    c->add_option("--label", o.label, "output of builtin:constant");
    c->add_option("--relabel", o.relabel, "compose with OLD=NEW,... into --alphabet or V(--target)");
  };
  auto out = [&](CLI::App* c, const char* help) { c->add_option("--out", o.out, help); };
  auto leaf = [&](CLI::App* parent, const char* name, const char* help, Handler h) {
    auto* c = parent->add_subcommand(name, help);
    c->add_flag("--no-timestamp", o.no_timestamp, "omit the envelope timestamp");
    c->callback([&handler, h] { handler = h; });
    return c;
  };

  auto* g = app.add_subcommand("graph", "graph generation and invariants")->require_subcommand(1);
  {
    auto* c = leaf(g, "gen", "random d-regular graph (configuration model)", graph_gen);
    c->add_option("--n", o.n, "vertex count")->required();
    c->add_option("--d", o.d, "degree")->capture_default_str();
    seed(c);
    out(c, "write the graph file here instead of embedding edges");
    c = leaf(g, "profile", "girth, regularity, bipartiteness, connectivity", graph_profile);
    graph(c);
    target(c, "alias of --graph");
    out(c, "report destination");
    c = leaf(g, "invariants", "exact independence and chromatic numbers (n <= 40)", graph_invariants);
    graph(c);
    target(c, "alias of --graph");
    out(c, "report destination");
  }

  auto* r = app.add_subcommand("rule", "build and inspect local rules")->require_subcommand(1);
  {
    auto* c = leaf(r, "make", "instantiate a builtin or file rule", rule_make);
    rule(c);
    target(c, "output alphabet V(H)");
    out(c, "write the rule file here");
    c = leaf(r, "random", "uniform random table", rule_random);
    shape(c);
    c->add_option("--alphabet", o.alphabet, "comma-separated output labels");
    target(c, "output alphabet V(H)");
    seed(c);
    out(c, "write the rule file here");
    c = leaf(r, "show", "print a rule table", rule_show);
    rule(c);
    target(c, "output alphabet V(H)");
    out(c, "report destination");
  }

  auto* e = app.add_subcommand("entropy", "marginals, audits, girth constant, tail lemma")->require_subcommand(1);
  {
    auto* c = leaf(e, "exact", "exact vertex and pair laws", entropy_exact);
    rule(c);
    target(c, "output alphabet V(H)");
    c->add_flag("--bits", o.bits, "display entropies in bits");
    out(c, "report destination");
    c = leaf(e, "mc", "Monte Carlo vertex and pair laws", entropy_mc);
    rule(c);
    target(c, "output alphabet V(H)");
    c->add_option("--samples", o.samples, "edge samples (default 1000000)");
    seed(c);
    threads(c);
    c->add_flag("--bits", o.bits, "display entropies in bits");
    out(c, "report destination");
    c = leaf(e, "audit", "entropy inequalities; exit 1 if any fails", entropy_audit);
    rule(c);
    target(c, "check support in E(H) and take r from H");
    c->add_flag("--exact", o.exact, "exact marginals (default unless --samples)");
    c->add_option("--samples", o.samples, "Monte Carlo marginals with this many samples");
    c->add_option("--r", o.r, "degree for the ln r and 3 ln r caps");
    seed(c);
    threads(c);
    c->add_flag("--bits", o.bits, "display entropies in bits");
    out(c, "report destination");
    c = leaf(e, "constant", "least integer exceeding r^(3/c0)", entropy_constant);
    c->add_option("--r", o.r, "target degree")->required();
    c->add_option("--c0", o.c0, "decimal c0")->capture_default_str();
    out(c, "report destination");
    c = leaf(e, "tail", "heaviest C-1 labels and tail bounds", entropy_tail);
    c->add_option("--probs", o.probs, "comma-separated decimal probabilities");
    c->add_option("--rule", o.rule, "use this rule's exact vertex law instead");
    shape(c);
    target(c, "output alphabet V(H)");
    c->add_option("--C", o.C, "C")->capture_default_str();
    c->add_option("--c0", o.c0, "decimal c0")->capture_default_str();
    out(c, "report destination");
  }

  auto* h = app.add_subcommand("hom", "homomorphism checks and search")->require_subcommand(1);
  {
    auto* c = leaf(h, "check", "is the rule a homomorphism into H; exit 1 on a witness", hom_check);
    rule(c);
    target(c, "target graph H")->required();
    c->add_option("--samples", o.samples, "sampled configurations when exact enumeration is over budget");
    seed(c);
    out(c, "report destination");
    c = leaf(h, "search", "search the rule class for a homomorphism", hom_search);
    target(c, "target graph H")->required();
    shape(c);
    c->add_option("--budget", o.budget, "backtracking node budget")->capture_default_str();
    c->add_option("--samples", o.samples, "edge-ball samples when constraints cannot be enumerated");
    c->add_option("--witness-cap", o.witness_cap, "stored witnesses (reservoir)")->capture_default_str();
    c->add_option("--resume", o.resume, "rule index to resume from");
    seed(c);
    out(c, "report destination");
    c = leaf(h, "certificate", "constant-seed impossibility certificate", hom_certificate);
    target(c, "target graph H")->required();
    shape(c);
    out(c, "report destination");
  }

  auto* s = app.add_subcommand("sim", "emulation and the refutation pipeline")->require_subcommand(1);
  {
    auto* c = leaf(s, "run", "run a rule on a finite graph", sim_run);
    rule(c);
    graph(c);
    c->add_option("--n", o.n, "random regular host size when --graph is absent");
    target(c, "count edges whose outputs are not edges of H");
    c->add_option("--labeling", o.labeling, "dump `vertex label` lines here");
    seed(c);
    threads(c);
    out(c, "report destination");
    c = leaf(s, "pipeline", "refutation chain against H; exit 1 when a step refutes", sim_pipeline);
    rule(c);
    target(c, "target graph H")->required();
    c->add_option("--c0", o.c0, "decimal c0")->capture_default_str();
    c->add_option("--C", o.C, "C")->capture_default_str();
    c->add_option("--samples", o.samples, "Monte Carlo marginals with this many samples");
    c->add_flag("--exact", o.exact, "exact marginals (default unless --samples)");
    c->add_flag("--bits", o.bits, "display entropies in bits");
    seed(c);
    threads(c);
    out(c, "report destination");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& ok) {
    return app.exit(ok);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return 2;
  }

  try {
    Runner run(o, command);
    const int status = handler(run);
    std::cout.flush();
    return status;
  } catch (const fiid::Error& err) {
    std::cerr << Json{{"error", fiid::to_string(err.code())}, {"message", err.what()}}.dump() << '\n';
    return 2;
  } catch (const std::exception& err) {
    std::cerr << Json{{"error", "Internal"}, {"message", err.what()}}.dump() << '\n';
    return 2;
  }
}
