#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fiid/ball.hpp"
#include "fiid/edge_ball.hpp"
#include "fiid/error.hpp"
#include "fiid/graph.hpp"
#include "fiid/numeric.hpp"
#include "fiid/rule.hpp"

namespace fiid {

/// Nonexistence here is relative to the searched class; every outcome carries
/// this text.
inline std::string class_caveat(int d, int t, const SeedModel& model)
{
  return "class-relative: only radius-" + std::to_string(t) + " rules on T_" + std::to_string(d) + " under the " +
         model.to_string() +
         " seed model were searched; nonexistence in this class does not rule out other FIID homomorphisms";
}

/// An edge-ball configuration whose endpoint outputs are not adjacent in H.
struct ViolationWitness {
  std::vector<Seed> seeds;  // EdgeBall layout
  Label u_label = 0;
  Label v_label = 0;
};

enum class CheckKind { Pass, Violation, NoViolationInSamples };

inline std::string_view to_string(CheckKind k)
{
  switch (k) {
    case CheckKind::Pass: return "Pass";
    case CheckKind::Violation: return "Violation";
    case CheckKind::NoViolationInSamples: return "NoViolationInSamples";
  }
  return "?";
}

struct HomCheck {
  CheckKind kind = CheckKind::Pass;
  std::optional<ViolationWitness> witness;
  std::uint64_t configurations = 0;
  bool exact = true;
};

inline void check_target_alphabet(const LocalRule& rule, const FiniteGraph& target)
{
  if (static_cast<int>(rule.alphabet().size()) != target.vertex_count()) {
    throw Error(ErrorCode::InvalidArgument, "rule output alphabet must be V(H): " + std::to_string(rule.alphabet().size()) +
                                                " labels vs " + std::to_string(target.vertex_count()) + " vertices");
  }
}

/// True when replaying the witness on `rule` produces a pair outside E(H).
inline bool replay(const LocalRule& rule, const FiniteGraph& target, const ViolationWitness& w)
{
  const EdgeBall edge = EdgeBall::make(rule.d(), rule.t());
  if (static_cast<int>(w.seeds.size()) != edge.size()) return false;
  EdgeEvaluator eval(rule, edge);
  const auto [a, b] = eval(w.seeds);
  return a == w.u_label && b == w.v_label && !target.adjacent(static_cast<int>(a), static_cast<int>(b));
}

/// Exact scan of every edge-ball configuration in lexicographic order,
/// returning the first violation. Beyond the exact budget it falls back to
/// `fallback_samples` random configurations; a clean sampled run is reported
/// as NoViolationInSamples, never as Pass.
inline HomCheck is_homomorphism_rule(const LocalRule& rule, const FiniteGraph& target,
                                     std::uint64_t fallback_samples = 100000, std::uint64_t rng_seed = 0)
{
  check_target_alphabet(rule, target);
  const EdgeBall edge = EdgeBall::make(rule.d(), rule.t());
  EdgeEvaluator eval(rule, edge);
  HomCheck out;
  auto visit = [&](std::span<const Seed> seeds) {
    ++out.configurations;
    const auto [a, b] = eval(seeds);
    if (!target.adjacent(static_cast<int>(a), static_cast<int>(b))) {
      out.kind = CheckKind::Violation;
      out.witness = ViolationWitness{{seeds.begin(), seeds.end()}, a, b};
      return false;
    }
    return true;
  };
  bool exact = true;
  try {
    check_edge_budget(edge, rule.model());
  } catch (const Error&) {
    exact = false;
  }
  if (exact) {
    for_each_edge_configuration(edge, rule.model(), visit);
    return out;
  }
  out.exact = false;
  std::mt19937_64 rng(rng_seed);
  std::vector<Seed> seeds(static_cast<std::size_t>(edge.size()));
  for (std::uint64_t s = 0; s < fallback_samples; ++s) {
    sample_edge_configuration(rule.model(), rng, seeds);
    if (!visit(seeds)) return out;
  }
  out.kind = CheckKind::NoViolationInSamples;
  return out;
}

// Constant-seed certificate -----------------------------------------------------------

/// Under Alphabet seeds the all-zero edge-ball configuration gives both
/// endpoints the same canonical ball, hence the same output, hence a loop,
/// which a simple graph H does not have.
struct ConstantSeedCertificate {
  int d = 0;
  int t = 0;
  unsigned q = 0;
  std::vector<Seed> seeds;
  Code u_code;
  Code v_code;
  std::vector<std::string> reasoning;

  /// Replays the configuration on a candidate rule; true when it exhibits a
  /// monochromatic (hence non-) edge.
  bool refutes(const LocalRule& rule, const FiniteGraph& target) const
  {
    check_target_alphabet(rule, target);
    if (rule.d() != d || rule.t() != t || rule.model() != SeedModel::alphabet(q)) return false;
    const EdgeBall edge = EdgeBall::make(d, t);
    EdgeEvaluator eval(rule, edge);
    const auto [a, b] = eval(seeds);
    return a == b && !target.adjacent(static_cast<int>(a), static_cast<int>(b));
  }
};

inline ConstantSeedCertificate alphabet_impossibility_certificate(const FiniteGraph& target, int d, int t, unsigned q)
{
  // FiniteGraph forbids loops, so the precondition holds by construction.
  ConstantSeedCertificate c;
  c.d = d;
  c.t = t;
  c.q = q;
  const SeedModel model = SeedModel::alphabet(q);
  const EdgeBall edge = EdgeBall::make(d, t);
  c.seeds.assign(static_cast<std::size_t>(edge.size()), Seed{0, 0.0});
  const TreeShape shape = TreeShape::ball(d, t);
  std::vector<Seed> ball(static_cast<std::size_t>(shape.size()), Seed{0, 0.0});
  c.u_code = canonical_code(shape, model, ball);
  c.v_code = c.u_code;
  c.reasoning = {
      "all " + std::to_string(edge.size()) + " edge-ball vertices carry tag 0",
      "both endpoint balls have canonical code " + to_hex(c.u_code) + ", so any rule gives them the same output x",
      "(x, x) is not an edge of H because H has no loops (" + std::to_string(target.vertex_count()) + " vertices, " +
          std::to_string(target.edge_count()) + " edges)",
      "the configuration has probability q^-" + std::to_string(edge.size()) +
          " > 0, so no alphabet:" + std::to_string(q) + " radius-" + std::to_string(t) + " rule is a homomorphism into H",
  };
  return c;
}

// Search ----------------------------------------------------------------------------

enum class SearchKind { Found, ExhaustedNone, ImpossibleByConstantSeeds, BudgetExceeded };

inline std::string_view to_string(SearchKind k)
{
  switch (k) {
    case SearchKind::Found: return "Found";
    case SearchKind::ExhaustedNone: return "ExhaustedNone";
    case SearchKind::ImpossibleByConstantSeeds: return "ImpossibleByConstantSeeds";
    case SearchKind::BudgetExceeded: return "BudgetExceeded";
  }
  return "?";
}

/// Every rule whose table starts with `prefix` (in canonical-ball order) is
/// refuted by `witness`.
struct RefutationRecord {
  std::vector<Label> prefix;
  ViolationWitness witness;
};

struct SearchBudget {
  std::uint64_t max_nodes = 50'000'000;       // backtracking nodes before BudgetExceeded
  std::uint64_t constraint_samples = 200'000; // edge-ball samples when exact enumeration is too large
  std::size_t witness_cap = 1000;
  std::uint64_t rng_seed = 0;
  std::optional<BigInt> resume;  // rule index to restart from
};

struct SearchOutcome {
  SearchKind kind = SearchKind::ExhaustedNone;
  int d = 0;
  int t = 0;
  SeedModel model;
  std::size_t canonical_balls = 0;
  BigInt class_size = 0;
  BigInt rules_examined = 0;  // rules disposed of, in mixed-radix order
  std::uint64_t nodes = 0;
  std::uint64_t refutations = 0;
  bool constraints_exact = true;
  std::size_t constraint_pairs = 0;
  std::optional<LocalRule> rule;
  std::vector<RefutationRecord> witness_sample;
  std::optional<ConstantSeedCertificate> certificate;
  std::optional<BigInt> resume_cursor;
  std::string class_caveat;
};

/// Mixed-radix index of a digit vector, first digit most significant.
inline BigInt rule_index(std::span<const Label> digits, std::size_t radix)
{
  BigInt index = 0;
  for (Label x : digits) index = index * radix + x;
  return index;
}

inline std::vector<Label> rule_digits(const BigInt& index, std::size_t radix, std::size_t length)
{
  std::vector<Label> digits(length, 0);
  BigInt rest = index;
  for (std::size_t i = length; i-- > 0;) {
    digits[i] = static_cast<Label>(static_cast<unsigned long long>(rest % radix));
    rest /= radix;
  }
  if (rest != 0) throw Error(ErrorCode::InvalidArgument, "resume cursor outside the rule class");
  return digits;
}

inline LocalRule rule_from_digits(int d, int t, const SeedModel& model, const std::vector<std::string>& alphabet,
                                  const std::vector<CanonicalBall>& balls, std::span<const Label> digits)
{
  std::map<Code, Label> table;
  for (std::size_t i = 0; i < balls.size(); ++i) table.emplace(balls[i].code, i < digits.size() ? digits[i] : 0u);
  return LocalRule(d, t, model, alphabet, std::move(table));
}

namespace detail {

struct Constraint {
  std::uint32_t other;  // ball index <= the owning index
  std::size_t witness;  // index into the witness configurations
};

struct ConstraintSet {
  std::vector<std::vector<Constraint>> by_ball;  // keyed by the larger ball index
  std::vector<std::vector<Seed>> configs;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> orientation;  // (ball at u, ball at v)
  std::size_t pairs = 0;
  bool exact = true;
};

// Which pairs of canonical balls occur at the two ends of an edge. Any rule
// must send each such pair to an edge of H.
inline ConstraintSet collect_constraints(const LocalRule& probe, const SearchBudget& budget)
{
  const EdgeBall edge = EdgeBall::make(probe.d(), probe.t());
  EdgeEvaluator eval(probe, edge);
  ConstraintSet cs;
  cs.by_ball.resize(probe.size());
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> seen;
  auto visit = [&](std::span<const Seed> seeds) {
    const auto [i, j] = eval.ball_indices(seeds);
    const auto key = std::minmax(i, j);
    if (seen.emplace(key, cs.configs.size()).second) {
      cs.by_ball[key.second].push_back({key.first, cs.configs.size()});
      cs.configs.emplace_back(seeds.begin(), seeds.end());
      cs.orientation.emplace_back(i, j);
    }
    return true;
  };
  try {
    check_edge_budget(edge, probe.model());
    for_each_edge_configuration(edge, probe.model(), visit);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BudgetExceeded) throw;
    cs.exact = false;
    std::mt19937_64 rng(substream_seed(budget.rng_seed, 0xc0));
    std::vector<Seed> seeds(static_cast<std::size_t>(edge.size()));
    for (std::uint64_t s = 0; s < budget.constraint_samples; ++s) {
      sample_edge_configuration(probe.model(), rng, seeds);
      visit(seeds);
    }
  }
  cs.pairs = seen.size();
  return cs;
}

}  // namespace detail

/// Backtracking over rule tables in mixed-radix order (canonical balls sorted
/// by code, first ball most significant), pruning a prefix as soon as some
/// edge configuration whose two balls are both assigned lands outside E(H).
/// Under Alphabet seeds the constant-seed certificate settles the class
/// without enumeration.
inline SearchOutcome search(const FiniteGraph& target, int d, int t, const SeedModel& model, const SearchBudget& budget = {})
{
  SearchOutcome out;
  out.d = d;
  out.t = t;
  out.model = model;
  out.class_caveat = class_caveat(d, t, model);
  const int radix = target.vertex_count();
  if (radix == 0) throw Error(ErrorCode::InvalidArgument, "target graph has no vertices");

  const auto balls = enumerate_canonical_balls(d, t, model);
  out.canonical_balls = balls.size();
  out.class_size = boost::multiprecision::pow(BigInt(radix), static_cast<unsigned>(balls.size()));

  if (model.kind == SeedKind::Alphabet) {
    out.kind = SearchKind::ImpossibleByConstantSeeds;
    out.certificate = alphabet_impossibility_certificate(target, d, t, model.q);
    return out;
  }

  const auto alphabet = vertex_alphabet(radix);
  const LocalRule probe = rule_from_digits(d, t, model, alphabet, balls, {});
  const detail::ConstraintSet cs = detail::collect_constraints(probe, budget);
  out.constraints_exact = cs.exact;
  out.constraint_pairs = cs.pairs;

  const std::size_t K = balls.size();
  std::vector<Label> digits(K, 0);
  std::vector<Label> start(K, 0);
  bool on_start_path = false;
  if (budget.resume) {
    start = rule_digits(*budget.resume, static_cast<std::size_t>(radix), K);
    on_start_path = true;
  }

  std::mt19937_64 reservoir_rng(substream_seed(budget.rng_seed, 0x5e));
  auto record = [&](std::size_t depth, std::size_t witness) {
    ++out.refutations;
    const auto [bu, bv] = cs.orientation[witness];
    RefutationRecord rec{{digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(depth + 1)},
                         {cs.configs[witness], digits[bu], digits[bv]}};
    if (out.witness_sample.size() < budget.witness_cap) {
      out.witness_sample.push_back(std::move(rec));
      return;
    }
    std::uniform_int_distribution<std::uint64_t> pick(0, out.refutations - 1);
    const std::uint64_t slot = pick(reservoir_rng);
    if (slot < budget.witness_cap) out.witness_sample[slot] = std::move(rec);
  };

  // Iterative DFS; `depth` is the ball being assigned.
  std::size_t depth = 0;
  digits[0] = on_start_path ? start[0] : 0;
  while (true) {
    if (depth == K) {
      out.kind = SearchKind::Found;
      out.rule = rule_from_digits(d, t, model, alphabet, balls, digits);
      out.rules_examined = rule_index(digits, static_cast<std::size_t>(radix)) + 1;
      return out;
    }
    if (digits[depth] == static_cast<Label>(radix)) {
      if (depth == 0) {
        out.kind = SearchKind::ExhaustedNone;
        out.rules_examined = out.class_size;
        return out;
      }
      on_start_path = false;
      --depth;
      ++digits[depth];
      continue;
    }
    if (out.nodes >= budget.max_nodes) {
      out.kind = SearchKind::BudgetExceeded;
      std::vector<Label> cursor(digits.begin(), digits.begin() + static_cast<std::ptrdiff_t>(depth + 1));
      cursor.resize(K, 0);
      out.resume_cursor = rule_index(cursor, static_cast<std::size_t>(radix));
      out.rules_examined = *out.resume_cursor;
      return out;
    }
    ++out.nodes;
    const Label x = digits[depth];
    bool violated = false;
    for (const auto& c : cs.by_ball[depth]) {
      if (!target.adjacent(static_cast<int>(x), static_cast<int>(digits[c.other]))) {
        record(depth, c.witness);
        violated = true;
        break;
      }
    }
    if (violated) {
      on_start_path = false;
      ++digits[depth];
      continue;
    }
    ++depth;
    if (depth < K) digits[depth] = on_start_path ? start[depth] : 0;
  }
}

struct ReplayStats {
  std::size_t witnesses_checked = 0;
  std::size_t witnesses_confirmed = 0;
  std::size_t rules_sampled = 0;
  std::size_t rules_covered_by_sample = 0;  // refuted by a stored record
  std::size_t rules_reconstructed = 0;      // refuted by a fresh exact check
};

/// Re-verifies an ExhaustedNone outcome: replays up to `limit` stored
/// witnesses on concrete rules extending their prefixes, then draws up to
/// `limit` rules of the class (all of them when the class is smaller) and
/// checks that each is refuted by a stored witness or, failing that, by the
/// exact checker.
inline ReplayStats replay_refutations(const SearchOutcome& outcome, const FiniteGraph& target, std::size_t limit = 100,
                                      std::uint64_t rng_seed = 1)
{
  ReplayStats stats;
  const auto balls = enumerate_canonical_balls(outcome.d, outcome.t, outcome.model);
  const auto alphabet = vertex_alphabet(target.vertex_count());
  const auto radix = static_cast<std::size_t>(target.vertex_count());

  for (std::size_t i = 0; i < outcome.witness_sample.size() && i < limit; ++i) {
    const auto& rec = outcome.witness_sample[i];
    const LocalRule rule = rule_from_digits(outcome.d, outcome.t, outcome.model, alphabet, balls, rec.prefix);
    ++stats.witnesses_checked;
    if (replay(rule, target, rec.witness)) ++stats.witnesses_confirmed;
  }

  const bool enumerate_all = outcome.class_size <= limit;
  const std::size_t count = enumerate_all ? outcome.class_size.convert_to<std::size_t>() : limit;
  std::mt19937_64 rng(rng_seed);
  std::uniform_int_distribution<Label> pick(0, static_cast<Label>(radix - 1));
  for (std::size_t n = 0; n < count; ++n) {
    std::vector<Label> digits = enumerate_all ? rule_digits(BigInt(n), radix, balls.size()) : std::vector<Label>(balls.size());
    if (!enumerate_all) {
      for (auto& x : digits) x = pick(rng);
    }
    ++stats.rules_sampled;
    const LocalRule rule = rule_from_digits(outcome.d, outcome.t, outcome.model, alphabet, balls, digits);
    bool covered = false;
    for (const auto& rec : outcome.witness_sample) {
      if (std::equal(rec.prefix.begin(), rec.prefix.end(), digits.begin()) && replay(rule, target, rec.witness)) {
        covered = true;
        break;
      }
    }
    if (covered) {
      ++stats.rules_covered_by_sample;
    } else if (is_homomorphism_rule(rule, target).kind == CheckKind::Violation) {
      ++stats.rules_reconstructed;
    }
  }
  return stats;
}

/// The same rule at radius t+1: evaluates the original on the inner radius-t
/// sub-ball, which is the BFS-layout prefix of the larger ball.
inline LocalRule lift(const LocalRule& rule)
{
  const int inner = rule.shape().size();
  std::map<Code, Label> table;
  for (const auto& ball : enumerate_canonical_balls(rule.d(), rule.t() + 1, rule.model())) {
    const auto seeds = decode(ball);
    table.emplace(ball.code, rule.evaluate(std::span<const Seed>(seeds).first(static_cast<std::size_t>(inner))));
  }
  return LocalRule(rule.d(), rule.t() + 1, rule.model(), rule.alphabet(), std::move(table));
}

}  // namespace fiid
