#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fiid/ball.hpp"
#include "fiid/error.hpp"

namespace fiid {

/// Index into a rule's output alphabet.
using Label = std::uint32_t;

/// Equivariant radius-t rule on T_d: a total table from canonical ball codes
/// to output labels. Immutable once built.
class LocalRule {
 public:
  /// `table` must cover every canonical ball of (d, t, model) exactly once;
  /// throws IncompleteTable otherwise.
  LocalRule(int d, int t, SeedModel model, std::vector<std::string> alphabet, std::map<Code, Label> table)
      : d_(d), t_(t), model_(model), alphabet_(std::move(alphabet)), shape_(TreeShape::ball(d, t))
  {
    if (alphabet_.empty()) throw Error(ErrorCode::InvalidArgument, "empty output alphabet");
    for (const auto& name : alphabet_) {
      if (name.empty() || name.find_first_of(" \t\n,") != std::string::npos) {
        throw Error(ErrorCode::InvalidArgument, "label '" + name + "' must be non-empty without spaces or commas");
      }
    }
    const auto balls = enumerate_canonical_balls(d, t, model);
    if (table.size() != balls.size()) {
      throw Error(ErrorCode::IncompleteTable, "table has " + std::to_string(table.size()) + " entries, " +
                                                  std::to_string(balls.size()) + " canonical balls");
    }
    codes_.reserve(balls.size());
    labels_.reserve(balls.size());
    for (const auto& ball : balls) {
      auto it = table.find(ball.code);
      if (it == table.end()) throw Error(ErrorCode::IncompleteTable, "no entry for ball " + ball.hex());
      if (it->second >= alphabet_.size()) {
        throw Error(ErrorCode::InvalidArgument, "label index " + std::to_string(it->second) + " outside alphabet");
      }
      codes_.push_back(ball.code);
      labels_.push_back(it->second);
    }
    index_.reserve(codes_.size());
    for (std::size_t i = 0; i < codes_.size(); ++i) index_.emplace(codes_[i], static_cast<std::uint32_t>(i));
  }

  int d() const { return d_; }
  int t() const { return t_; }
  const SeedModel& model() const { return model_; }
  const std::vector<std::string>& alphabet() const { return alphabet_; }
  const TreeShape& shape() const { return shape_; }

  /// Canonical balls in code order, and the label of each.
  const std::vector<Code>& codes() const { return codes_; }
  const std::vector<Label>& labels() const { return labels_; }
  std::size_t size() const { return codes_.size(); }

  /// Position of a canonical code in codes(); throws MalformedBall if absent.
  std::uint32_t ball_index(const Code& code) const
  {
    auto it = index_.find(code);
    if (it == index_.end()) throw Error(ErrorCode::MalformedBall, "code " + to_hex(code) + " not in rule table");
    return it->second;
  }

  Label lookup(const Code& code) const { return labels_[ball_index(code)]; }

  /// Table lookup on the canonical form of a raw ball in TreeShape layout.
  Label evaluate(std::span<const Seed> raw) const { return lookup(canonical_code(shape_, model_, raw)); }

  Label label_index(const std::string& name) const
  {
    auto it = std::find(alphabet_.begin(), alphabet_.end(), name);
    if (it == alphabet_.end()) throw Error(ErrorCode::InvalidArgument, "label '" + name + "' not in alphabet");
    return static_cast<Label>(it - alphabet_.begin());
  }

  friend bool operator==(const LocalRule& a, const LocalRule& b)
  {
    return a.d_ == b.d_ && a.t_ == b.t_ && a.model_ == b.model_ && a.alphabet_ == b.alphabet_ &&
           a.codes_ == b.codes_ && a.labels_ == b.labels_;
  }

 private:
  int d_;
  int t_;
  SeedModel model_;
  std::vector<std::string> alphabet_;
  TreeShape shape_;
  std::vector<Code> codes_;
  std::vector<Label> labels_;
  std::unordered_map<Code, std::uint32_t> index_;
};

inline CanonicalBall canonicalize(const LocalRule& rule, std::span<const Seed> raw)
{
  return {rule.d(), rule.t(), rule.model(), canonical_code(rule.shape(), rule.model(), raw)};
}

inline Label evaluate(const LocalRule& rule, std::span<const Seed> raw) { return rule.evaluate(raw); }

/// Output alphabet "0".."n-1", the vertex set of a target graph.
inline std::vector<std::string> vertex_alphabet(int n)
{
  std::vector<std::string> out;
  for (int v = 0; v < n; ++v) out.push_back(std::to_string(v));
  return out;
}

// Built-in rules -------------------------------------------------------------------

inline LocalRule constant_rule(int d, int t, SeedModel model, std::vector<std::string> alphabet, Label value)
{
  std::map<Code, Label> table;
  for (const auto& ball : enumerate_canonical_balls(d, t, model)) table.emplace(ball.code, value);
  return LocalRule(d, t, model, std::move(alphabet), std::move(table));
}

/// Radius-1 rank rule: IN (label 0) iff the root's seed is the strict maximum
/// of its closed neighbourhood, OUT (label 1) otherwise.
inline LocalRule max_seed_independent_rule(int d = 3)
{
  std::map<Code, Label> table;
  const auto top = static_cast<char>(d + 1);
  for (const auto& ball : enumerate_canonical_balls(d, 1, SeedModel::rank())) {
    table.emplace(ball.code, ball.code[0] == top ? 0u : 1u);
  }
  return LocalRule(d, 1, SeedModel::rank(), {"IN", "OUT"}, std::move(table));
}

inline LocalRule table_rule(int d, int t, SeedModel model, std::vector<std::string> alphabet,
                            const std::map<Code, std::string>& entries)
{
  std::map<Code, Label> table;
  for (const auto& [code, name] : entries) {
    auto it = std::find(alphabet.begin(), alphabet.end(), name);
    if (it == alphabet.end()) throw Error(ErrorCode::InvalidArgument, "label '" + name + "' not in alphabet");
    table.emplace(code, static_cast<Label>(it - alphabet.begin()));
  }
  return LocalRule(d, t, model, std::move(alphabet), std::move(table));
}

struct BuiltinParams {
  int d = 3;
  int t = 0;
  SeedModel model = SeedModel::rank();
  std::vector<std::string> alphabet;
  std::string label;
  std::map<Code, std::string> table;
};

/// Named rules: constant, max_seed_independent, rank_table, alphabet_table.
inline LocalRule builtin_rule(std::string_view name, const BuiltinParams& p)
{
  if (name == "constant") {
    std::vector<std::string> alphabet = p.alphabet.empty() ? std::vector<std::string>{p.label} : p.alphabet;
    auto it = std::find(alphabet.begin(), alphabet.end(), p.label);
    if (it == alphabet.end()) throw Error(ErrorCode::InvalidArgument, "constant label '" + p.label + "' not in alphabet");
    const auto value = static_cast<Label>(it - alphabet.begin());
    return constant_rule(p.d, p.t, p.model, std::move(alphabet), value);
  }
  if (name == "max_seed_independent") return max_seed_independent_rule(p.d);
  if (name == "rank_table") return table_rule(p.d, p.t, SeedModel::rank(), p.alphabet, p.table);
  if (name == "alphabet_table") {
    if (p.model.kind != SeedKind::Alphabet) throw Error(ErrorCode::InvalidArgument, "alphabet_table needs an alphabet model");
    return table_rule(p.d, p.t, p.model, p.alphabet, p.table);
  }
  throw Error(ErrorCode::UnknownName, "unknown builtin rule '" + std::string(name) + "'");
}

/// Independent uniform label per canonical ball; deterministic given the seed.
inline LocalRule random_rule(int d, int t, SeedModel model, std::vector<std::string> alphabet, std::uint64_t rng_seed)
{
  if (alphabet.empty()) throw Error(ErrorCode::InvalidArgument, "empty output alphabet");
  std::mt19937_64 rng(rng_seed);
  std::uniform_int_distribution<Label> pick(0, static_cast<Label>(alphabet.size() - 1));
  std::map<Code, Label> table;
  for (const auto& ball : enumerate_canonical_balls(d, t, model)) table.emplace(ball.code, pick(rng));
  return LocalRule(d, t, model, std::move(alphabet), std::move(table));
}

/// Composes the rule with a label map old index -> new index.
inline LocalRule relabel(const LocalRule& rule, std::vector<std::string> alphabet, std::span<const Label> mapping)
{
  if (mapping.size() != rule.alphabet().size()) throw Error(ErrorCode::InvalidArgument, "relabel mapping size mismatch");
  std::map<Code, Label> table;
  for (std::size_t i = 0; i < rule.size(); ++i) table.emplace(rule.codes()[i], mapping[rule.labels()[i]]);
  return LocalRule(rule.d(), rule.t(), rule.model(), std::move(alphabet), std::move(table));
}

// Serialization --------------------------------------------------------------------

/// Header `d t model a,b,c` then one `<code_hex> <label>` line per canonical
/// ball in code order.
inline void write_rule(std::ostream& out, const LocalRule& rule)
{
  out << rule.d() << ' ' << rule.t() << ' ' << rule.model().to_string() << ' ';
  for (std::size_t i = 0; i < rule.alphabet().size(); ++i) out << (i ? "," : "") << rule.alphabet()[i];
  out << '\n';
  for (std::size_t i = 0; i < rule.size(); ++i) {
    out << to_hex(rule.codes()[i]) << ' ' << rule.alphabet()[rule.labels()[i]] << '\n';
  }
}

inline LocalRule read_rule(std::istream& in)
{
  int d = 0;
  int t = 0;
  std::string model_text;
  std::string alphabet_text;
  if (!(in >> d >> t >> model_text >> alphabet_text)) throw Error(ErrorCode::ParseError, "rule header must be `d t model alphabet`");
  std::vector<std::string> alphabet;
  std::stringstream split(alphabet_text);
  for (std::string item; std::getline(split, item, ',');) alphabet.push_back(item);
  std::map<Code, std::string> entries;
  std::string hex;
  std::string label;
  while (in >> hex) {
    if (!(in >> label)) throw Error(ErrorCode::ParseError, "missing label after " + hex);
    if (!entries.emplace(from_hex(hex), label).second) throw Error(ErrorCode::ParseError, "duplicate ball " + hex);
  }
  return table_rule(d, t, SeedModel::parse(model_text), std::move(alphabet), entries);
}

inline std::string rule_to_string(const LocalRule& rule)
{
  std::ostringstream out;
  write_rule(out, rule);
  return out.str();
}

}  // namespace fiid
