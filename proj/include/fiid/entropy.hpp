#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "fiid/ball.hpp"
#include "fiid/edge_ball.hpp"
#include "fiid/error.hpp"
#include "fiid/graph.hpp"
#include "fiid/numeric.hpp"
#include "fiid/rule.hpp"

namespace fiid {

// Distributions --------------------------------------------------------------------

struct Provenance {
  enum class Kind { Exact, MonteCarlo };
  Kind kind = Kind::Exact;
  std::uint64_t samples = 0;

  static Provenance exact() { return {}; }
  static Provenance monte_carlo(std::uint64_t n) { return {Kind::MonteCarlo, n}; }
  bool is_exact() const { return kind == Kind::Exact; }
  std::string to_string() const { return is_exact() ? "Exact" : "MonteCarlo(" + std::to_string(samples) + ")"; }
};

/// Law of the label at a random vertex (p_v for each v in the alphabet).
struct LabelDistribution {
  std::vector<std::string> labels;
  std::vector<double> p;
  std::optional<std::vector<Rational>> exact;
  Provenance provenance;

  std::size_t size() const { return p.size(); }

  void validate() const
  {
    if (p.size() != labels.size() || p.empty()) throw Error(ErrorCode::InvalidDistribution, "size mismatch");
    double total = 0.0;
    for (double x : p) {
      if (!(x >= 0.0)) throw Error(ErrorCode::InvalidDistribution, "negative or NaN probability");
      total += x;
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorCode::InvalidDistribution, "probabilities sum to " + std::to_string(total));
    if (exact) {
      Rational sum = 0;
      for (const auto& x : *exact) {
        if (x < 0) throw Error(ErrorCode::InvalidDistribution, "negative exact probability");
        sum += x;
      }
      if (sum != 1 || exact->size() != p.size()) throw Error(ErrorCode::InvalidDistribution, "exact probabilities do not sum to 1");
    }
  }

  static LabelDistribution from_exact(std::vector<std::string> labels, std::vector<Rational> probs)
  {
    LabelDistribution out;
    out.labels = std::move(labels);
    for (const auto& x : probs) out.p.push_back(to_double(x));
    out.exact = std::move(probs);
    out.validate();
    return out;
  }
};

/// Law of the ordered label pair at the endpoints of a fixed edge; row-major
/// k x k, q(a, b) = P(f(u) = a, f(v) = b).
struct PairDistribution {
  std::vector<std::string> labels;
  std::vector<double> q;
  std::optional<std::vector<Rational>> exact;
  Provenance provenance;

  std::size_t size() const { return labels.size(); }
  double at(std::size_t a, std::size_t b) const { return q[a * size() + b]; }

  void validate() const
  {
    const std::size_t k = labels.size();
    if (k == 0 || q.size() != k * k) throw Error(ErrorCode::InvalidDistribution, "pair law size mismatch");
    double total = 0.0;
    for (double x : q) {
      if (!(x >= 0.0)) throw Error(ErrorCode::InvalidDistribution, "negative or NaN probability");
      total += x;
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorCode::InvalidDistribution, "pair probabilities sum to " + std::to_string(total));
    if (exact) {
      Rational sum = 0;
      for (const auto& x : *exact) sum += x;
      if (sum != 1 || exact->size() != q.size()) throw Error(ErrorCode::InvalidDistribution, "exact pair probabilities do not sum to 1");
    }
  }

  /// Law of the first coordinate.
  LabelDistribution row_marginal() const
  {
    const std::size_t k = size();
    LabelDistribution out;
    out.labels = labels;
    out.provenance = provenance;
    out.p.assign(k, 0.0);
    if (exact) out.exact = std::vector<Rational>(k, Rational(0));
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        out.p[a] += at(a, b);
        if (exact) (*out.exact)[a] += (*exact)[a * k + b];
      }
    }
    if (exact) {
      for (std::size_t a = 0; a < k; ++a) out.p[a] = to_double((*out.exact)[a]);
    }
    return out;
  }

  LabelDistribution column_marginal() const
  {
    const std::size_t k = size();
    LabelDistribution out;
    out.labels = labels;
    out.provenance = provenance;
    out.p.assign(k, 0.0);
    if (exact) out.exact = std::vector<Rational>(k, Rational(0));
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        out.p[b] += at(a, b);
        if (exact) (*out.exact)[b] += (*exact)[a * k + b];
      }
    }
    if (exact) {
      for (std::size_t b = 0; b < k; ++b) out.p[b] = to_double((*out.exact)[b]);
    }
    return out;
  }

  static PairDistribution from_exact(std::vector<std::string> labels, std::vector<Rational> probs)
  {
    PairDistribution out;
    out.labels = std::move(labels);
    for (const auto& x : probs) out.q.push_back(to_double(x));
    out.exact = std::move(probs);
    out.validate();
    return out;
  }
};

// Entropy ---------------------------------------------------------------------------

/// -sum p ln p over any range of probabilities, with 0 ln 0 = 0.
template <class Range>
double entropy_of(const Range& probs)
{
  double h = 0.0;
  for (double x : probs) {
    if (x > 0.0) h -= x * std::log(x);
  }
  return h;
}

/// Shannon entropy in nats.
inline double entropy(const LabelDistribution& dist)
{
  dist.validate();
  return entropy_of(dist.p);
}

struct ConditionalEntropy {
  double joint = 0.0;        // h(X, Y)
  double conditioning = 0.0; // h(Y)
  double conditional = 0.0;  // h(X | Y)
};

/// h(X|Y) = -sum P(x,y) ln(P(x,y)/P(y)) with X the row and Y the column
/// coordinate of the pair law.
inline ConditionalEntropy conditional_entropy(const PairDistribution& pair)
{
  pair.validate();
  const std::size_t k = pair.size();
  const LabelDistribution y = pair.column_marginal();
  ConditionalEntropy out;
  out.joint = entropy_of(pair.q);
  out.conditioning = entropy_of(y.p);
  double h = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      const double pxy = pair.at(a, b);
      if (pxy > 0.0) h -= pxy * std::log(pxy / y.p[b]);
    }
  }
  out.conditional = h;
  return out;
}

struct Marginals {
  LabelDistribution vertex;
  PairDistribution edge;
};

// Exact marginals --------------------------------------------------------------------

namespace detail {

inline Rational exact_total(const SeedModel& model, int vertices)
{
  BigInt total = 1;
  if (model.has_tags()) total *= boost::multiprecision::pow(BigInt(model.q), static_cast<unsigned>(vertices));
  if (model.has_ranks()) {
    for (int i = 2; i <= vertices; ++i) total *= i;
  }
  return Rational(total);
}

inline LabelDistribution exact_vertex_law(const LocalRule& rule)
{
  const auto& model = rule.model();
  const int n = rule.shape().size();
  const std::size_t k = rule.alphabet().size();
  std::vector<BigInt> weight(k, 0);
  // With ranks every label is distinct, so each orbit has full size |Aut|.
  std::uint64_t full_orbit = 1;
  for (const auto& kids : rule.shape().children) {
    for (std::size_t i = 2; i <= kids.size(); ++i) full_orbit *= i;
  }
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const std::uint64_t orbit = model.has_ranks()
                                    ? full_orbit
                                    : orbit_size({rule.d(), rule.t(), model, rule.codes()[i]});
    weight[rule.labels()[i]] += orbit;
  }
  const Rational total = exact_total(model, n);
  std::vector<Rational> probs;
  for (const auto& w : weight) probs.push_back(Rational(w) / total);
  auto out = LabelDistribution::from_exact(rule.alphabet(), std::move(probs));
  return out;
}

// One side of the edge ball reduced to what the endpoint balls can see.
struct SideClass {
  std::string root_label;
  std::vector<Code> full_children;  // sorted codes of the side children, depth t-1
  Code as_child;                    // this endpoint seen from across the edge, depth t-1
  std::uint64_t count = 0;
};

inline std::vector<SideClass> alphabet_side_classes(int d, int t, unsigned q)
{
  const TreeShape half = TreeShape::half(d, t);
  const auto h = static_cast<std::size_t>(half.size());
  const SeedModel model = SeedModel::alphabet(q);
  std::map<Code, SideClass> classes;
  std::vector<Seed> seeds(h);
  std::vector<std::uint32_t> tags(h, 0);
  NodeLabels labels;
  while (true) {
    for (std::size_t i = 0; i < h; ++i) seeds[i].tag = tags[i];
    fill_labels(seeds, model, labels);
    SideClass c;
    c.root_label.assign(labels.bytes[0].data(), labels.width);
    for (int child : half.children[0]) {
      Code code;
      append_code(half, labels, child, t - 1, code);
      c.full_children.push_back(std::move(code));
    }
    std::sort(c.full_children.begin(), c.full_children.end());
    if (t > 0) append_code(half, labels, 0, t - 1, c.as_child);
    Code key = c.root_label;
    for (const auto& part : c.full_children) key += part;
    auto [it, inserted] = classes.emplace(std::move(key), std::move(c));
    ++it->second.count;

    std::size_t pos = h;
    while (pos > 0 && tags[pos - 1] + 1 == q) tags[--pos] = 0;
    if (pos == 0) break;
    ++tags[pos - 1];
  }
  std::vector<SideClass> out;
  out.reserve(classes.size());
  for (auto& [key, c] : classes) out.push_back(std::move(c));
  return out;
}

inline Code join_ball_code(const SideClass& self, const SideClass& other, int t)
{
  Code code = self.root_label;
  if (t == 0) return code;
  auto it = std::lower_bound(self.full_children.begin(), self.full_children.end(), other.as_child);
  for (auto p = self.full_children.begin(); p != it; ++p) code += *p;
  code += other.as_child;
  for (auto p = it; p != self.full_children.end(); ++p) code += *p;
  return code;
}

// Alphabet seeds are local, so each endpoint ball depends on the edge ball
// only through the two side classes.
inline std::vector<std::uint64_t> alphabet_pair_counts(const LocalRule& rule)
{
  const std::size_t k = rule.alphabet().size();
  const auto classes = alphabet_side_classes(rule.d(), rule.t(), rule.model().q);
  std::vector<Label> as_u(classes.size() * classes.size());
  std::vector<std::uint64_t> counts(k * k, 0);
  for (std::size_t a = 0; a < classes.size(); ++a) {
    for (std::size_t b = 0; b < classes.size(); ++b) {
      const Label lu = rule.lookup(join_ball_code(classes[a], classes[b], rule.t()));
      as_u[a * classes.size() + b] = lu;
    }
  }
  for (std::size_t a = 0; a < classes.size(); ++a) {
    for (std::size_t b = 0; b < classes.size(); ++b) {
      const Label lu = as_u[a * classes.size() + b];
      const Label lv = as_u[b * classes.size() + a];
      counts[lu * k + lv] += classes[a].count * classes[b].count;
    }
  }
  return counts;
}

inline std::vector<std::uint64_t> brute_force_pair_counts(const LocalRule& rule)
{
  const std::size_t k = rule.alphabet().size();
  const EdgeBall edge = EdgeBall::make(rule.d(), rule.t());
  EdgeEvaluator eval(rule, edge);
  std::vector<std::uint64_t> counts(k * k, 0);
  for_each_edge_configuration(edge, rule.model(), [&](std::span<const Seed> seeds) {
    const auto [a, b] = eval(seeds);
    ++counts[a * k + b];
    return true;
  });
  return counts;
}

}  // namespace detail

/// Exact laws by weighted enumeration over the vertex ball and the edge ball.
/// Budget: q^(ball size) <= 1e7 (tags) and at most 10 ranked vertices; for
/// d = 3 rank models the exact pair law is available at t <= 1.
inline Marginals exact_marginals(const LocalRule& rule)
{
  check_vertex_budget(rule.d(), rule.t(), rule.model());
  const EdgeBall edge = EdgeBall::make(rule.d(), rule.t());
  check_edge_budget(edge, rule.model());

  Marginals out;
  out.vertex = detail::exact_vertex_law(rule);
  const auto counts = rule.model().kind == SeedKind::Alphabet ? detail::alphabet_pair_counts(rule)
                                                              : detail::brute_force_pair_counts(rule);
  const Rational total = detail::exact_total(rule.model(), edge.size());
  std::vector<Rational> probs;
  probs.reserve(counts.size());
  for (auto c : counts) probs.push_back(Rational(BigInt(c)) / total);
  out.edge = PairDistribution::from_exact(rule.alphabet(), std::move(probs));
  return out;
}

// Monte Carlo ------------------------------------------------------------------------

inline constexpr std::uint64_t kMonteCarloBlock = 1u << 16;

/// Plug-in laws from n i.i.d. edge-ball samples. Sample blocks draw from
/// substreams of the master seed, so the result does not depend on `threads`.
/// The pair law is symmetrized and the vertex law counts both endpoints.
inline Marginals mc_marginals(const LocalRule& rule, std::uint64_t n_samples, std::uint64_t rng_seed, unsigned threads = 1)
{
  if (n_samples == 0) throw Error(ErrorCode::InvalidArgument, "n_samples must be >= 1");
  const std::size_t k = rule.alphabet().size();
  const EdgeBall edge = EdgeBall::make(rule.d(), rule.t());
  const std::uint64_t blocks = (n_samples + kMonteCarloBlock - 1) / kMonteCarloBlock;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::uint64_t>(blocks, 256))));

  std::vector<std::vector<std::uint64_t>> partial(threads, std::vector<std::uint64_t>(k * k, 0));
  std::atomic<std::uint64_t> next_block{0};
  auto worker = [&](unsigned w) {
    EdgeEvaluator eval(rule, edge);
    std::vector<Seed> seeds(static_cast<std::size_t>(edge.size()));
    auto& counts = partial[w];
    for (std::uint64_t b = next_block++; b < blocks; b = next_block++) {
      std::mt19937_64 rng(substream_seed(rng_seed, b));
      const std::uint64_t begin = b * kMonteCarloBlock;
      const std::uint64_t end = std::min(n_samples, begin + kMonteCarloBlock);
      for (std::uint64_t s = begin; s < end; ++s) {
        sample_edge_configuration(rule.model(), rng, seeds);
        const auto [x, y] = eval(seeds);
        ++counts[x * k + y];
      }
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }
  std::vector<std::uint64_t> counts(k * k, 0);
  for (const auto& part : partial) {
    for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += part[i];
  }

  Marginals out;
  const double denom = 2.0 * static_cast<double>(n_samples);
  out.edge.labels = rule.alphabet();
  out.edge.provenance = Provenance::monte_carlo(n_samples);
  out.edge.q.assign(k * k, 0.0);
  out.vertex.labels = rule.alphabet();
  out.vertex.provenance = Provenance::monte_carlo(n_samples);
  out.vertex.p.assign(k, 0.0);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      out.edge.q[a * k + b] = static_cast<double>(counts[a * k + b] + counts[b * k + a]) / denom;
      out.vertex.p[a] += static_cast<double>(counts[a * k + b] + counts[b * k + a]);
    }
    out.vertex.p[a] /= denom;
  }
  return out;
}

/// Total-variation distance between two laws on the same alphabet.
inline double total_variation(std::span<const double> p, std::span<const double> q)
{
  if (p.size() != q.size()) throw Error(ErrorCode::InvalidArgument, "total_variation size mismatch");
  double tv = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
  return 0.5 * tv;
}

// Audit -----------------------------------------------------------------------------

struct Verdict {
  std::string check;
  bool pass = true;
  double margin = 0.0;  // rhs - lhs of the checked inequality
};

struct EntropyReport {
  double h_vertex = 0.0;
  double h_edge = 0.0;
  double h_nbr_given_vertex = 0.0;
  double slack_edge_vertex = 0.0;  // h_edge - (4/3) h_vertex
  std::optional<int> r;
  double tolerance = 0.0;
  std::vector<Verdict> verdicts;
  Provenance provenance;

  bool all_pass() const
  {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
  }
  const Verdict* find(std::string_view check) const
  {
    for (const auto& v : verdicts) {
      if (v.check == check) return &v;
    }
    return nullptr;
  }
};

inline constexpr double kExactTolerance = 1e-9;

namespace detail {

// Delta-method variance of the plug-in entropy estimator.
inline double plug_in_variance(std::span<const double> p, std::uint64_t n)
{
  double second = 0.0;
  for (double x : p) {
    if (x > 0.0) second += x * std::log(x) * std::log(x);
  }
  const double h = entropy_of(p);
  return std::max(0.0, second - h * h) / static_cast<double>(n);
}

}  // namespace detail

/// Pair-support check against E(H): every ordered pair with positive mass
/// must be an edge. Labels index the vertices of H.
inline Verdict support_verdict(const PairDistribution& pair, const FiniteGraph& target)
{
  const std::size_t k = pair.size();
  if (static_cast<int>(k) != target.vertex_count()) {
    throw Error(ErrorCode::InvalidArgument, "pair law alphabet does not match V(H)");
  }
  double off_edge = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      const bool positive = pair.exact ? (*pair.exact)[a * k + b] > 0 : pair.at(a, b) > 0.0;
      if (positive && !target.adjacent(static_cast<int>(a), static_cast<int>(b))) off_edge += pair.at(a, b);
    }
  }
  return {"support", off_edge == 0.0, -off_edge};
}

/// Edge-vertex inequality (4/3) h_vertex <= h_edge and, with a target of
/// regularity r, the support check plus h_nbr|vertex <= ln r and
/// h_vertex <= 3 ln r. Tolerance 1e-9 on exact laws, 3 sigma on Monte Carlo.
inline EntropyReport audit(const LabelDistribution& vertex, const PairDistribution& pair, std::optional<int> r = std::nullopt,
                           const FiniteGraph* target = nullptr)
{
  vertex.validate();
  pair.validate();
  const std::size_t k = pair.size();
  if (vertex.size() != k) throw Error(ErrorCode::InconsistentMarginals, "vertex and pair alphabets differ");
  const bool exact = vertex.provenance.is_exact() && pair.provenance.is_exact();
  const std::uint64_t samples = exact ? 0 : std::max<std::uint64_t>(1, std::max(vertex.provenance.samples, pair.provenance.samples));

  const LabelDistribution rows = pair.row_marginal();
  if (exact && vertex.exact && pair.exact) {
    if (*rows.exact != *vertex.exact) throw Error(ErrorCode::InconsistentMarginals, "pair row sums differ from vertex law");
  } else {
    const double tol = exact ? 1e-9 : 5.0 / std::sqrt(static_cast<double>(samples));
    for (std::size_t a = 0; a < k; ++a) {
      if (std::abs(rows.p[a] - vertex.p[a]) > tol) {
        throw Error(ErrorCode::InconsistentMarginals, "pair row sum differs from vertex law at label " + vertex.labels[a]);
      }
    }
  }

  EntropyReport rep;
  rep.provenance = exact ? Provenance::exact() : Provenance::monte_carlo(samples);
  rep.h_vertex = entropy_of(vertex.p);
  rep.h_edge = entropy_of(pair.q);
  // Direct conditional formula, conditioning on the first endpoint.
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      const double pab = pair.at(a, b);
      if (pab > 0.0) rep.h_nbr_given_vertex -= pab * std::log(pab / rows.p[a]);
    }
  }
  rep.slack_edge_vertex = rep.h_edge - 4.0 / 3.0 * rep.h_vertex;

  double var_vertex = 0.0;
  double var_edge = 0.0;
  if (!exact) {
    var_vertex = detail::plug_in_variance(vertex.p, samples);
    var_edge = detail::plug_in_variance(pair.q, samples);
  }
  const double tol_edge_vertex = exact ? kExactTolerance : 3.0 * std::sqrt(var_edge + 16.0 / 9.0 * var_vertex);
  const double tol_nbr = exact ? kExactTolerance : 3.0 * std::sqrt(var_edge + var_vertex);
  const double tol_vertex = exact ? kExactTolerance : 3.0 * std::sqrt(var_vertex);
  rep.tolerance = tol_edge_vertex;

  rep.verdicts.push_back({"edge_vertex", rep.slack_edge_vertex + tol_edge_vertex >= 0.0, rep.slack_edge_vertex});

  bool support_ok = true;
  if (target) {
    const Verdict support = support_verdict(pair, *target);
    support_ok = support.pass;
    rep.verdicts.push_back(support);
    if (!r) {
      const auto prof = profile(*target);
      r = prof.regular_degree ? *prof.regular_degree : target->max_degree();
    }
  }
  rep.r = r;
  if (r && support_ok) {
    if (*r < 1) throw Error(ErrorCode::InvalidArgument, "regularity must be >= 1");
    const double ln_r = std::log(static_cast<double>(*r));
    const double nbr_margin = ln_r - rep.h_nbr_given_vertex;
    const double vertex_margin = 3.0 * ln_r - rep.h_vertex;
    rep.verdicts.push_back({"nbr_given_vertex", nbr_margin + tol_nbr >= 0.0, nbr_margin});
    rep.verdicts.push_back({"vertex_cap", vertex_margin + tol_vertex >= 0.0, vertex_margin});
  }
  return rep;
}

inline EntropyReport audit(const Marginals& m, std::optional<int> r = std::nullopt, const FiniteGraph* target = nullptr)
{
  return audit(m.vertex, m.edge, r, target);
}

// Girth constant -----------------------------------------------------------------------

struct GirthConstant {
  int r = 0;
  Rational c0;
  std::optional<BigInt> value;  // least integer > r^(3/c0); empty on overflow
  double log10_value = 0.0;     // log10 r^(3/c0)
  BigInt exponent_numerator;    // 3/c0 = numerator / denominator
  BigInt exponent_denominator;

  bool overflow() const { return !value.has_value(); }
};

inline constexpr double kGirthConstantBitLimit = 1 << 24;

/// Least integer C with C > r^(3/c0), exactly: with 3/c0 = a/b in lowest
/// terms, C = floor((r^a)^(1/b)) + 1. Reports overflow (never wraps) when
/// r^a would exceed 2^(2^24).
inline GirthConstant min_girth_constant(int r, const Rational& c0)
{
  if (r < 2) throw Error(ErrorCode::InvalidArgument, "r must be >= 2");
  if (!(c0 > 0 && c0 < 1)) throw Error(ErrorCode::InvalidArgument, "c0 must lie in (0, 1)");
  GirthConstant out;
  out.r = r;
  out.c0 = c0;
  const Rational exponent = Rational(3) / c0;
  out.exponent_numerator = boost::multiprecision::numerator(exponent);
  out.exponent_denominator = boost::multiprecision::denominator(exponent);
  out.log10_value = to_double(exponent) * std::log10(static_cast<double>(r));
  const double bits = out.exponent_numerator.convert_to<double>() * std::log2(static_cast<double>(r));
  if (bits > kGirthConstantBitLimit || out.exponent_denominator > 1000000) return out;
  const auto a = out.exponent_numerator.convert_to<unsigned>();
  const auto b = out.exponent_denominator.convert_to<unsigned>();
  const BigInt power = boost::multiprecision::pow(BigInt(r), a);
  out.value = integer_root_floor(power, b) + 1;
  return out;
}

inline GirthConstant min_girth_constant(int r, double c0)
{
  return min_girth_constant(r, parse_decimal(std::to_string(c0)));
}

// Tail selection -------------------------------------------------------------------------

struct TailSelection {
  long long C = 0;
  Rational c0;
  std::vector<Label> inside;  // the C-1 heaviest labels, heaviest first
  bool saturated = false;     // C-1 >= number of labels: S is everything
  double inside_mass = 0.0;
  double outside_mass = 0.0;
  std::optional<Rational> outside_mass_exact;
  double tail_entropy = 0.0;  // sum over v outside S of -p_v ln p_v
  double max_outside_p = 0.0;
  double min_inside_p = 0.0;
  double inverse_C = 0.0;
  bool outside_below_inverse_C = true;  // every outside p_v <= 1/C
  double tail_lower_bound = 0.0;        // outside_mass * ln C
  bool tail_bound_holds = true;         // tail_entropy >= outside_mass * ln C
  bool hypothesis_triggered = false;    // outside_mass >= c0
  double c0_ln_C = 0.0;
  std::optional<bool> entropy_implication;  // when triggered: tail_entropy >= c0 ln C
};

/// Heaviest C-1 labels (ties to the smaller index) and the chain of bounds
/// used to show that a light tail forces large vertex entropy: each outside
/// p_v is at most the lightest inside mass, hence at most 1/C, hence
/// contributes at least p_v ln C.
inline TailSelection tail_select(const LabelDistribution& dist, long long C, const Rational& c0)
{
  dist.validate();
  if (C < 2) throw Error(ErrorCode::InvalidArgument, "C must be >= 2");
  if (c0 <= 0 || c0 >= 1) throw Error(ErrorCode::InvalidArgument, "c0 must lie in (0, 1)");
  TailSelection out;
  out.C = C;
  out.c0 = c0;
  const std::size_t k = dist.size();
  std::vector<Label> order(k);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [&](Label a, Label b) {
    if (dist.exact) return (*dist.exact)[a] > (*dist.exact)[b];
    return dist.p[a] > dist.p[b];
  });
  const auto take = static_cast<std::size_t>(std::min<long long>(C - 1, static_cast<long long>(k)));
  out.saturated = static_cast<long long>(k) <= C - 1;
  out.inside.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take));

  std::vector<char> in_s(k, 0);
  for (Label v : out.inside) in_s[v] = 1;
  Rational outside_exact = 0;
  out.min_inside_p = out.inside.empty() ? 0.0 : dist.p[out.inside.back()];
  for (std::size_t v = 0; v < k; ++v) {
    if (in_s[v]) {
      out.inside_mass += dist.p[v];
      continue;
    }
    out.outside_mass += dist.p[v];
    if (dist.exact) outside_exact += (*dist.exact)[v];
    if (dist.p[v] > 0.0) out.tail_entropy -= dist.p[v] * std::log(dist.p[v]);
    out.max_outside_p = std::max(out.max_outside_p, dist.p[v]);
  }
  if (dist.exact) {
    out.outside_mass_exact = outside_exact;
    out.outside_mass = to_double(outside_exact);
    out.inside_mass = to_double(Rational(1) - outside_exact);
  }
  const double ln_C = std::log(static_cast<double>(C));
  out.inverse_C = 1.0 / static_cast<double>(C);
  out.outside_below_inverse_C = out.max_outside_p <= out.inverse_C + 1e-15;
  out.tail_lower_bound = out.outside_mass * ln_C;
  out.tail_bound_holds = out.tail_entropy + 1e-12 >= out.tail_lower_bound;
  out.hypothesis_triggered = out.outside_mass_exact ? *out.outside_mass_exact >= c0 : out.outside_mass >= to_double(c0);
  out.c0_ln_C = to_double(c0) * ln_C;
  if (out.hypothesis_triggered) out.entropy_implication = out.tail_entropy + 1e-12 >= out.c0_ln_C;
  return out;
}

inline TailSelection tail_select(const LabelDistribution& dist, long long C, double c0)
{
  return tail_select(dist, C, parse_decimal(std::to_string(c0)));
}

}  // namespace fiid
