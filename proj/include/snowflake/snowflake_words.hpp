#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "snowflake/britton.hpp"
#include "snowflake/numeric.hpp"
#include "snowflake/presentation.hpp"
#include "snowflake/spectral.hpp"
#include "snowflake/word.hpp"

namespace snowflake {

enum class RoundingPolicy { Nearest, Floor, Ceil };

// Threshold stops descending once |N| <= N0. Unit descends down to |N| <= 1,
// which for N = r^d gives the uniform depth-d words.
enum class TerminalRule { Threshold, Unit };

enum class Sign { Positive, Negative };

RoundingPolicy parse_policy(std::string_view name);
TerminalRule parse_rule(std::string_view name);
Sign parse_sign(std::string_view name);
const char* policy_name(RoundingPolicy p);
const char* rule_name(TerminalRule r);

struct SnowflakeParams {
  IntMatrix matrix = IntMatrix::Constant(1, 1, 4);
  Slope r = Slope(8, 1);
  RoundingPolicy policy = RoundingPolicy::Nearest;
  TerminalRule rule = TerminalRule::Threshold;
  bool z2 = false;  // the abelian family; matrix is ignored
};

// N0 = p M (q + 2 + p) / (p - M q) + p with M the maximal row sum.
Rational threshold_n0(const IntMatrix& p, const Slope& r);

// k with N = k p + N_j under the rounding policy.
std::int64_t descent_quotient(std::int64_t n, std::int64_t p, RoundingPolicy policy);

// Entry cap for memo tables, from SNOWFLAKE_MEMO_CAP (0 = unbounded).
std::size_t memo_cap();

struct SnowflakeNode;
using NodePtr = std::shared_ptr<const SnowflakeNode>;

struct SnowflakeChild {
  int edge = 0;
  std::int64_t remainder = 0;  // N_j
  NodePtr node;                // word for c_{sigma(j)}^{k q}
};

struct SnowflakeNode {
  int vertex = 0;
  std::int64_t power = 0;
  Sign sign = Sign::Positive;
  int width = 0;  // m_v, the number of edges leaving the vertex
  bool terminal = true;
  std::vector<SnowflakeChild> children;  // I_v ascending
};

class SnowflakeBuilder {
 public:
  explicit SnowflakeBuilder(const SnowflakeParams& params);

  const SnowflakeParams& params() const { return params_; }
  const MarkedGraph& graph() const { return graph_; }
  const Rational& n0() const { return n0_; }
  // First vertex with at least two outgoing edges, else 0.
  int default_vertex() const;

  NodePtr build(int vertex, std::int64_t power, Sign sign = Sign::Positive);
  bool is_terminal(std::int64_t power) const;

 private:
  SnowflakeParams params_;
  MarkedGraph graph_;
  Rational n0_;
  std::map<std::tuple<int, std::int64_t, int>, NodePtr> memo_;
};

struct WordStats {
  BigInt length = 0;
  BigInt s_count = 0;
  int d_min = 0;
  int d_max = 0;
};

WordStats word_stats(const SnowflakeNode& node);

// Letter ids as in snowflake_presentation: a_i -> i, s_i -> n + i.
// Throws DomainError above `max_letters`.
Word flatten(const MarkedGraph& graph, const SnowflakeNode& node, std::int64_t max_letters = 50'000'000);

struct VerifyResult {
  bool ok = true;
  bool britton_checked = false;
  std::string diagnostic;
};

// Structural checks on every node; when the flattened word has at most
// `budget` letters it is also reduced and compared with c_v^N.
VerifyResult verify(const SnowflakeBuilder& builder, const SnowflakeNode& node, std::int64_t budget = 5000);

std::string tree_text(const SnowflakeNode& node);
std::string tree_json(const SnowflakeNode& node);

// 2 * sum_{i=1}^{d} |(P^T)^i x_v|_1, the stable-letter count of the uniform
// depth-d word at vertex v.
BigInt uniform_s_count(const IntMatrix& p, int vertex, int depth);

struct SamplePoint {
  BigInt power;
  BigInt length;
};

struct ExponentFit {
  double slope = 0;
  double intercept = 0;
  double residual = 0;
  double target = 0;
  double c0 = 0;  // min N / |w|^alpha over samples
  double c1 = 0;  // max N / |w|^alpha over samples
  std::vector<SamplePoint> samples;
};

// Regression of log N against log |w| over N = r^d, d in [d_lo, d_hi]
// (rounded to the nearest integer for rational r).
ExponentFit fit_alpha(const SnowflakeParams& params, int d_lo, int d_hi, int vertex = -1);

}  // namespace snowflake
