#include "snowflake/snowflake_words.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "snowflake/error.hpp"
#include "snowflake/fit.hpp"

namespace snowflake {

RoundingPolicy parse_policy(std::string_view name) {
  if (name == "nearest") return RoundingPolicy::Nearest;
  if (name == "floor") return RoundingPolicy::Floor;
  if (name == "ceil") return RoundingPolicy::Ceil;
  throw Error(Errc::DomainError, "policy must be nearest, floor or ceil; got " + std::string(name));
}

TerminalRule parse_rule(std::string_view name) {
  if (name == "threshold") return TerminalRule::Threshold;
  if (name == "unit") return TerminalRule::Unit;
  throw Error(Errc::DomainError, "terminal rule must be threshold or unit; got " + std::string(name));
}

Sign parse_sign(std::string_view name) {
  if (name == "+" || name == "pos" || name == "positive") return Sign::Positive;
  if (name == "-" || name == "neg" || name == "negative") return Sign::Negative;
  throw Error(Errc::DomainError, "sign must be + or -; got " + std::string(name));
}

const char* policy_name(RoundingPolicy p) {
  switch (p) {
    case RoundingPolicy::Nearest: return "nearest";
    case RoundingPolicy::Floor: return "floor";
    case RoundingPolicy::Ceil: return "ceil";
  }
  return "nearest";
}

const char* rule_name(TerminalRule r) { return r == TerminalRule::Unit ? "unit" : "threshold"; }

Rational threshold_n0(const IntMatrix& p, const Slope& r) {
  const std::int64_t m = max_row_sum(p);
  const Rational pp(r.p), qq(r.q), mm(m);
  if (pp - mm * qq <= 0) {
    throw Error(Errc::SlopeTooSmall, "r must exceed max row sum " + std::to_string(m) + "; got " + r.str());
  }
  return pp * mm * (qq + 2 + pp) / (pp - mm * qq) + pp;
}

std::int64_t descent_quotient(std::int64_t n, std::int64_t p, RoundingPolicy policy) {
  const std::int64_t lo = floor_div(n, p);
  const std::int64_t rem = n - lo * p;
  switch (policy) {
    case RoundingPolicy::Floor: return lo;
    case RoundingPolicy::Ceil: return rem == 0 ? lo : lo + 1;
    case RoundingPolicy::Nearest: return 2 * rem > p ? lo + 1 : lo;
  }
  return lo;
}

std::size_t memo_cap() {
  const char* env = std::getenv("SNOWFLAKE_MEMO_CAP");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') return 0;
  return static_cast<std::size_t>(v);
}

namespace {

const IntMatrix& checked_family(const SnowflakeParams& params) {
  if (params.z2) throw Error(Errc::DomainError, "the Z^2 family has no snowflake words");
  exponents(params.matrix, params.r);
  return params.matrix;
}

}  // namespace

SnowflakeBuilder::SnowflakeBuilder(const SnowflakeParams& params)
    : params_(params), graph_(checked_family(params)), n0_(threshold_n0(params.matrix, params.r)) {}

int SnowflakeBuilder::default_vertex() const {
  for (int v = 0; v < graph_.vertices(); ++v) {
    if (graph_.row_sum(v) >= 2) return v;
  }
  return 0;
}

bool SnowflakeBuilder::is_terminal(std::int64_t power) const {
  const std::int64_t a = std::llabs(power);
  if (params_.rule == TerminalRule::Unit) return a <= 1;
  return Rational(a) <= n0_;
}

NodePtr SnowflakeBuilder::build(int vertex, std::int64_t power, Sign sign) {
  if (vertex < 0 || vertex >= graph_.vertices()) {
    throw Error(Errc::DomainError, "vertex must be in 1.." + std::to_string(graph_.vertices()) + "; got " +
                                       std::to_string(vertex + 1));
  }
  const auto key = std::make_tuple(vertex, power, sign == Sign::Positive ? 1 : -1);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  auto node = std::make_shared<SnowflakeNode>();
  node->vertex = vertex;
  node->power = power;
  node->sign = sign;
  node->width = graph_.row_sum(vertex);
  node->terminal = is_terminal(power);
  if (!node->terminal) {
    const std::int64_t k = descent_quotient(power, params_.r.p, params_.policy);
    const std::int64_t child_power = checked_mul(k, params_.r.q);
    if (child_power == 0 || std::llabs(child_power) >= std::llabs(power)) {
      node->terminal = true;  // no descent possible
    } else {
      const std::int64_t remainder = power - k * params_.r.p;
      for (int j : graph_.out_edges(vertex)) {
        node->children.push_back({j, remainder, build(graph_.edge(j).target, child_power, sign)});
      }
    }
  }
  const std::size_t cap = memo_cap();
  if (cap == 0 || memo_.size() < cap) memo_.emplace(key, node);
  return node;
}

WordStats word_stats(const SnowflakeNode& root) {
  std::unordered_map<const SnowflakeNode*, WordStats> memo;
  std::function<const WordStats&(const SnowflakeNode&)> go = [&](const SnowflakeNode& node) -> const WordStats& {
    if (auto it = memo.find(&node); it != memo.end()) return it->second;
    WordStats st;
    if (node.terminal) {
      st.length = BigInt(std::llabs(node.power)) * node.width;
    } else {
      st.d_min = std::numeric_limits<int>::max();
      st.d_max = 0;
      for (const auto& child : node.children) {
        const WordStats& cs = go(*child.node);
        st.length += 2 + cs.length + BigInt(std::llabs(child.remainder));
        st.s_count += 2 + cs.s_count;
        st.d_min = std::min(st.d_min, cs.d_min + 1);
        st.d_max = std::max(st.d_max, cs.d_max + 1);
      }
    }
    return memo.emplace(&node, st).first->second;
  };
  return go(root);
}

namespace {

void flatten_into(const MarkedGraph& graph, const SnowflakeNode& node, Word& out) {
  const int n = graph.edge_count();
  const auto& edges = graph.out_edges(node.vertex);
  if (node.terminal) {
    if (node.sign == Sign::Positive) {
      for (int j : edges) out.push(j, node.power);
    } else {
      for (auto it = edges.rbegin(); it != edges.rend(); ++it) out.push(*it, node.power);
    }
    return;
  }
  auto piece = [&](const SnowflakeChild& child) {
    if (node.sign == Sign::Negative) out.push(child.edge, child.remainder);
    out.push(n + child.edge, 1);
    flatten_into(graph, *child.node, out);
    out.push(n + child.edge, -1);
    if (node.sign == Sign::Positive) out.push(child.edge, child.remainder);
  };
  if (node.sign == Sign::Positive) {
    for (const auto& child : node.children) piece(child);
  } else {
    for (auto it = node.children.rbegin(); it != node.children.rend(); ++it) piece(*it);
  }
}

}  // namespace

Word flatten(const MarkedGraph& graph, const SnowflakeNode& node, std::int64_t max_letters) {
  const WordStats st = word_stats(node);
  if (st.length > max_letters) {
    throw Error(Errc::DomainError, "flattened word would have " + st.length.str() + " letters; limit is " +
                                       std::to_string(max_letters));
  }
  Word out;
  flatten_into(graph, node, out);
  return out;
}

VerifyResult verify(const SnowflakeBuilder& builder, const SnowflakeNode& root, std::int64_t budget) {
  const auto& graph = builder.graph();
  const Slope& r = builder.params().r;
  VerifyResult res;
  std::unordered_map<const SnowflakeNode*, bool> seen;
  std::function<void(const SnowflakeNode&, const std::string&)> walk = [&](const SnowflakeNode& node,
                                                                           const std::string& path) {
    if (!res.ok || seen.count(&node)) return;
    seen[&node] = true;
    auto fail = [&](const std::string& why) {
      res.ok = false;
      res.diagnostic = path + ": " + why;
    };
    if (node.vertex < 0 || node.vertex >= graph.vertices()) return fail("vertex out of range");
    if (node.width != graph.row_sum(node.vertex)) return fail("width differs from the row sum");
    if (node.terminal) {
      if (!node.children.empty()) return fail("terminal node has children");
      if (!builder.is_terminal(node.power)) {
        const std::int64_t k = descent_quotient(node.power, r.p, builder.params().policy);
        const std::int64_t child = k * r.q;
        if (child != 0 && std::llabs(child) < std::llabs(node.power)) {
          return fail("node above the threshold was not expanded");
        }
      }
      return;
    }
    if (builder.is_terminal(node.power)) return fail("node below the threshold was expanded");
    const auto& edges = graph.out_edges(node.vertex);
    if (node.children.size() != edges.size()) return fail("child count differs from the row sum");
    for (std::size_t t = 0; t < edges.size(); ++t) {
      const SnowflakeChild& child = node.children[t];
      const std::string here = path + "/e" + std::to_string(child.edge + 1);
      if (child.edge != edges[t]) return fail("children are not in edge order");
      if (std::llabs(child.remainder) >= r.p) return fail("remainder " + std::to_string(child.remainder) + " not below p");
      const std::int64_t diff = node.power - child.remainder;
      if (diff % r.p != 0) return fail("N - N_j is not divisible by p");
      if (child.node->power != diff / r.p * r.q) return fail("child exponent is not (N - N_j) q / p");
      if (child.node->vertex != graph.edge(child.edge).target) return fail("child sits at the wrong vertex");
      if (child.node->sign != node.sign) return fail("child sign differs");
      if (child.remainder != node.children.front().remainder) return fail("remainders are not uniform");
      walk(*child.node, here);
      if (!res.ok) return;
    }
  };
  walk(root, "v" + std::to_string(root.vertex + 1));
  if (!res.ok) return res;

  const WordStats st = word_stats(root);
  if (st.length <= budget) {
    BrittonSolver solver(builder.params().matrix, r);
    auto got = solver.power_of_c(root.vertex, flatten(graph, root));
    res.britton_checked = true;
    if (!got || *got != root.power) {
      res.ok = false;
      res.diagnostic = "word does not reduce to c_" + std::to_string(root.vertex + 1) + "^" +
                       std::to_string(root.power);
    }
  }
  return res;
}

std::string tree_text(const SnowflakeNode& root) {
  std::ostringstream os;
  std::function<void(const SnowflakeNode&, int, const std::string&)> go = [&](const SnowflakeNode& node, int depth,
                                                                               const std::string& label) {
    os << std::string(2 * depth, ' ') << label << "c_" << node.vertex + 1 << "^" << node.power << " ("
       << (node.sign == Sign::Positive ? "+" : "-") << (node.terminal ? ", terminal" : "") << ")\n";
    for (const auto& child : node.children) {
      go(*child.node, depth + 1, "s_" + std::to_string(child.edge + 1) + " | a_" + std::to_string(child.edge + 1) +
                                     "^" + std::to_string(child.remainder) + " | ");
    }
  };
  go(root, 0, "");
  return os.str();
}

std::string tree_json(const SnowflakeNode& root) {
  // Shared subwords appear once; children refer to node ids.
  std::unordered_map<const SnowflakeNode*, int> ids;
  std::vector<const SnowflakeNode*> order;
  std::function<int(const SnowflakeNode&)> visit = [&](const SnowflakeNode& node) -> int {
    if (auto it = ids.find(&node); it != ids.end()) return it->second;
    for (const auto& child : node.children) visit(*child.node);
    int id = static_cast<int>(order.size());
    ids[&node] = id;
    order.push_back(&node);
    return id;
  };
  const int root_id = visit(root);
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (const SnowflakeNode* node : order) {
    nlohmann::ordered_json j;
    j["id"] = ids[node];
    j["vertex"] = node->vertex + 1;
    j["N"] = node->power;
    j["sign"] = node->sign == Sign::Positive ? "+" : "-";
    j["terminal"] = node->terminal;
    auto children = nlohmann::ordered_json::array();
    for (const auto& child : node->children) {
      children.push_back({{"edge", child.edge + 1}, {"remainder", child.remainder}, {"node", ids[child.node.get()]}});
    }
    j["children"] = children;
    nodes.push_back(j);
  }
  nlohmann::ordered_json out;
  out["root"] = root_id;
  out["nodes"] = nodes;
  return out.dump(2) + "\n";
}

BigInt uniform_s_count(const IntMatrix& p, int vertex, int depth) {
  const BigMatrix big = cast_matrix<BigInt>(p);
  BigMatrix power = BigMatrix::Identity(p.rows(), p.cols());
  BigInt total = 0;
  for (int i = 1; i <= depth; ++i) {
    power = exact_product(power, big);
    for (Eigen::Index j = 0; j < power.cols(); ++j) total += power(vertex, j);
  }
  return 2 * total;
}

ExponentFit fit_alpha(const SnowflakeParams& params, int d_lo, int d_hi, int vertex) {
  if (d_hi - d_lo + 1 < 3) {
    throw Error(Errc::InsufficientData, "need at least 3 depths; got " + std::to_string(std::max(0, d_hi - d_lo + 1)));
  }
  if (d_lo < 1) throw Error(Errc::NonPositiveIndex, "depths must be positive; got " + std::to_string(d_lo));
  ExponentFit out;
  std::vector<double> xs, ys;
  if (params.z2) {
    out.target = 1.0;
    for (int d = d_lo; d <= d_hi; ++d) {
      BigInt n = rounded_power(params.r, d);
      out.samples.push_back({n, 4 * n});
    }
  } else {
    SnowflakeBuilder builder(params);
    out.target = exponents(params.matrix, params.r).alpha.value();
    const int v = vertex < 0 ? builder.default_vertex() : vertex;
    for (int d = d_lo; d <= d_hi; ++d) {
      BigInt n = rounded_power(params.r, d);
      if (n > std::numeric_limits<std::int64_t>::max()) {
        throw Error(Errc::Overflow, "r^" + std::to_string(d) + " exceeds 64 bits");
      }
      NodePtr node = builder.build(v, n.convert_to<std::int64_t>());
      out.samples.push_back({n, word_stats(*node).length});
    }
  }
  out.c0 = std::numeric_limits<double>::infinity();
  out.c1 = 0;
  for (const auto& s : out.samples) {
    const double ln_n = log_big(s.power);
    const double ln_w = log_big(s.length);
    xs.push_back(ln_w);
    ys.push_back(ln_n);
    const double ratio = std::exp(ln_n - out.target * ln_w);
    out.c0 = std::min(out.c0, ratio);
    out.c1 = std::max(out.c1, ratio);
  }
  LineFit line = fit_line(xs, ys);
  out.slope = line.slope;
  out.intercept = line.intercept;
  out.residual = line.residual;
  return out;
}

}  // namespace snowflake
