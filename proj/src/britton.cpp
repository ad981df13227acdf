#include "snowflake/britton.hpp"

#include <charconv>
#include <cstdlib>
#include <deque>
#include <sstream>

#include "snowflake/error.hpp"

namespace snowflake {

std::vector<Syllable> ReductionTrace::replay(const std::vector<Syllable>& reduced) const {
  std::vector<Syllable> cur = reduced;
  for (auto it = pinches.rbegin(); it != pinches.rend(); ++it) {
    std::vector<Syllable> next(cur.begin(), cur.begin() + static_cast<std::ptrdiff_t>(it->position));
    next.insert(next.end(), it->original.begin(), it->original.end());
    next.insert(next.end(), cur.begin() + static_cast<std::ptrdiff_t>(it->position + it->replacement.size()),
                cur.end());
    cur = std::move(next);
  }
  return cur;
}

BrittonSolver::BrittonSolver(const IntMatrix& p, const Slope& r) : graph_(p), r_(r) {
  exponents(p, r);
}

namespace {

std::pair<std::string, std::int64_t> split_token(const std::string& tok) {
  auto caret = tok.find('^');
  std::int64_t exp = 1;
  if (caret != std::string::npos) {
    std::string_view e(tok);
    e = e.substr(caret + 1);
    if (!e.empty() && e.front() == '+') e.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(e.data(), e.data() + e.size(), exp);
    if (ec != std::errc() || ptr != e.data() + e.size() || e.empty()) {
      throw Error(Errc::IllFormed, "bad exponent in '" + tok + "'");
    }
  }
  return {tok.substr(0, caret), exp};
}

}  // namespace

Word BrittonSolver::parse(std::string_view text) const {
  Word w;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    auto [name, exp] = split_token(tok);
    if (name.size() < 2 || (name[0] != 'a' && name[0] != 's' && name[0] != 'c')) {
      throw Error(Errc::UnknownGenerator, "unknown letter '" + name + "'");
    }
    std::string_view digits(name);
    digits.remove_prefix(1);
    if (!digits.empty() && digits.front() == '_') digits.remove_prefix(1);
    int index = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
      throw Error(Errc::UnknownGenerator, "unknown letter '" + name + "'");
    }
    if (name[0] == 'c') {
      if (index < 1 || index > graph_.vertices()) {
        throw Error(Errc::UnknownGenerator, "no vertex " + std::to_string(index) + " for '" + name + "'");
      }
      w.append(diagonal_word(graph_, index - 1).pow(exp));
      continue;
    }
    if (index < 1 || index > edges()) {
      throw Error(Errc::UnknownGenerator, "no edge " + std::to_string(index) + " for '" + name + "'");
    }
    w.push(name[0] == 'a' ? a(index - 1) : s(index - 1), exp);
  }
  return w;
}

std::vector<std::string> BrittonSolver::generator_names() const {
  std::vector<std::string> names;
  for (int i = 0; i < edges(); ++i) names.push_back("a" + std::to_string(i + 1));
  for (int i = 0; i < edges(); ++i) names.push_back("s" + std::to_string(i + 1));
  return names;
}

std::string BrittonSolver::format(const Word& w) const { return format_word(w, generator_names()); }

int BrittonSolver::check_loop(const Word& w, int base) const {
  const int n = edges();
  for (const auto& syl : w.syllables()) {
    if (syl.gen < 0 || syl.gen >= 2 * n) {
      throw Error(Errc::UnknownGenerator, "letter id " + std::to_string(syl.gen) + " is outside the presentation");
    }
  }
  if (base < 0) {
    if (w.empty()) return 0;
    const Syllable& first = w[0];
    if (first.gen < n) base = graph_.edge(first.gen).source;
    else base = first.exp > 0 ? graph_.edge(first.gen - n).source : graph_.edge(first.gen - n).target;
  }
  if (base >= graph_.vertices()) throw Error(Errc::IllFormed, "base vertex out of range");
  int at = base;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const Syllable& syl = w[k];
    if (syl.gen < n) {
      if (graph_.edge(syl.gen).source != at) {
        throw Error(Errc::IllFormed, "a_" + std::to_string(syl.gen + 1) + " read at vertex " + std::to_string(at + 1) +
                                         " but lives at vertex " + std::to_string(graph_.edge(syl.gen).source + 1));
      }
      continue;
    }
    const Edge& e = graph_.edge(syl.gen - n);
    for (std::int64_t t = 0; t < std::llabs(syl.exp); ++t) {
      const int from = syl.exp > 0 ? e.source : e.target;
      const int to = syl.exp > 0 ? e.target : e.source;
      if (at != from) {
        throw Error(Errc::IllFormed, "s_" + std::to_string(syl.gen - n + 1) + (syl.exp > 0 ? "" : "^-1") +
                                         " read at vertex " + std::to_string(at + 1) + " but starts at vertex " +
                                         std::to_string(from + 1));
      }
      at = to;
    }
  }
  if (at != base) {
    throw Error(Errc::IllFormed, "word does not close up: starts at vertex " + std::to_string(base + 1) +
                                     " and ends at vertex " + std::to_string(at + 1));
  }
  return base;
}

Word BrittonSolver::to_local(int vertex, const std::vector<Syllable>& segment) const {
  Word local;
  for (const auto& syl : segment) {
    if (syl.gen >= edges() || graph_.edge(syl.gen).source != vertex) {
      throw Error(Errc::Internal, "segment letter does not belong to vertex " + std::to_string(vertex + 1));
    }
    local.push(graph_.local_index(syl.gen), syl.exp);
  }
  return local;
}

Reduction BrittonSolver::reduce(const Word& w, int base) const {
  Reduction red;
  red.base = check_loop(w, base);
  const int n = edges();
  for (const auto& syl : w.syllables()) {
    if (syl.gen < n) {
      red.trace.input.push_back(syl);
    } else {
      for (std::int64_t t = 0; t < std::llabs(syl.exp); ++t) red.trace.input.push_back({syl.gen, syl.exp > 0 ? 1 : -1});
    }
  }

  std::vector<Syllable>& out = red.reduced;
  std::vector<std::size_t> stable;  // positions of stable letters in `out`
  for (const auto& syl : red.trace.input) {
    if (syl.gen < n) {
      out.push_back(syl);
      continue;
    }
    const int edge = syl.gen - n;
    if (!stable.empty()) {
      const std::size_t at = stable.back();
      const Syllable prev = out[at];
      if (prev.gen == syl.gen && prev.exp == -syl.exp) {
        std::vector<Syllable> segment(out.begin() + static_cast<std::ptrdiff_t>(at + 1), out.end());
        const Edge& e = graph_.edge(edge);
        std::optional<std::int64_t> k;
        std::vector<Syllable> replacement;
        if (prev.exp < 0) {
          // s^-1 g s with g in <a_i^p> at rho(i)
          const VmAlphabet alpha(graph_.row_sum(e.source));
          Word local = to_local(e.source, segment);
          auto ab = alpha.abelianize(local);
          const int li = graph_.local_index(edge);
          bool candidate = ab[li] % r_.p == 0;
          for (int t = 0; t < alpha.m() && candidate; ++t) candidate = t == li || ab[t] == 0;
          if (candidate && is_identity(alpha, local * Word::power(li, -ab[li]))) {
            k = ab[li] / r_.p;
            const std::int64_t e_out = checked_mul(*k, r_.q);
            if (e_out != 0) {
              for (int j : graph_.out_edges(e.target)) replacement.push_back({j, e_out});
            }
          }
        } else {
          // s h s^-1 with h in <c^q> at sigma(i)
          const VmAlphabet alpha(graph_.row_sum(e.target));
          Word local = to_local(e.target, segment);
          auto ab = alpha.abelianize(local);
          bool candidate = ab[0] % r_.q == 0;
          for (int t = 1; t < alpha.m() && candidate; ++t) candidate = ab[t] == ab[0];
          if (candidate && is_identity(alpha, local * Word::power(alpha.c(), -ab[0]))) {
            k = ab[0] / r_.q;
            const std::int64_t e_out = checked_mul(*k, r_.p);
            if (e_out != 0) replacement.push_back({edge, e_out});
          }
        }
        if (k) {
          Pinch pinch;
          pinch.position = at;
          pinch.edge = edge;
          pinch.direction = prev.exp < 0 ? 1 : -1;
          pinch.k = *k;
          pinch.original.assign(out.begin() + static_cast<std::ptrdiff_t>(at), out.end());
          pinch.original.push_back(syl);
          pinch.replacement = replacement;
          out.resize(at);
          out.insert(out.end(), replacement.begin(), replacement.end());
          stable.pop_back();
          red.trace.pinches.push_back(std::move(pinch));
          continue;
        }
      }
    }
    stable.push_back(out.size());
    out.push_back(syl);
  }

  red.has_stable_letters = !stable.empty();
  if (!red.has_stable_letters) {
    const VmAlphabet alpha(graph_.row_sum(red.base));
    red.trivial = is_identity(alpha, to_local(red.base, out));
  }
  return red;
}

bool BrittonSolver::is_trivial(const Word& w, int base) const { return reduce(w, base).trivial; }

bool BrittonSolver::equal(const Word& u, const Word& v, int base) const {
  int b = base;
  if (b < 0) b = u.empty() ? check_loop(v) : check_loop(u);
  check_loop(u, b);
  check_loop(v, b);
  return is_trivial(u * v.inverse(), b);
}

std::optional<std::int64_t> BrittonSolver::power_of_c(int vertex, const Word& w) const {
  Reduction red = reduce(w, vertex);
  if (red.has_stable_letters) return std::nullopt;
  const VmAlphabet alpha(graph_.row_sum(vertex));
  try {
    return shuffle(alpha, to_local(vertex, red.reduced)).power;
  } catch (const Error& e) {
    if (e.code() == Errc::NotACPower) return std::nullopt;
    throw;
  }
}

std::vector<int> BrittonSolver::tree_path(int from, int to) const {
  // Signed stable letters (edge + 1, negated for reverse traversal) along the tree.
  std::vector<int> parent_edge(graph_.vertices(), 0);
  std::vector<int> parent(graph_.vertices(), -1);
  std::vector<bool> seen(graph_.vertices(), false);
  std::deque<int> queue{from};
  seen[from] = true;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int e : graph_.tree_edges()) {
      const Edge& ed = graph_.edge(e);
      int other = -1;
      int sign = 0;
      if (ed.source == v) { other = ed.target; sign = 1; }
      else if (ed.target == v) { other = ed.source; sign = -1; }
      if (other < 0 || seen[other]) continue;
      seen[other] = true;
      parent[other] = v;
      parent_edge[other] = sign * (e + 1);
      queue.push_back(other);
    }
  }
  std::vector<int> path;
  for (int v = to; v != from; v = parent[v]) path.push_back(parent_edge[v]);
  return {path.rbegin(), path.rend()};
}

Word BrittonSolver::reinsert_tree_letters(const Word& w, int base) const {
  const int n = edges();
  Word out;
  int at = base;
  auto travel = [&](int target) {
    for (int signed_edge : tree_path(at, target)) {
      out.push(s(std::abs(signed_edge) - 1), signed_edge > 0 ? 1 : -1);
    }
    at = target;
  };
  for (const auto& syl : w.syllables()) {
    if (syl.gen < n) {
      travel(graph_.edge(syl.gen).source);
      out.push(syl);
      continue;
    }
    const Edge& e = graph_.edge(syl.gen - n);
    for (std::int64_t t = 0; t < std::llabs(syl.exp); ++t) {
      travel(syl.exp > 0 ? e.source : e.target);
      out.push(syl.gen, syl.exp > 0 ? 1 : -1);
      at = syl.exp > 0 ? e.target : e.source;
    }
  }
  travel(base);
  return out;
}

}  // namespace snowflake
