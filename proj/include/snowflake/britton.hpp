#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "snowflake/presentation.hpp"
#include "snowflake/vm.hpp"
#include "snowflake/word.hpp"

namespace snowflake {

// One executed pinch: original occupied [position, position + original.size())
// of the word at that moment and was replaced by `replacement`.
struct Pinch {
  std::size_t position = 0;
  int edge = 0;
  // +1 for s^-1 a^{kp} s -> c^{kq}, -1 for s c^{kq} s^-1 -> a^{kp}.
  int direction = 0;
  std::int64_t k = 0;
  std::vector<Syllable> original;
  std::vector<Syllable> replacement;
};

struct ReductionTrace {
  std::vector<Syllable> input;  // stable letters split into unit syllables
  std::vector<Pinch> pinches;

  // Undoes every pinch from `reduced`, recovering `input`.
  std::vector<Syllable> replay(const std::vector<Syllable>& reduced) const;
};

struct Reduction {
  int base = 0;
  std::vector<Syllable> reduced;  // unmerged syllables
  ReductionTrace trace;
  bool has_stable_letters = false;
  bool trivial = false;

  Word word() const { return Word(reduced); }
};

// Word problem in G_{r,P} for integer or rational r. Letter ids follow
// snowflake_presentation: a_i -> i, s_i -> n + i (0-based edges). Words
// must trace closed loops in the graph: a_i is read at rho(i), s_i moves
// rho(i) -> sigma(i).
class BrittonSolver {
 public:
  BrittonSolver(const IntMatrix& p, const Slope& r);

  const MarkedGraph& graph() const { return graph_; }
  const Slope& r() const { return r_; }
  int edges() const { return graph_.edge_count(); }
  int a(int edge) const { return edge; }
  int s(int edge) const { return edges() + edge; }
  bool is_stable(int id) const { return id >= edges(); }

  // Tokens a<i>, s<i>, c<v> (1-based, optional underscore, ^exp suffix).
  // c<v> expands to the diagonal word of vertex v.
  Word parse(std::string_view text) const;
  std::string format(const Word& w) const;
  std::vector<std::string> generator_names() const;

  // Returns the base vertex of the loop; throws IllFormed otherwise.
  int check_loop(const Word& w, int base = -1) const;

  Reduction reduce(const Word& w, int base = -1) const;
  bool is_trivial(const Word& w, int base = -1) const;
  bool equal(const Word& u, const Word& v, int base = -1) const;

  // N with w = c_v^N, if w represents a power of c_v.
  std::optional<std::int64_t> power_of_c(int vertex, const Word& w) const;

  // Words over the tree-killed presentation omit the stable letters of the
  // maximal tree; this re-inserts tree paths so the word is a closed loop.
  Word reinsert_tree_letters(const Word& w, int base = 0) const;

  // The a-letters of vertex v rewritten in V_{m_v} letters.
  Word to_local(int vertex, const std::vector<Syllable>& segment) const;

 private:
  std::vector<int> tree_path(int from, int to) const;

  MarkedGraph graph_;
  Slope r_;
};

}  // namespace snowflake
