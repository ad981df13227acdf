#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "snowflake/numeric.hpp"
#include "snowflake/spectral.hpp"
#include "snowflake/word.hpp"

namespace snowflake {

struct Edge {
  int source = 0;  // rho
  int target = 0;  // sigma
};

// Directed multigraph with adjacency matrix P. Edges are numbered by
// (source, target, multiplicity) order; all indices are 0-based.
class MarkedGraph {
 public:
  explicit MarkedGraph(const IntMatrix& p);

  int vertices() const { return static_cast<int>(out_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const Edge& edge(int i) const { return edges_[i]; }
  const std::vector<Edge>& edges() const { return edges_; }

  // I_v: edges leaving v, ascending.
  const std::vector<int>& out_edges(int v) const { return out_[v]; }
  int row_sum(int v) const { return static_cast<int>(out_[v].size()); }
  int max_row_sum() const;

  // Position of edge i inside out_edges(source(i)).
  int local_index(int i) const { return local_[i]; }

  // Non-loop edges of a BFS spanning tree rooted at vertex 0 of the
  // underlying undirected graph, lowest edge index first.
  const std::vector<int>& tree_edges() const { return tree_; }

  const IntMatrix& matrix() const { return p_; }

 private:
  IntMatrix p_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_;
  std::vector<int> local_;
  std::vector<int> tree_;
};

// c_v as a word in the edge letters a_i, i in I_v ascending.
Word diagonal_word(const MarkedGraph& g, int v);

enum class Family { Generic, Vm, Snowflake, Z2, Suspension, Product };

struct Presentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;

  Family family = Family::Generic;
  Slope r;
  // Generators rescaled by the suspension automorphism a -> a^r.
  std::vector<bool> scaled;
  int suspension_depth = 0;

  int generator(std::string_view name) const;
  friend bool operator==(const Presentation& a, const Presentation& b) {
    return a.generators == b.generators && a.relators == b.relators;
  }
};

// V_m = <a_1..a_m | [a_i, a_{i+1}...a_m], 1 <= i < m>.
Presentation vm_presentation(int m);

// G_{r,P}: generators a_1..a_n then s_1..s_n (ids i and n + i).
Presentation snowflake_presentation(const IntMatrix& p, const Slope& r, bool kill_tree = false);

Presentation z2_presentation(const Slope& r = Slope(2, 1));

// k-fold suspension; each level adds stable letters u_j, v_j conjugating
// every previous generator g to its image under a_i -> a_i^r.
Presentation suspend(const Presentation& base, int k);

// Direct product with Z^ell via central letters z_1..z_ell.
Presentation product_with_z(const Presentation& base, int ell);

enum class Format { Plain, Json, Calg };

Format parse_format(std::string_view name);

std::string emit(const Presentation& pres, Format format);

// Accepts the Plain and Json renderings produced by emit.
Presentation parse_presentation(std::string_view text, Format format);

std::string format_word(const Word& w, const std::vector<std::string>& names);

}  // namespace snowflake
