#include <random>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "snowflake/britton.hpp"
#include "snowflake/error.hpp"
#include "snowflake/presentation.hpp"

using namespace snowflake;

namespace {

IntMatrix m(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  IntMatrix out(rows.size(), rows.begin()->size());
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (auto v : row) out(i, j++) = v;
    ++i;
  }
  return out;
}

struct Family {
  IntMatrix p;
  Slope r;
};

std::vector<Family> families() {
  return {{m({{4}}), Slope(8, 1)}, {m({{16}}), Slope(32, 1)}, {m({{1, 1}, {2, 1}}), Slope(4, 1)},
          {m({{4}}), Slope(9, 2)}, {m({{1, 1}, {2, 1}}), Slope(7, 2)}};
}

// Product of conjugates g R^{+-1} g^-1 based at vertex `base`.
Word relator_product(const BrittonSolver& solver, const Presentation& pres, int base, std::mt19937& rng) {
  const auto& g = solver.graph();
  Word out;
  for (int k = gen::uniform(rng, 1, 3); k > 0; --k) {
    const Word& rel = pres.relators[gen::uniform(rng, 0, static_cast<int>(pres.relators.size()) - 1)];
    const int rb = oracle::relator_base(g, rel);
    auto [walk, end] = oracle::random_walk(g, base, gen::uniform(rng, 0, 4), rng);
    Word conj = walk * oracle::stable_path(g, end, rb);
    out.append(conj * (gen::uniform(rng, 0, 1) ? rel : rel.inverse()) * conj.inverse());
  }
  return out;
}

}  // namespace

TEST(Britton, ParseAndFormat) {
  BrittonSolver solver(m({{1, 1}, {2, 1}}), Slope(4, 1));
  Word w = solver.parse("a1^2 s2 c2^-1 s2^-1");
  EXPECT_EQ(solver.format(w), "a1^2 s2 a5^-1 a4^-1 a3^-1 s2^-1");
  EXPECT_EQ(solver.check_loop(w), 0);
  EXPECT_THROW(solver.check_loop(solver.parse("s2")), Error);
  EXPECT_THROW(solver.parse("q1"), Error);
}

TEST(Britton, EmittedRelatorsAreTrivial) {
  for (const auto& f : families()) {
    BrittonSolver solver(f.p, f.r);
    Presentation pres = snowflake_presentation(f.p, f.r);
    for (const auto& rel : pres.relators) {
      EXPECT_TRUE(solver.is_trivial(rel)) << solver.format(rel);
    }
  }
}

TEST(Britton, FuzzedRelatorProductsAreTrivialAndReplay) {
  std::mt19937 rng(31337);
  for (const auto& f : families()) {
    BrittonSolver solver(f.p, f.r);
    Presentation pres = snowflake_presentation(f.p, f.r);
    int done = 0;
    while (done < 200) {
      const int base = gen::uniform(rng, 0, solver.graph().vertices() - 1);
      Word w = relator_product(solver, pres, base, rng);
      if (w.length() > 60) continue;
      ++done;
      Reduction red = solver.reduce(w, base);
      EXPECT_TRUE(red.trivial) << solver.format(w);
      EXPECT_EQ(red.trace.replay(red.reduced), red.trace.input);
    }
  }
}

TEST(Britton, StableLetterSumsSeparate) {
  // Loops whose stable-letter exponent sums differ are different elements.
  std::mt19937 rng(8);
  for (const auto& f : families()) {
    BrittonSolver solver(f.p, f.r);
    const auto& g = solver.graph();
    const int n = g.edge_count();
    int done = 0;
    while (done < 200) {
      auto [u, ue] = oracle::random_walk(g, 0, gen::uniform(rng, 1, 8), rng);
      auto [v, ve] = oracle::random_walk(g, 0, gen::uniform(rng, 1, 8), rng);
      u.append(oracle::stable_path(g, ue, 0));
      v.append(oracle::stable_path(g, ve, 0));
      if (oracle::stable_sums(u, n) == oracle::stable_sums(v, n)) continue;
      ++done;
      EXPECT_FALSE(solver.equal(u, v, 0)) << solver.format(u) << " vs " << solver.format(v);
    }
  }
}

TEST(Britton, ReducedWordsKeepTheStableSum) {
  std::mt19937 rng(12);
  for (const auto& f : families()) {
    BrittonSolver solver(f.p, f.r);
    const auto& g = solver.graph();
    for (int t = 0; t < 200; ++t) {
      auto [u, end] = oracle::random_walk(g, 0, gen::uniform(rng, 1, 10), rng);
      u.append(oracle::stable_path(g, end, 0));
      Reduction red = solver.reduce(u, 0);
      EXPECT_EQ(oracle::stable_sums(red.word(), g.edge_count()), oracle::stable_sums(u, g.edge_count()));
      EXPECT_EQ(red.trace.replay(red.reduced), red.trace.input);
      if (red.trivial) EXPECT_TRUE(red.reduced.empty() || !red.has_stable_letters);
    }
  }
}

TEST(Britton, PowersOfDiagonal) {
  BrittonSolver solver(m({{4}}), Slope(8, 1));
  // s_1 c s_1^-1 = a_1^8.
  Word w = solver.parse("s1 c1 s1^-1 a2^8 a3^8 a4^8");
  auto n = solver.power_of_c(0, w);
  ASSERT_TRUE(n);
  EXPECT_EQ(*n, 8);
  EXPECT_FALSE(solver.power_of_c(0, solver.parse("a1 a2")));
}

TEST(Britton, KilledTreeWords) {
  IntMatrix p = m({{1, 1}, {2, 1}});
  BrittonSolver solver(p, Slope(4, 1));
  Presentation killed = snowflake_presentation(p, Slope(4, 1), true);
  // The tree edge is s_2 (0 -> 1); a word in the killed presentation may
  // read a letters of vertex 1 right after vertex 0.
  Word w = solver.parse("a1 a3 a1^-1 a3^-1");
  EXPECT_THROW(solver.check_loop(w), Error);
  Word loop = solver.reinsert_tree_letters(w, 0);
  EXPECT_NO_THROW(solver.check_loop(loop, 0));
  EXPECT_FALSE(solver.is_trivial(loop, 0));
  for (const auto& rel : killed.relators) {
    if (rel.size() == 1) continue;  // s_i itself
    EXPECT_TRUE(solver.is_trivial(solver.reinsert_tree_letters(rel, 0), 0)) << solver.format(rel);
  }
}
