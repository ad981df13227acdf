#pragma once

// Hand-rolled random generators for property tests.

#include <cstdint>
#include <random>
#include <vector>

#include "snowflake/presentation.hpp"
#include "snowflake/vm.hpp"
#include "snowflake/word.hpp"

namespace gen {

using snowflake::VmAlphabet;
using snowflake::Word;

inline int uniform(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline std::int64_t nonzero(std::mt19937& rng, int bound) {
  const int v = uniform(rng, 1, bound);
  return uniform(rng, 0, 1) ? v : -v;
}

inline Word random_vm_word(const VmAlphabet& alpha, std::mt19937& rng, int syllables, int max_exp) {
  Word w;
  for (int i = 0; i < syllables; ++i) w.push(uniform(rng, 0, alpha.letters() - 1), nonzero(rng, max_exp));
  return w;
}

// A relator of V_m in the letters of VmAlphabet: [a_i, b_i], the listed
// commutator [a_i, a_{i+1}...a_m], or an alias relation b_{i-1}^-1 a_i b_i.
inline Word random_vm_relator(const VmAlphabet& alpha, std::mt19937& rng) {
  const int m = alpha.m();
  const int i = uniform(rng, 1, m - 1);
  switch (uniform(rng, 0, 2)) {
    case 0:
      return snowflake::commutator(Word::power(alpha.a(i), 1), Word::power(alpha.b(i), 1));
    case 1: {
      Word tail;
      for (int t = i + 1; t <= m; ++t) tail.push(alpha.a(t), 1);
      return snowflake::commutator(Word::power(alpha.a(i), 1), tail);
    }
    default:
      return Word({{alpha.b(i - 1), -1}, {alpha.a(i), 1}, {alpha.b(i), 1}});
  }
}

struct VmSample {
  Word word;
  int x = 0;
  std::int64_t power = 0;
};

// A word equal to x^N built from one of the standard spellings of x^N
// (for c: c^N, a_1^N...a_m^N, its reverse, (a_1...a_m)^N, a_1^N b_1^N) with
// relator conjugates spliced in at random syllable boundaries.
inline VmSample random_power_word(const VmAlphabet& alpha, std::mt19937& rng, std::int64_t max_length) {
  const int m = alpha.m();
  for (;;) {
    VmSample s;
    const bool use_c = uniform(rng, 0, 1) == 0;
    s.x = use_c ? alpha.c() : uniform(rng, 0, alpha.letters() - 1);
    s.power = uniform(rng, -4, 4);
    Word w;
    if (s.x == alpha.c()) {
      switch (uniform(rng, 0, 4)) {
        case 0: w = Word::power(s.x, s.power); break;
        case 1: for (int i = 1; i <= m; ++i) w.push(alpha.a(i), s.power); break;
        case 2: for (int i = m; i >= 1; --i) w.push(alpha.a(i), s.power); break;
        case 3: {
          Word c;
          for (int i = 1; i <= m; ++i) c.push(alpha.a(i), 1);
          w = c.pow(s.power);
          break;
        }
        default:
          w.push(alpha.a(1), s.power);
          if (m > 1) w.push(alpha.b(1), s.power);
          break;
      }
    } else if (s.x >= m + 1 && uniform(rng, 0, 1)) {
      for (int i = s.x - m + 1; i <= m; ++i) w.push(alpha.a(i), s.power);  // b_j = a_{j+1}...a_m
    } else {
      w = Word::power(s.x, s.power);
    }
    if (m > 1) {
      for (int k = uniform(rng, 0, 3); k > 0; --k) {
        Word h = random_vm_word(alpha, rng, uniform(rng, 0, 2), 2);
        Word rel = random_vm_relator(alpha, rng);
        if (uniform(rng, 0, 1)) rel = rel.inverse();
        const std::size_t at = uniform(rng, 0, static_cast<int>(w.size()));
        Word next(std::vector<snowflake::Syllable>(w.syllables().begin(), w.syllables().begin() + at));
        next.append(h * rel * h.inverse());
        next.append(Word(std::vector<snowflake::Syllable>(w.syllables().begin() + at, w.syllables().end())));
        w = next;
      }
    }
    s.word = w;
    if (w.length() <= max_length) return s;
  }
}

}  // namespace gen
