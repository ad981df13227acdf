#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "snowflake/numeric.hpp"
#include "snowflake/word.hpp"

namespace snowflake {

struct Vec2 {
  std::int64_t x = 0;
  std::int64_t y = 0;
  bool zero() const { return x == 0 && y == 0; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

// Letters of V_m. Ids: a_i -> i - 1 for 1 <= i <= m, b_j -> m + j for
// 0 <= j < m. c is b_0 and a_m is the same element as b_{m-1}.
//
// V_m splits as a chain of planes Z^2_1 .. Z^2_{m-1}; plane t (0-based)
// has basis (a_{t+1}, b_{t+1}) and contains b_t as the diagonal.
class VmAlphabet {
 public:
  explicit VmAlphabet(int m);

  int m() const { return m_; }
  int planes() const { return m_ - 1; }
  int letters() const { return 2 * m_; }
  int a(int i) const;
  int b(int j) const;
  int c() const { return b(0); }

  std::string name(int id) const;
  int parse_letter(std::string_view token) const;
  // Whitespace separated syllables such as "a1^3 b2^-1 c^2".
  Word parse_word(std::string_view text) const;
  std::string format(const Word& w) const;
  void check(const Word& w) const;

  // Inclusive range of planes containing the letter. Empty (1, 0) when m = 1.
  std::pair<int, int> plane_range(int id) const;
  // Coordinates of the letter in one of its planes.
  Vec2 in_plane(int id, int plane) const;

  // Image in Z^m with basis a_1..a_m.
  std::vector<std::int64_t> abelianize(const Word& w) const;
  // Rewrites every b_j, j >= 1, as a_{j+1}...a_m and every c as a_1...a_m.
  Word expand_aliases(const Word& w) const;

 private:
  int m_;
};

// Reduced form along the chain of planes: the path of planes visited, the
// coset representative (a power of a_{t+1}) of every syllable but the last,
// and the final element of plane 0.
struct VmNormalForm {
  std::vector<int> path;
  std::vector<std::int64_t> reps;
  Vec2 last;
  bool is_identity() const { return path.size() <= 1 && last.zero(); }
  friend bool operator==(const VmNormalForm&, const VmNormalForm&) = default;
};

VmNormalForm normal_form(const VmAlphabet& alpha, const Word& w);
bool is_identity(const VmAlphabet& alpha, const Word& w);
bool equals(const VmAlphabet& alpha, const Word& u, const Word& v);

struct ShuffleResult {
  Word word;                       // a_1^{n_1} ... a_m^{n_m} c^{n_c}
  std::vector<std::int64_t> n;     // exponent sums of a_1..a_m
  std::int64_t n_c = 0;
  std::int64_t power = 0;          // w = c^power
};

// Throws NotACPower unless w equals a power of c.
ShuffleResult shuffle(const VmAlphabet& alpha, const Word& w);

struct FillStep {
  std::string kind;  // "excursion" or "base"
  int plane = 0;
  int edge_letter = -1;
  std::int64_t exponent = 0;
  std::int64_t run_length = 0;
  std::int64_t cost = 0;
};

struct FillingReceipt {
  Word word;
  int x = 0;
  std::int64_t power = 0;
  BigInt steps = 0;
  BigInt bound = 0;  // 3 * sum over syllable pairs |w_i||w_j|
  bool within_bound = false;
  bool power_within_length = false;
  std::vector<FillStep> log;
};

// Constructive van Kampen filling of w = x^N. Throws NotEqual if w != x^N.
FillingReceipt fill(const VmAlphabet& alpha, const Word& w, int x, std::int64_t power);

// Area of the canonical disk for c^N: (m - 1) N^2.
BigInt disk_area(int m, std::int64_t power);

}  // namespace snowflake
