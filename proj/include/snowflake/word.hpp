#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace snowflake {

struct Syllable {
  int gen = 0;
  std::int64_t exp = 0;
  friend bool operator==(const Syllable&, const Syllable&) = default;
};

// Freely reduced word in syllable form: no zero exponents and adjacent
// syllables carry distinct generators.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Syllable> syllables);
  explicit Word(const std::vector<Syllable>& syllables);

  static Word power(int gen, std::int64_t exp);

  // Appends with cancellation against the tail.
  Word& push(int gen, std::int64_t exp);
  Word& push(const Syllable& s) { return push(s.gen, s.exp); }
  Word& append(const Word& other);

  Word inverse() const;
  Word pow(std::int64_t k) const;

  const std::vector<Syllable>& syllables() const { return syl_; }
  std::size_t size() const { return syl_.size(); }
  bool empty() const { return syl_.empty(); }
  const Syllable& operator[](std::size_t i) const { return syl_[i]; }

  // Letter length: sum of absolute exponents.
  std::int64_t length() const;

  // Exponent sum of each generator id below `gens`.
  std::vector<std::int64_t> exponent_sums(int gens) const;

  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::vector<Syllable> syl_;
};

Word operator*(Word a, const Word& b);

// [x, y] = x y x^-1 y^-1
Word commutator(const Word& x, const Word& y);

}  // namespace snowflake
