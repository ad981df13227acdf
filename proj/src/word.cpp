#include "snowflake/word.hpp"

#include <cstdlib>

#include "snowflake/numeric.hpp"

namespace snowflake {

Word::Word(std::initializer_list<Syllable> syllables) {
  for (const auto& s : syllables) push(s);
}

Word::Word(const std::vector<Syllable>& syllables) {
  for (const auto& s : syllables) push(s);
}

Word Word::power(int gen, std::int64_t exp) {
  Word w;
  w.push(gen, exp);
  return w;
}

Word& Word::push(int gen, std::int64_t exp) {
  if (exp == 0) return *this;
  if (!syl_.empty() && syl_.back().gen == gen) {
    syl_.back().exp = checked_add(syl_.back().exp, exp);
    if (syl_.back().exp == 0) syl_.pop_back();
  } else {
    syl_.push_back({gen, exp});
  }
  return *this;
}

Word& Word::append(const Word& other) {
  for (const auto& s : other.syl_) push(s);
  return *this;
}

Word Word::inverse() const {
  Word w;
  for (auto it = syl_.rbegin(); it != syl_.rend(); ++it) w.syl_.push_back({it->gen, -it->exp});
  return w;
}

Word Word::pow(std::int64_t k) const {
  Word base = k < 0 ? inverse() : *this;
  Word out;
  for (std::int64_t i = 0; i < std::llabs(k); ++i) out.append(base);
  return out;
}

std::int64_t Word::length() const {
  std::int64_t n = 0;
  for (const auto& s : syl_) n = checked_add(n, std::llabs(s.exp));
  return n;
}

std::vector<std::int64_t> Word::exponent_sums(int gens) const {
  std::vector<std::int64_t> out(static_cast<std::size_t>(gens), 0);
  for (const auto& s : syl_) {
    if (s.gen >= 0 && s.gen < gens) out[s.gen] = checked_add(out[s.gen], s.exp);
  }
  return out;
}

Word operator*(Word a, const Word& b) {
  a.append(b);
  return a;
}

Word commutator(const Word& x, const Word& y) {
  Word w = x;
  w.append(y).append(x.inverse()).append(y.inverse());
  return w;
}

}  // namespace snowflake
