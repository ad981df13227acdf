#include "snowflake/vm.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "snowflake/error.hpp"

namespace snowflake {

VmAlphabet::VmAlphabet(int m) : m_(m) {
  if (m <= 0) throw Error(Errc::InvalidArity, "m must be positive; got " + std::to_string(m));
}

int VmAlphabet::a(int i) const {
  if (i < 1 || i > m_) {
    throw Error(Errc::UnknownGenerator, "a_" + std::to_string(i) + " is not a letter of V_" + std::to_string(m_));
  }
  return i - 1;
}

int VmAlphabet::b(int j) const {
  if (j < 0 || j >= m_) {
    throw Error(Errc::UnknownGenerator, "b_" + std::to_string(j) + " is not a letter of V_" + std::to_string(m_));
  }
  return m_ + j;
}

std::string VmAlphabet::name(int id) const {
  if (id == c()) return "c";
  if (id < m_) return "a" + std::to_string(id + 1);
  return "b" + std::to_string(id - m_);
}

int VmAlphabet::parse_letter(std::string_view token) const {
  if (token == "c") return c();
  if (token.size() < 2 || (token[0] != 'a' && token[0] != 'b')) {
    throw Error(Errc::UnknownGenerator, "unknown letter '" + std::string(token) + "'");
  }
  std::string_view digits = token.substr(1);
  if (!digits.empty() && digits.front() == '_') digits.remove_prefix(1);
  int index = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
    throw Error(Errc::UnknownGenerator, "unknown letter '" + std::string(token) + "'");
  }
  return token[0] == 'a' ? a(index) : b(index);
}

Word VmAlphabet::parse_word(std::string_view text) const {
  Word w;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
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
    w.push(parse_letter(std::string_view(tok).substr(0, caret)), exp);
  }
  return w;
}

std::string VmAlphabet::format(const Word& w) const {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += name(w[i].gen);
    if (w[i].exp != 1) out += "^" + std::to_string(w[i].exp);
  }
  return out;
}

void VmAlphabet::check(const Word& w) const {
  for (const auto& s : w.syllables()) {
    if (s.gen < 0 || s.gen >= letters()) {
      throw Error(Errc::UnknownGenerator, "letter id " + std::to_string(s.gen) + " is outside V_" + std::to_string(m_));
    }
  }
}

std::pair<int, int> VmAlphabet::plane_range(int id) const {
  if (m_ == 1) return {1, 0};
  const int last = m_ - 2;
  if (id < m_ - 1) return {id, id};
  if (id == m_ - 1) return {last, last};
  int j = id - m_;
  if (j == 0) return {0, 0};
  if (j == m_ - 1) return {last, last};
  return {j - 1, j};
}

Vec2 VmAlphabet::in_plane(int id, int plane) const {
  if (id < m_ - 1) return {1, 0};
  if (id == m_ - 1) return {0, 1};
  int j = id - m_;
  if (j == plane + 1) return {0, 1};
  return {1, 1};  // b_plane is the diagonal a_{t+1} b_{t+1}
}

std::vector<std::int64_t> VmAlphabet::abelianize(const Word& w) const {
  check(w);
  std::vector<std::int64_t> out(m_, 0);
  for (const auto& s : w.syllables()) {
    if (s.gen < m_) {
      out[s.gen] = checked_add(out[s.gen], s.exp);
    } else {
      for (int i = s.gen - m_; i < m_; ++i) out[i] = checked_add(out[i], s.exp);
    }
  }
  return out;
}

Word VmAlphabet::expand_aliases(const Word& w) const {
  check(w);
  Word out;
  for (const auto& s : w.syllables()) {
    if (s.gen < m_) {
      out.push(s);
      continue;
    }
    Word tail;
    for (int i = s.gen - m_; i < m_; ++i) tail.push(i, 1);
    out.append(tail.pow(s.exp));
  }
  return out;
}

namespace {

struct Piece {
  int plane;
  Vec2 g;
};

// Image of g across the edge from plane `from` to the adjacent plane `to`,
// if g lies in the edge subgroup.
bool cross_edge(const Vec2& g, int from, int to, Vec2& image) {
  if (to == from + 1) {
    if (g.x != 0) return false;
    image = {g.y, g.y};
    return true;
  }
  if (g.x != g.y) return false;
  image = {0, g.x};
  return true;
}

void add_into(Vec2& acc, const Vec2& g, std::int64_t k) {
  acc.x = checked_add(acc.x, checked_mul(g.x, k));
  acc.y = checked_add(acc.y, checked_mul(g.y, k));
}

class ChainReducer {
 public:
  ChainReducer() { stack_.push_back({0, {}}); }

  void push(int plane, const Vec2& g, std::int64_t k) {
    while (stack_.back().plane != plane) step(stack_.back().plane < plane ? stack_.back().plane + 1
                                                                          : stack_.back().plane - 1);
    add_into(stack_.back().g, g, k);
  }

  std::vector<Piece> finish() {
    while (stack_.back().plane != 0) step(stack_.back().plane - 1);
    return stack_;
  }

 private:
  void step(int next) {
    Piece& top = stack_.back();
    Vec2 image;
    if (stack_.size() >= 2 && stack_[stack_.size() - 2].plane == next && cross_edge(top.g, top.plane, next, image)) {
      stack_.pop_back();
      add_into(stack_.back().g, image, 1);
    } else {
      stack_.push_back({next, {}});
    }
  }

  std::vector<Piece> stack_;
};

std::vector<Piece> reduce(const VmAlphabet& alpha, const Word& w) {
  ChainReducer red;
  for (const auto& s : w.syllables()) {
    auto [lo, hi] = alpha.plane_range(s.gen);
    (void)hi;
    red.push(lo, alpha.in_plane(s.gen, lo), s.exp);
  }
  return red.finish();
}

}  // namespace

VmNormalForm normal_form(const VmAlphabet& alpha, const Word& w) {
  alpha.check(w);
  VmNormalForm nf;
  if (alpha.m() == 1) {
    std::int64_t total = 0;
    for (const auto& s : w.syllables()) total = checked_add(total, s.exp);
    nf.last = {total, 0};
    return nf;
  }
  std::vector<Piece> pieces = reduce(alpha, w);
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    const int t = pieces[i].plane;
    const int next = pieces[i + 1].plane;
    const Vec2 g = pieces[i].g;
    Vec2 carry;
    std::int64_t rep = 0;
    if (next == t + 1) {
      rep = g.x;
      carry = {g.y, g.y};
    } else {
      rep = checked_add(g.x, -g.y);
      carry = {0, g.y};
    }
    add_into(pieces[i + 1].g, carry, 1);
    nf.path.push_back(t);
    nf.reps.push_back(rep);
  }
  nf.path.push_back(pieces.back().plane);
  nf.last = pieces.back().g;
  return nf;
}

bool is_identity(const VmAlphabet& alpha, const Word& w) {
  alpha.check(w);
  if (alpha.m() == 1) return normal_form(alpha, w).last.zero();
  auto pieces = reduce(alpha, w);
  return pieces.size() == 1 && pieces.front().g.zero();
}

bool equals(const VmAlphabet& alpha, const Word& u, const Word& v) {
  return is_identity(alpha, u * v.inverse());
}

ShuffleResult shuffle(const VmAlphabet& alpha, const Word& w) {
  alpha.check(w);
  const int m = alpha.m();
  ShuffleResult out;
  out.n.assign(m, 0);
  // b_j for j >= 1 is expanded; c stays a letter.
  for (const auto& s : w.syllables()) {
    if (s.gen == alpha.c()) {
      out.n_c = checked_add(out.n_c, s.exp);
    } else if (s.gen < m) {
      out.n[s.gen] = checked_add(out.n[s.gen], s.exp);
    } else {
      for (int i = s.gen - m; i < m; ++i) out.n[i] = checked_add(out.n[i], s.exp);
    }
  }
  for (int i = 1; i < m; ++i) {
    if (out.n[i] != out.n[0]) {
      throw Error(Errc::NotACPower, "word is not a power of c: exponent sums of a_1 and a_" +
                                        std::to_string(i + 1) + " differ (" + std::to_string(out.n[0]) +
                                        " vs " + std::to_string(out.n[i]) + ")");
    }
  }
  out.power = checked_add(out.n[0], out.n_c);
  if (!is_identity(alpha, w * Word::power(alpha.c(), -out.power))) {
    throw Error(Errc::NotACPower, "word is not a power of c although its exponent sums agree");
  }
  for (int i = 0; i < m; ++i) out.word.push(i, out.n[i]);
  out.word.push(alpha.c(), out.n_c);
  return out;
}

BigInt disk_area(int m, std::int64_t power) {
  if (m <= 0) throw Error(Errc::InvalidArity, "m must be positive; got " + std::to_string(m));
  BigInt n(power);
  return BigInt(m - 1) * n * n;
}

namespace {

enum Direction { kA = 0, kB = 1, kD = 2 };

Direction direction_in(const VmAlphabet& alpha, int id, int plane) {
  Vec2 v = alpha.in_plane(id, plane);
  if (v.x == 1 && v.y == 0) return kA;
  if (v.x == 0 && v.y == 1) return kB;
  return kD;
}

BigInt abs_big(std::int64_t v) { return BigInt(v < 0 ? -v : v); }

// Fills a word living in one plane against target^power: bubble the
// syllables into the order (y, z, x), then collapse y^k z^k into x^k.
std::int64_t fill_in_plane(const VmAlphabet& alpha, const std::vector<Syllable>& run, int plane, int target) {
  const Direction x = direction_in(alpha, target, plane);
  // order[dir] = position in the sorted word
  int order[3];
  if (x == kD) {
    order[kA] = 0; order[kB] = 1; order[kD] = 2;
  } else if (x == kA) {
    order[kD] = 0; order[kB] = 1; order[kA] = 2;
  } else {
    order[kA] = 0; order[kD] = 1; order[kB] = 2;
  }
  BigInt cost = 0;
  std::int64_t total[3] = {0, 0, 0};
  for (std::size_t i = 0; i < run.size(); ++i) {
    const Direction di = direction_in(alpha, run[i].gen, plane);
    total[di] = checked_add(total[di], run[i].exp);
    for (std::size_t j = i + 1; j < run.size(); ++j) {
      const Direction dj = direction_in(alpha, run[j].gen, plane);
      if (order[di] > order[dj]) cost += 2 * abs_big(run[i].exp) * abs_big(run[j].exp);
    }
  }
  // The collapsed pair y^k z^(+-k) costs k^2 cells.
  std::int64_t k = 0;
  if (x == kD) k = total[kA];
  else if (x == kA) k = total[kD];
  else k = total[kD];
  cost += abs_big(k) * abs_big(k);
  if (cost > BigInt(std::numeric_limits<std::int64_t>::max())) {
    throw Error(Errc::Overflow, "filling cost exceeds 64 bits");
  }
  return cost.convert_to<std::int64_t>();
}

std::int64_t letters_in(const std::vector<Syllable>& w) {
  std::int64_t n = 0;
  for (const auto& s : w) n = checked_add(n, std::llabs(s.exp));
  return n;
}

void push_merged(std::vector<Syllable>& out, const Syllable& s) {
  if (s.exp == 0) return;
  if (!out.empty() && out.back().gen == s.gen) {
    out.back().exp = checked_add(out.back().exp, s.exp);
    if (out.back().exp == 0) out.pop_back();
  } else {
    out.push_back(s);
  }
}

// The reduction of ChainReducer with the syllables of every piece kept, so
// each collapse across an edge can be charged for the cells it uses.
class FillReducer {
 public:
  FillReducer(const VmAlphabet& alpha, int start, FillingReceipt& rec) : alpha_(alpha), rec_(rec) {
    stack_.push_back({start, {}, {}});
  }

  void push(const Syllable& s) {
    const int plane = alpha_.plane_range(s.gen).first;
    walk_to(plane);
    add_into(stack_.back().g, alpha_.in_plane(s.gen, plane), s.exp);
    push_merged(stack_.back().run, s);
  }

  const std::vector<Syllable>& finish(int plane) {
    walk_to(plane);
    if (stack_.size() != 1) throw Error(Errc::Internal, "filling left an unreduced path of planes");
    return stack_.back().run;
  }

 private:
  struct Piece {
    int plane;
    Vec2 g;
    std::vector<Syllable> run;
  };

  void walk_to(int plane) {
    while (stack_.back().plane != plane) step(stack_.back().plane < plane ? stack_.back().plane + 1
                                                                          : stack_.back().plane - 1);
  }

  void step(int next) {
    Piece& top = stack_.back();
    Vec2 image;
    if (stack_.size() >= 2 && stack_[stack_.size() - 2].plane == next && cross_edge(top.g, top.plane, next, image)) {
      const int edge = next > top.plane ? alpha_.b(top.plane + 1) : alpha_.b(top.plane);
      const std::int64_t k = next > top.plane ? top.g.y : top.g.x;
      const std::int64_t cost = fill_in_plane(alpha_, top.run, top.plane, edge);
      rec_.steps += cost;
      rec_.log.push_back({"excursion", top.plane, edge, k, letters_in(top.run), cost});
      stack_.pop_back();
      add_into(stack_.back().g, image, 1);
      push_merged(stack_.back().run, {edge, k});
    } else {
      stack_.push_back({next, {}, {}});
    }
  }

  const VmAlphabet& alpha_;
  FillingReceipt& rec_;
  std::vector<Piece> stack_;
};

}  // namespace

FillingReceipt fill(const VmAlphabet& alpha, const Word& w, int x, std::int64_t power) {
  alpha.check(w);
  alpha.check(Word::power(x, 1));
  const Word target = Word::power(x, power);
  if (!equals(alpha, w, target)) {
    throw Error(Errc::NotEqual, "word is not equal to " + alpha.format(target));
  }
  FillingReceipt rec;
  rec.word = w;
  rec.x = x;
  rec.power = power;
  BigInt pair_sum = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = i + 1; j < w.size(); ++j) pair_sum += abs_big(w[i].exp) * abs_big(w[j].exp);
  }
  rec.bound = 3 * pair_sum;
  rec.power_within_length = std::llabs(power) <= w.length();
  rec.steps = 0;

  if (alpha.m() > 1) {
    const int base = alpha.plane_range(x).first;
    FillReducer red(alpha, base, rec);
    for (const auto& s : w.syllables()) red.push(s);
    const auto& run = red.finish(base);
    const std::int64_t cost = fill_in_plane(alpha, run, base, x);
    rec.steps += cost;
    rec.log.push_back({"base", base, x, power, letters_in(run), cost});
  }
  rec.within_bound = rec.steps <= rec.bound;
  return rec;
}

}  // namespace snowflake
