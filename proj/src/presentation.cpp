#include "snowflake/presentation.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

#include <json.hpp>

#include "snowflake/error.hpp"

namespace snowflake {

MarkedGraph::MarkedGraph(const IntMatrix& p) : p_(p) {
  validate_matrix(p);
  if ((p.array() == 0).all()) throw Error(Errc::ZeroMatrix, "matrix must be non-zero");
  if (!is_irreducible(p)) {
    throw Error(Errc::NotIrreducible, "matrix must be irreducible; its digraph is not strongly connected");
  }
  const int n = static_cast<int>(p.rows());
  out_.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (std::int64_t t = 0; t < p(i, j); ++t) {
        local_.push_back(static_cast<int>(out_[i].size()));
        out_[i].push_back(static_cast<int>(edges_.size()));
        edges_.push_back({i, j});
      }
    }
  }
  std::vector<bool> seen(n, false);
  std::deque<int> queue{0};
  seen[0] = true;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int e = 0; e < edge_count(); ++e) {
      const Edge& ed = edges_[e];
      int other = -1;
      if (ed.source == v) other = ed.target;
      else if (ed.target == v) other = ed.source;
      if (other < 0 || seen[other]) continue;
      seen[other] = true;
      tree_.push_back(e);
      queue.push_back(other);
    }
  }
  std::sort(tree_.begin(), tree_.end());
}

int MarkedGraph::max_row_sum() const {
  int m = 0;
  for (const auto& o : out_) m = std::max(m, static_cast<int>(o.size()));
  return m;
}

Word diagonal_word(const MarkedGraph& g, int v) {
  Word w;
  for (int i : g.out_edges(v)) w.push(i, 1);
  return w;
}

int Presentation::generator(std::string_view name) const {
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (generators[i] == name) return static_cast<int>(i);
  }
  throw Error(Errc::UnknownGenerator, "unknown generator '" + std::string(name) + "'");
}

namespace {

// Commutators [x_t, x_{t+1} ... x_m] over a list of generator ids.
void push_vm_relators(const std::vector<int>& ids, std::vector<Word>& out) {
  for (std::size_t t = 0; t + 1 < ids.size(); ++t) {
    Word tail;
    for (std::size_t u = t + 1; u < ids.size(); ++u) tail.push(ids[u], 1);
    out.push_back(commutator(Word::power(ids[t], 1), tail));
  }
}

}  // namespace

Presentation vm_presentation(int m) {
  if (m <= 0) throw Error(Errc::InvalidArity, "m must be positive; got " + std::to_string(m));
  Presentation pres;
  pres.family = Family::Vm;
  std::vector<int> ids;
  for (int i = 0; i < m; ++i) {
    pres.generators.push_back("a_" + std::to_string(i + 1));
    pres.scaled.push_back(true);
    ids.push_back(i);
  }
  push_vm_relators(ids, pres.relators);
  return pres;
}

Presentation snowflake_presentation(const IntMatrix& p, const Slope& r, bool kill_tree) {
  exponents(p, r);  // validates irreducibility, lambda > 1 and the row-sum bound
  MarkedGraph g(p);
  const int n = g.edge_count();
  Presentation pres;
  pres.family = Family::Snowflake;
  pres.r = r;
  for (int i = 0; i < n; ++i) {
    pres.generators.push_back("a_" + std::to_string(i + 1));
    pres.scaled.push_back(true);
  }
  for (int i = 0; i < n; ++i) {
    pres.generators.push_back("s_" + std::to_string(i + 1));
    pres.scaled.push_back(false);
  }
  for (int v = 0; v < g.vertices(); ++v) push_vm_relators(g.out_edges(v), pres.relators);
  for (int i = 0; i < n; ++i) {
    Word rel;
    rel.push(n + i, -1).push(i, r.p).push(n + i, 1);
    rel.append(diagonal_word(g, g.edge(i).target).pow(-r.q));
    pres.relators.push_back(rel);
  }
  if (kill_tree) {
    for (int e : g.tree_edges()) pres.relators.push_back(Word::power(n + e, 1));
  }
  return pres;
}

Presentation z2_presentation(const Slope& r) {
  Presentation pres;
  pres.family = Family::Z2;
  pres.r = r;
  pres.generators = {"a_1", "a_2"};
  pres.scaled = {true, true};
  pres.relators.push_back(commutator(Word::power(0, 1), Word::power(1, 1)));
  return pres;
}

Presentation suspend(const Presentation& base, int k) {
  if (k < 0) throw Error(Errc::DomainError, "suspension depth must be non-negative; got " + std::to_string(k));
  if (k == 0) return base;
  if (base.family != Family::Snowflake && base.family != Family::Z2 && base.family != Family::Suspension) {
    throw Error(Errc::DomainError, "suspension needs a snowflake, Z^2 or suspended base");
  }
  if (!base.r.is_integer()) {
    throw Error(Errc::RationalRNotAllowed, "suspension requires integer r; got " + base.r.str());
  }
  Presentation pres = base;
  pres.family = Family::Suspension;
  for (int level = 0; level < k; ++level) {
    const int previous = static_cast<int>(pres.generators.size());
    const int depth = pres.suspension_depth + 1;
    const int u = previous;
    const int v = previous + 1;
    pres.generators.push_back("u_" + std::to_string(depth));
    pres.generators.push_back("v_" + std::to_string(depth));
    pres.scaled.push_back(false);
    pres.scaled.push_back(false);
    for (int stable : {u, v}) {
      for (int g = 0; g < previous; ++g) {
        Word rel;
        std::int64_t image = pres.scaled[g] ? pres.r.p : 1;
        rel.push(stable, 1).push(g, 1).push(stable, -1).push(g, -image);
        pres.relators.push_back(rel);
      }
    }
    pres.suspension_depth = depth;
  }
  return pres;
}

Presentation product_with_z(const Presentation& base, int ell) {
  if (ell < 0) throw Error(Errc::DomainError, "product rank must be non-negative; got " + std::to_string(ell));
  if (ell == 0) return base;
  Presentation pres = base;
  pres.family = Family::Product;
  int existing_z = 0;
  for (const auto& name : base.generators) existing_z += name.rfind("z_", 0) == 0 ? 1 : 0;
  for (int t = 0; t < ell; ++t) {
    const int z = static_cast<int>(pres.generators.size());
    pres.generators.push_back("z_" + std::to_string(existing_z + t + 1));
    pres.scaled.push_back(false);
    // z_t commutes with the base and with every earlier z.
    for (int g = 0; g < z; ++g) {
      pres.relators.push_back(commutator(Word::power(z, 1), Word::power(g, 1)));
    }
  }
  return pres;
}

Format parse_format(std::string_view name) {
  if (name == "plain") return Format::Plain;
  if (name == "json") return Format::Json;
  if (name == "calg") return Format::Calg;
  throw Error(Errc::DomainError, "format must be plain, json or calg; got " + std::string(name));
}

std::string format_word(const Word& w, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += names.at(w[i].gen);
    if (w[i].exp != 1) out += "^" + std::to_string(w[i].exp);
  }
  return out;
}

namespace {

std::string calg_word(const Word& w, const std::vector<std::string>& names) {
  if (w.empty()) return "One(F)";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += '*';
    out += names.at(w[i].gen);
    if (w[i].exp != 1) out += "^" + std::to_string(w[i].exp);
  }
  return out;
}

}  // namespace

std::string emit(const Presentation& pres, Format format) {
  const auto& names = pres.generators;
  switch (format) {
    case Format::Plain: {
      std::string out = "< ";
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ", ";
        out += names[i];
      }
      out += names.empty() ? "|" : " |";
      for (std::size_t i = 0; i < pres.relators.size(); ++i) {
        out += i ? ",\n    " : "\n    ";
        out += format_word(pres.relators[i], names);
      }
      out += pres.relators.empty() ? " >\n" : "\n>\n";
      return out;
    }
    case Format::Json: {
      nlohmann::ordered_json j;
      j["generators"] = names;
      j["relators"] = nlohmann::ordered_json::array();
      for (const auto& rel : pres.relators) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& s : rel.syllables()) arr.push_back({names.at(s.gen), s.exp});
        j["relators"].push_back(arr);
      }
      return j.dump() + "\n";
    }
    case Format::Calg: {
      std::string out = "F := FreeGroup(";
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ", ";
        out += "\"" + names[i] + "\"";
      }
      out += ");\n";
      for (std::size_t i = 0; i < names.size(); ++i) {
        out += names[i] + " := F.";
        out += std::to_string(i + 1) + ";\n";
      }
      out += "rels := [";
      for (std::size_t i = 0; i < pres.relators.size(); ++i) {
        out += i ? ",\n  " : "\n  ";
        out += calg_word(pres.relators[i], names);
      }
      out += pres.relators.empty() ? "];\n" : "\n];\n";
      out += "G := F / rels;\n";
      return out;
    }
  }
  return {};
}

namespace {

Word parse_plain_word(std::string_view text, const std::map<std::string, int>& ids) {
  Word w;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) {
    auto caret = tok.find('^');
    std::string name = tok.substr(0, caret);
    std::int64_t exp = 1;
    if (caret != std::string::npos) {
      try {
        exp = std::stoll(tok.substr(caret + 1));
      } catch (const std::exception&) {
        throw Error(Errc::IllFormed, "bad exponent in '" + tok + "'");
      }
    }
    auto it = ids.find(name);
    if (it == ids.end()) throw Error(Errc::UnknownGenerator, "unknown generator '" + name + "'");
    w.push(it->second, exp);
  }
  return w;
}

}  // namespace

Presentation parse_presentation(std::string_view text, Format format) {
  Presentation pres;
  std::map<std::string, int> ids;
  auto add_generator = [&](const std::string& name) {
    if (ids.count(name)) throw Error(Errc::IllFormed, "duplicate generator '" + name + "'");
    ids[name] = static_cast<int>(pres.generators.size());
    pres.generators.push_back(name);
    pres.scaled.push_back(name.rfind("a_", 0) == 0);
  };
  if (format == Format::Json) {
    try {
      auto j = nlohmann::json::parse(text);
      for (const auto& g : j.at("generators")) add_generator(g.get<std::string>());
      for (const auto& rel : j.at("relators")) {
        Word w;
        for (const auto& s : rel) {
          auto name = s.at(0).get<std::string>();
          auto it = ids.find(name);
          if (it == ids.end()) throw Error(Errc::UnknownGenerator, "unknown generator '" + name + "'");
          w.push(it->second, s.at(1).get<std::int64_t>());
        }
        pres.relators.push_back(w);
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::IllFormed, std::string("malformed presentation JSON: ") + e.what());
    }
    return pres;
  }
  if (format != Format::Plain) throw Error(Errc::DomainError, "only plain and json presentations can be parsed");
  auto open = text.find('<');
  auto bar = text.find('|');
  auto close = text.rfind('>');
  if (open == std::string_view::npos || bar == std::string_view::npos || close == std::string_view::npos ||
      !(open < bar && bar < close)) {
    throw Error(Errc::IllFormed, "presentation must look like < gens | relators >");
  }
  std::string gens(text.substr(open + 1, bar - open - 1));
  std::istringstream gin(gens);
  std::string name;
  while (std::getline(gin, name, ',')) {
    auto b = name.find_first_not_of(" \t\n");
    if (b == std::string::npos) continue;
    auto e = name.find_last_not_of(" \t\n");
    add_generator(name.substr(b, e - b + 1));
  }
  std::string rels(text.substr(bar + 1, close - bar - 1));
  std::istringstream rin(rels);
  std::string rel;
  while (std::getline(rin, rel, ',')) {
    if (rel.find_first_not_of(" \t\n") == std::string::npos) continue;
    pres.relators.push_back(parse_plain_word(rel, ids));
  }
  return pres;
}

}  // namespace snowflake
