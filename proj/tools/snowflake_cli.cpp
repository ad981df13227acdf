// Command line front end. Exit codes: 0 success, 2 invalid input,
// 64 usage error, 74 I/O failure.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "snowflake/britton.hpp"
#include "snowflake/error.hpp"
#include "snowflake/geometry.hpp"
#include "snowflake/presentation.hpp"
#include "snowflake/render.hpp"
#include "snowflake/snowflake_words.hpp"
#include "snowflake/spectral.hpp"
#include "snowflake/vm.hpp"

namespace {

using namespace snowflake;
using json = nlohmann::ordered_json;

constexpr const char* kVersion = "1.0.0";
constexpr int kExitInvalid = 2;
constexpr int kExitUsage = 64;
constexpr int kExitIo = 74;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string matrix;
  std::string r;
  bool z2 = false;
  int vm = 0;
  int suspend = 0;
  int product = 0;
  bool kill_tree = false;
  std::string format;
  std::string out;
  std::string manifest;

  int m = 0;
  std::string word;
  std::string other;
  std::string action = "nf";
  std::string x = "c";
  std::string power;

  int vertex = 0;  // 1-based, 0 = default
  std::string sign = "+";
  std::string policy = "nearest";
  std::string rule = "threshold";
  std::string emit = "stats";
  std::string tree_format = "text";
  bool verify = false;

  std::string depths;
  int k = 3;
  std::string kind = "alpha";
  double tol = 0.1;
  double eigen_tol = 1e-12;
  int k_max = 16;

  std::string s;
  std::string alpha2;
  int ell = 0;

  int base = 0;
  bool killed = false;
  int depth = 6;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

IntMatrix load_matrix(const std::string& text) {
  if (text.empty()) throw UsageError("--matrix is required");
  std::error_code ec;
  if (std::filesystem::is_regular_file(text, ec)) return parse_matrix(read_file(text));
  return parse_matrix(text);
}

Slope load_r(const std::string& text) {
  if (text.empty()) throw UsageError("--r is required");
  return parse_slope(text);
}

std::pair<int, int> parse_range(const std::string& text, const std::string& what) {
  auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      int v = std::stoi(text);
      return {v, v};
    }
    int lo = std::stoi(text.substr(0, dots));
    int hi = std::stoi(text.substr(dots + 2));
    if (lo > hi) throw Error(Errc::DomainError, what + " range must satisfy A <= B; got " + text);
    return {lo, hi};
  } catch (const std::invalid_argument&) {
    throw Error(Errc::DomainError, what + " must look like A..B; got " + text);
  } catch (const std::out_of_range&) {
    throw Error(Errc::DomainError, what + " out of range: " + text);
  }
}

json big(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
    return v.convert_to<std::int64_t>();
  }
  return v.str();
}

json rational_json(const Rational& r) {
  return {{"num", big(boost::multiprecision::numerator(r))}, {"den", big(boost::multiprecision::denominator(r))}};
}

json exponent_json(const Exponent& e) {
  if (e.exact) return rational_json(*e.exact);
  return {{"value", e.approx.value}, {"radius", e.approx.radius}};
}

json cells_json(const CellCount& c) {
  json j = json::object();
  for (const auto& [d, n] : c.cells()) j[std::to_string(d)] = big(n);
  return j;
}

SnowflakeParams family(const Options& o) {
  SnowflakeParams p;
  p.z2 = o.z2;
  p.r = o.r.empty() && o.z2 ? Slope(2, 1) : load_r(o.r);
  if (!o.z2) p.matrix = load_matrix(o.matrix);
  p.policy = parse_policy(o.policy);
  p.rule = parse_rule(o.rule);
  return p;
}

std::int64_t parse_power(const std::string& text, const Slope& r) {
  if (text.empty()) throw UsageError("--N is required");
  if (text.rfind("rpow:", 0) == 0) {
    int d = 0;
    try {
      d = std::stoi(text.substr(5));
    } catch (const std::exception&) {
      throw Error(Errc::DomainError, "rpow needs an integer depth; got " + text);
    }
    if (d < 0) throw Error(Errc::NonPositiveIndex, "rpow depth must be non-negative; got " + text);
    BigInt n = rounded_power(r, d);
    if (n > std::numeric_limits<std::int64_t>::max()) throw Error(Errc::Overflow, "r^" + std::to_string(d) + " exceeds 64 bits");
    return n.convert_to<std::int64_t>();
  }
  try {
    std::size_t used = 0;
    long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw Error(Errc::DomainError, "N must be an integer or rpow:D; got " + text);
  }
}

int vertex_index(const Options& o, int fallback, int count) {
  if (o.vertex == 0) return fallback;
  if (o.vertex < 1 || o.vertex > count) {
    throw Error(Errc::DomainError, "vertex must be in 1.." + std::to_string(count) + "; got " + std::to_string(o.vertex));
  }
  return o.vertex - 1;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---- subcommands -------------------------------------------------------

std::string run_eigen(const Options& o) {
  json j;
  if (o.z2) {
    ExponentReport rep = z2_exponents();
    j["family"] = "Z2";
    j["alpha"] = exponent_json(rep.alpha);
    j["dehn_exponent"] = exponent_json(rep.dehn);
    return dump(j);
  }
  IntMatrix p = load_matrix(o.matrix);
  j["matrix"] = json::parse(format_matrix(p));
  j["irreducible"] = is_irreducible(p);
  Eigenvalue lambda = pf_eigenvalue(p, o.eigen_tol);
  if (lambda.exact) j["lambda"] = rational_json(Rational(*lambda.exact));
  else j["lambda"] = {{"value", lambda.value}, {"radius", lambda.radius}};
  GrowthConstants g = growth_constants(p, o.k_max);
  j["growth"] = {{"lower", g.lower}, {"upper", g.upper}, {"k_max", g.k_max}};
  if (!o.r.empty()) {
    Slope r = load_r(o.r);
    ExponentReport rep = exponents(p, r, o.eigen_tol);
    j["r"] = rational_json(r.exact());
    j["alpha"] = exponent_json(rep.alpha);
    j["dehn_exponent"] = exponent_json(rep.dehn);
  }
  return dump(j);
}

std::string run_present(const Options& o) {
  Presentation pres;
  if (o.vm > 0 || (o.vm == 0 && o.matrix.empty() && !o.z2 && o.m > 0)) {
    pres = vm_presentation(o.vm > 0 ? o.vm : o.m);
  } else if (o.z2) {
    pres = z2_presentation(o.r.empty() ? Slope(2, 1) : load_r(o.r));
  } else {
    pres = snowflake_presentation(load_matrix(o.matrix), load_r(o.r), o.kill_tree);
  }
  pres = product_with_z(suspend(pres, o.suspend), o.product);
  return emit(pres, parse_format(o.format.empty() ? "plain" : o.format));
}

json nf_json(const VmNormalForm& nf) {
  json path = json::array();
  for (int t : nf.path) path.push_back(t + 1);
  return {{"path", path}, {"reps", nf.reps}, {"last", {nf.last.x, nf.last.y}}};
}

std::string run_vm(const Options& o) {
  if (o.m <= 0) throw Error(Errc::InvalidArity, "m must be positive; got " + std::to_string(o.m));
  VmAlphabet alpha(o.m);
  Word w = alpha.parse_word(o.word);
  json j;
  j["m"] = o.m;
  j["word"] = alpha.format(w);
  if (o.action == "nf") {
    VmNormalForm nf = normal_form(alpha, w);
    j["normal_form"] = nf_json(nf);
    j["identity"] = nf.is_identity();
  } else if (o.action == "eq") {
    Word v = alpha.parse_word(o.other);
    j["other"] = alpha.format(v);
    j["equal"] = equals(alpha, w, v);
  } else if (o.action == "shuffle") {
    ShuffleResult s = shuffle(alpha, w);
    j["exponents"] = s.n;
    j["n_c"] = s.n_c;
    j["power"] = s.power;
    j["shuffled"] = alpha.format(s.word);
  } else if (o.action == "fill") {
    const int x = alpha.parse_letter(o.x);
    std::int64_t power = 0;
    if (!o.power.empty()) power = parse_power(o.power, Slope(2, 1));
    else if (x == alpha.c()) power = shuffle(alpha, w).power;
    else throw UsageError("--N is required unless x is c");
    FillingReceipt rec = fill(alpha, w, x, power);
    j["x"] = alpha.name(x);
    j["N"] = power;
    j["steps"] = big(rec.steps);
    j["bound"] = big(rec.bound);
    j["within_bound"] = rec.within_bound;
    j["power_within_length"] = rec.power_within_length;
    j["disk_area"] = big(disk_area(o.m, power));
    json log = json::array();
    for (const auto& step : rec.log) {
      log.push_back({{"kind", step.kind},
                     {"plane", step.plane + 1},
                     {"letter", alpha.name(step.edge_letter)},
                     {"exponent", step.exponent},
                     {"run_length", step.run_length},
                     {"cost", step.cost}});
    }
    j["log"] = log;
  } else {
    throw UsageError("--action must be nf, eq, shuffle or fill");
  }
  return dump(j);
}

std::string run_word(const Options& o) {
  SnowflakeParams params = family(o);
  SnowflakeBuilder builder(params);
  const int v = vertex_index(o, builder.default_vertex(), builder.graph().vertices());
  const std::int64_t power = parse_power(o.power, params.r);
  NodePtr node = builder.build(v, power, parse_sign(o.sign));
  std::string out;
  if (o.emit == "flat") {
    BrittonSolver solver(params.matrix, params.r);
    out = solver.format(flatten(builder.graph(), *node)) + "\n";
  } else if (o.emit == "tree") {
    out = o.tree_format == "json" ? tree_json(*node) : tree_text(*node);
  } else if (o.emit == "stats") {
    WordStats st = word_stats(*node);
    json j;
    j["vertex"] = v + 1;
    j["N"] = power;
    j["sign"] = o.sign == "-" ? "-" : "+";
    j["rule"] = rule_name(params.rule);
    j["policy"] = policy_name(params.policy);
    j["length"] = big(st.length);
    j["s_count"] = big(st.s_count);
    j["d_min"] = st.d_min;
    j["d_max"] = st.d_max;
    if (o.verify) {
      VerifyResult res = verify(builder, *node);
      j["verified"] = res.ok;
      j["britton_checked"] = res.britton_checked;
      if (!res.ok) j["diagnostic"] = res.diagnostic;
    }
    out = dump(j);
  } else {
    throw UsageError("--emit must be flat, tree or stats");
  }
  return out;
}

std::string csv_or_json(const Options& o, const std::vector<std::vector<std::string>>& rows, const json& j,
                        const std::string& header) {
  if (o.format == "json") return dump(j);
  if (!o.format.empty() && o.format != "csv") throw UsageError("--format must be csv or json");
  std::string out = header + "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
    out += "\n";
  }
  return out;
}

std::string run_disk(const Options& o) {
  SnowflakeParams params = family(o);
  DiskCalculator calc(params);
  const int vertices = params.z2 ? 1 : static_cast<int>(params.matrix.rows());
  const int v = vertex_index(o, calc.default_vertex(), vertices);
  std::vector<std::pair<int, std::int64_t>> points;
  if (!o.depths.empty()) {
    auto [lo, hi] = parse_range(o.depths, "depths");
    for (int d = lo; d <= hi; ++d) points.emplace_back(d, parse_power("rpow:" + std::to_string(d), params.r));
  } else {
    points.emplace_back(0, parse_power(o.power, params.r));
  }
  std::vector<std::vector<std::string>> rows;
  json arr = json::array();
  std::optional<CellCount> previous;
  for (const auto& [index, power] : points) {
    DiskStats st = calc.disk(v, power);
    std::string shell;
    json shell_j = nullptr;
    if (previous && params.r.is_integer()) {
      try {
        CellCount sh = st.area - phi_image(*previous, params.r);
        shell = sh.total().str();
        shell_j = cells_json(sh);
      } catch (const Error&) {
      }
    }
    previous = st.area;
    rows.push_back({std::to_string(index), std::to_string(power), st.perimeter.str(), st.area.total().str(), shell});
    arr.push_back({{"index", index},
                   {"N", power},
                   {"perimeter", big(st.perimeter)},
                   {"area", big(st.area.total())},
                   {"cells", cells_json(st.area)},
                   {"shell", shell_j},
                   {"d_min", st.d_min},
                   {"d_max", st.d_max}});
  }
  json j;
  j["vertex"] = v + 1;
  j["rule"] = rule_name(params.rule);
  j["disks"] = arr;
  return csv_or_json(o, rows, j, "index,N,perimeter,area,shell");
}

std::string run_ball(const Options& o) {
  SnowflakeParams params = family(o);
  BallCalculator calc(params, o.vertex > 0 ? o.vertex - 1 : -1);
  auto [lo, hi] = parse_range(o.depths.empty() ? "1..4" : o.depths, "j");
  std::vector<std::vector<std::string>> rows;
  json arr = json::array();
  for (int jj = lo; jj <= hi; ++jj) {
    BallLevel b = calc.ball(o.k, jj);
    rows.push_back({std::to_string(jj), b.boundary.total().str(), b.interior.total().str(), b.shell.total().str()});
    arr.push_back({{"index", jj},
                   {"boundary", cells_json(b.boundary)},
                   {"interior", cells_json(b.interior)},
                   {"shell", cells_json(b.shell)}});
  }
  json j;
  j["k"] = o.k;
  j["balls"] = arr;
  return csv_or_json(o, rows, j, "index,boundary,interior,shell");
}

json samples_json(const std::vector<std::pair<BigInt, BigInt>>& samples) {
  json arr = json::array();
  for (const auto& [a, b] : samples) arr.push_back({big(a), big(b)});
  return arr;
}

std::string run_fit(const Options& o) {
  SnowflakeParams params = family(o);
  auto [lo, hi] = parse_range(o.depths.empty() ? "2..8" : o.depths, "depths");
  json j;
  j["kind"] = o.kind;
  double slope = 0, target = 0, residual = 0;
  if (o.kind == "alpha") {
    ExponentFit f = fit_alpha(params, lo, hi, o.vertex > 0 ? o.vertex - 1 : -1);
    slope = f.slope;
    target = f.target;
    residual = f.residual;
    j["c0"] = f.c0;
    j["c1"] = f.c1;
    std::vector<std::pair<BigInt, BigInt>> s;
    for (const auto& p : f.samples) s.emplace_back(p.power, p.length);
    j["samples"] = samples_json(s);
  } else if (o.kind == "disk" || o.kind == "ball" || o.kind == "product") {
    ScalingFit f;
    if (o.kind == "disk") {
      f = fit_disk_exponent(params, lo, hi, o.vertex > 0 ? o.vertex - 1 : -1);
    } else if (o.kind == "ball") {
      f = fit_ball_exponent(params, o.k, lo, hi, o.vertex > 0 ? o.vertex - 1 : -1);
    } else {
      DiskCalculator calc(params);
      std::vector<std::pair<BigInt, BigInt>> levels;
      for (int d = lo; d <= hi; ++d) {
        DiskStats st = calc.disk(calc.default_vertex(), parse_power("rpow:" + std::to_string(d), params.r));
        levels.emplace_back(st.perimeter, st.area.total());
      }
      const double dehn = params.z2 ? 2.0 : exponents(params.matrix, params.r).dehn.value();
      f = fit_product_ball(levels, 2.0 - 1.0 / dehn);
    }
    slope = f.slope;
    target = f.target;
    residual = f.residual;
    j["samples"] = samples_json(f.samples);
  } else {
    throw UsageError("--kind must be alpha, disk, ball or product");
  }
  j["slope"] = slope;
  j["target"] = target;
  j["residual"] = residual;
  j["tol"] = o.tol;
  j["pass"] = std::abs(slope - target) <= o.tol * std::abs(target);
  return dump(j);
}

std::string run_spectrum(const Options& o) {
  json j;
  if (!o.alpha2.empty()) {
    Rational a = parse_rational(o.alpha2);
    j["alpha2"] = rational_json(a);
    j["ell"] = o.ell;
    j["s"] = rational_json(s_of_ell(a, o.ell));
    return dump(j);
  }
  if (o.s.empty()) throw UsageError("spectrum needs --s (with --k) or --alpha2 (with --ell)");
  SpectrumRecipe rec = invert_spectrum(parse_rational(o.s), o.k);
  j["s"] = rational_json(rec.s);
  j["k"] = rec.k;
  j["q"] = rec.q;
  j["suspensions"] = rec.suspensions();
  j["ell"] = rec.ell;
  j["alpha2"] = rational_json(rec.alpha2);
  if (rec.z2) {
    j["base"] = "Z2";
  } else {
    j["base"] = {{"p", rec.p}, {"qprime", rec.qprime}, {"r", "2^" + std::to_string(rec.p)},
                 {"matrix", "(4^" + std::to_string(rec.qprime) + ")"}};
  }
  j["construction"] = rec.describe();
  return dump(j);
}

struct SolveOutcome {
  std::string text;
  bool had_error = false;
};

SolveOutcome run_solve(const Options& o, std::istream& in) {
  BrittonSolver solver(load_matrix(o.matrix), load_r(o.r));
  SolveOutcome outcome;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    j["word"] = line;
    try {
      Word w = solver.parse(line);
      const int base = o.base > 0 ? o.base - 1 : (o.killed ? 0 : -1);
      if (o.killed) w = solver.reinsert_tree_letters(w, base);
      Reduction red = solver.reduce(w, base);
      j["base"] = red.base + 1;
      j["trivial"] = red.trivial;
      j["reduced"] = solver.format(red.word());
      j["pinches"] = red.trace.pinches.size();
    } catch (const Error& e) {
      j["error"] = e.what();
      outcome.had_error = true;
    }
    outcome.text += j.dump() + "\n";
  }
  return outcome;
}

std::string run_render(const Options& o) {
  SnowflakeParams params = family(o);
  SnowflakeBuilder builder(params);
  const int v = vertex_index(o, builder.default_vertex(), builder.graph().vertices());
  RenderOptions ro;
  ro.max_depth = o.depth;
  return render_disk_svg(params, v, parse_power(o.power, params.r), ro);
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

void write_output(const std::string& path, const std::string& data) {
  if (path.empty()) {
    std::cout << data;
    std::cout.flush();
    if (!std::cout) throw IoError("cannot write to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << data;
  if (!out) throw IoError("cannot write " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Snowflake groups: spectra, presentations, words, disks and balls"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1, 1);
  Options o;
  app.add_option("--out", o.out, "Write the result to FILE instead of stdout");
  app.add_option("--manifest", o.manifest, "Write a run manifest (argv and output digest) to FILE");

  auto family_opts = [&](CLI::App* sub) {
    sub->add_option("--matrix", o.matrix, "Matrix as JSON [[..]], as 'R; row; row', or a file holding either");
    sub->add_option("--r", o.r, "Slope r = P or P/Q");
    sub->add_flag("--z2", o.z2, "Use the abelian family Z^2");
  };

  auto* eigen = app.add_subcommand("eigen", "Perron-Frobenius eigenvalue and exponents");
  family_opts(eigen);
  eigen->add_option("--tol", o.eigen_tol, "Eigenvalue tolerance");
  eigen->add_option("--kmax", o.k_max, "Largest power for the growth constants");

  auto* present = app.add_subcommand("present", "Emit a finite presentation");
  family_opts(present);
  present->add_option("--vm", o.vm, "Present V_m instead");
  present->add_option("--suspend", o.suspend, "Suspension depth");
  present->add_option("--product", o.product, "Direct product with Z^L");
  present->add_flag("--kill-tree", o.kill_tree, "Add the stable letters of a maximal tree as relators");
  present->add_option("--format", o.format, "plain, json or calg");

  auto* vm = app.add_subcommand("vm", "Word problem, shuffling and fillings in V_m");
  vm->add_option("--m", o.m, "Number of generators")->required();
  vm->add_option("--word", o.word, "Word such as 'a1^3 b2^-1 c^2'")->required();
  vm->add_option("--action", o.action, "nf, eq, shuffle or fill");
  vm->add_option("--other", o.other, "Second word for eq");
  vm->add_option("--x", o.x, "Target letter for fill");
  vm->add_option("--N", o.power, "Target exponent for fill");

  auto* word = app.add_subcommand("word", "Snowflake words for c_v^N");
  family_opts(word);
  word->add_option("--vertex", o.vertex, "Vertex (1-based)");
  word->add_option("--N", o.power, "Exponent, or rpow:D for r^D")->required();
  word->add_option("--sign", o.sign, "+ or -");
  word->add_option("--policy", o.policy, "nearest, floor or ceil");
  word->add_option("--rule", o.rule, "threshold or unit");
  word->add_option("--emit", o.emit, "flat, tree or stats");
  word->add_option("--tree-format", o.tree_format, "text or json");
  word->add_flag("--verify", o.verify, "Check the word structurally and with the solver");

  auto* disk = app.add_subcommand("disk", "Disk perimeter and area");
  family_opts(disk);
  disk->add_option("--vertex", o.vertex, "Vertex (1-based)");
  disk->add_option("--N", o.power, "Exponent, or rpow:D");
  disk->add_option("--depths", o.depths, "Range A..B of depths d with N = r^d");
  disk->add_option("--policy", o.policy, "nearest, floor or ceil");
  disk->add_option("--rule", o.rule, "threshold or unit");
  disk->add_option("--format", o.format, "csv or json");

  auto* ball = app.add_subcommand("ball", "Balls in iterated suspensions");
  family_opts(ball);
  ball->add_option("--vertex", o.vertex, "Vertex (1-based)");
  ball->add_option("--k", o.k, "Dimension k >= 2");
  ball->add_option("--j", o.depths, "Index range A..B");
  ball->add_option("--format", o.format, "csv or json");

  auto* fit = app.add_subcommand("fit", "Fit scaling exponents");
  family_opts(fit);
  fit->add_option("--kind", o.kind, "alpha, disk, ball or product");
  fit->add_option("--depths", o.depths, "Range A..B");
  fit->add_option("--k", o.k, "Ball dimension for --kind ball");
  fit->add_option("--vertex", o.vertex, "Vertex (1-based)");
  fit->add_option("--tol", o.tol, "Relative tolerance for pass");
  fit->add_option("--policy", o.policy, "nearest, floor or ceil");
  fit->add_option("--rule", o.rule, "threshold or unit");

  auto* spectrum = app.add_subcommand("spectrum", "Realise an exponent or evaluate s(ell)");
  spectrum->add_option("--s", o.s, "Target exponent P/Q");
  spectrum->add_option("--k", o.k, "Dimension budget");
  spectrum->add_option("--alpha2", o.alpha2, "Base exponent P/Q");
  spectrum->add_option("--ell", o.ell, "Number of Z factors");

  auto* solve = app.add_subcommand("solve", "Word problem in G_{r,P}; one word per stdin line");
  family_opts(solve);
  solve->add_option("--base", o.base, "Base vertex (1-based)");
  solve->add_flag("--killed", o.killed, "Words omit the stable letters of the maximal tree");

  auto* render = app.add_subcommand("render", "SVG of a disk");
  family_opts(render);
  render->add_option("--vertex", o.vertex, "Vertex (1-based)");
  render->add_option("--N", o.power, "Exponent, or rpow:D")->required();
  render->add_option("--depth", o.depth, "Deepest level drawn");
  render->add_option("--policy", o.policy, "nearest, floor or ceil");
  render->add_option("--rule", o.rule, "threshold or unit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    std::string output;
    int code = 0;
    if (eigen->parsed()) output = run_eigen(o);
    else if (present->parsed()) output = run_present(o);
    else if (vm->parsed()) output = run_vm(o);
    else if (word->parsed()) output = run_word(o);
    else if (disk->parsed()) output = run_disk(o);
    else if (ball->parsed()) output = run_ball(o);
    else if (fit->parsed()) output = run_fit(o);
    else if (spectrum->parsed()) output = run_spectrum(o);
    else if (render->parsed()) output = run_render(o);
    else if (solve->parsed()) {
      SolveOutcome s = run_solve(o, std::cin);
      output = s.text;
      code = s.had_error ? kExitInvalid : 0;
    }
    write_output(o.out, output);
    if (!o.manifest.empty()) {
      json m;
      m["tool"] = "snowflake";
      m["version"] = kVersion;
      json args = json::array();
      for (int i = 1; i < argc; ++i) args.push_back(argv[i]);
      m["argv"] = args;
      m["output"] = {{"target", o.out.empty() ? "stdout" : o.out},
                     {"bytes", output.size()},
                     {"fnv1a64", hex(fnv1a(output))}};
      write_output(o.manifest, dump(m));
    }
    return code;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}
