#include "snowflake/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "snowflake/error.hpp"

namespace snowflake {

void validate_matrix(const IntMatrix& p) {
  if (p.rows() == 0 || p.rows() != p.cols()) {
    throw Error(Errc::InvalidMatrix, "matrix must be square and non-empty; got " +
                                         std::to_string(p.rows()) + "x" + std::to_string(p.cols()));
  }
  if ((p.array() < 0).any()) {
    throw Error(Errc::InvalidMatrix, "matrix entries must be non-negative");
  }
}

std::int64_t max_row_sum(const IntMatrix& p) { return p.rowwise().sum().maxCoeff(); }

bool is_permutation_matrix(const IntMatrix& p) {
  return (p.rowwise().sum().array() == 1).all() && (p.colwise().sum().array() == 1).all() &&
         (p.array() <= 1).all();
}

namespace {

std::vector<bool> reachable(const IntMatrix& p, bool transpose) {
  const auto n = p.rows();
  std::vector<bool> seen(n, false);
  std::vector<Eigen::Index> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    auto i = stack.back();
    stack.pop_back();
    for (Eigen::Index j = 0; j < n; ++j) {
      auto entry = transpose ? p(j, i) : p(i, j);
      if (entry > 0 && !seen[j]) {
        seen[j] = true;
        stack.push_back(j);
      }
    }
  }
  return seen;
}

}  // namespace

bool is_irreducible(const IntMatrix& p) {
  validate_matrix(p);
  if (p.rows() == 1) return p(0, 0) > 0;
  auto fwd = reachable(p, false);
  auto bwd = reachable(p, true);
  return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

namespace {

void require_irreducible(const IntMatrix& p) {
  validate_matrix(p);
  if ((p.array() == 0).all()) throw Error(Errc::ZeroMatrix, "matrix must be non-zero");
  if (!is_irreducible(p)) {
    throw Error(Errc::NotIrreducible, "matrix must be irreducible; its digraph is not strongly connected");
  }
}

}  // namespace

Eigenvalue pf_eigenvalue(const IntMatrix& p, double tol) {
  require_irreducible(p);
  const auto n = p.rows();
  const Dense<double> shifted = p.cast<double>() + Dense<double>::Identity(n, n);
  DenseVector<double> u = DenseVector<double>::Ones(n);

  Eigenvalue out;
  Rational best_lo(0), best_hi(std::numeric_limits<std::int64_t>::max());
  constexpr int kMaxIterations = 20000;
  for (int it = 0; it <= kMaxIterations; ++it) {
    // Collatz-Wielandt bracket of P at the current positive iterate, exactly.
    Rational lo, hi;
    for (Eigen::Index i = 0; i < n; ++i) {
      Rational ui(u(i));
      Rational pu(0);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (p(i, j) != 0) pu += Rational(p(i, j)) * Rational(u(j));
      }
      Rational ratio = pu / ui;
      if (i == 0 || ratio < lo) lo = ratio;
      if (i == 0 || ratio > hi) hi = ratio;
    }
    best_lo = std::max(best_lo, lo);
    best_hi = std::min(best_hi, hi);
    out.iterations = it;
    if (best_lo == best_hi && boost::multiprecision::denominator(best_lo) == 1) {
      out.exact = static_cast<std::int64_t>(boost::multiprecision::numerator(best_lo));
      out.value = static_cast<double>(*out.exact);
      out.radius = 0;
      return out;
    }
    if (to_double(best_hi - best_lo) / 2 <= tol) break;
    u = shifted * u;
    u /= u.maxCoeff();
    if ((u.array() <= 0).any()) break;
  }
  out.value = to_double((best_lo + best_hi) / 2);
  double half = to_double((best_hi - best_lo) / 2);
  out.radius = half + 4 * std::numeric_limits<double>::epsilon() * out.value;
  return out;
}

namespace {

Exponent exponent_from_lambda(const Eigenvalue& lambda, double log_r) {
  Exponent e;
  double lo_lambda = lambda.value - lambda.radius;
  double hi_lambda = lambda.value + lambda.radius;
  e.approx.value = log_r / std::log(lambda.value);
  double a = log_r / std::log(hi_lambda);
  double b = lo_lambda > 1 ? log_r / std::log(lo_lambda) : std::numeric_limits<double>::infinity();
  e.approx.radius = std::max(std::abs(e.approx.value - a), std::abs(b - e.approx.value)) +
                    8 * std::numeric_limits<double>::epsilon() * e.approx.value;
  return e;
}

}  // namespace

ExponentReport exponents(const IntMatrix& p, const Slope& r, double tol) {
  ExponentReport rep;
  rep.lambda = pf_eigenvalue(p, tol);
  if (is_permutation_matrix(p)) {
    throw Error(Errc::LambdaNotGreaterThanOne,
                "Perron-Frobenius eigenvalue must exceed 1; matrix is a permutation matrix (lambda = 1)");
  }
  std::int64_t m = max_row_sum(p);
  if (Rational(r.p, r.q) <= Rational(m)) {
    throw Error(Errc::RowSumViolation,
                "r must exceed max row sum " + std::to_string(m) + "; got " + r.str());
  }
  rep.alpha = exponent_from_lambda(rep.lambda, std::log(r.value()));
  if (rep.lambda.exact && r.q == 1) {
    auto [base_l, exp_l] = perfect_power(static_cast<std::uint64_t>(*rep.lambda.exact));
    auto [base_r, exp_r] = perfect_power(static_cast<std::uint64_t>(r.p));
    if (base_l == base_r) rep.alpha.exact = Rational(exp_r, exp_l);
  }
  rep.dehn.approx = {2 * rep.alpha.approx.value, 2 * rep.alpha.approx.radius};
  if (rep.alpha.exact) rep.dehn.exact = 2 * *rep.alpha.exact;
  return rep;
}

ExponentReport z2_exponents() {
  ExponentReport rep;
  rep.z2 = true;
  rep.lambda.value = 1;
  rep.lambda.exact = 1;
  rep.alpha.exact = Rational(1);
  rep.alpha.approx = {1.0, 0.0};
  rep.dehn.exact = Rational(2);
  rep.dehn.approx = {2.0, 0.0};
  return rep;
}

GrowthConstants growth_constants(const IntMatrix& p, int k_max) {
  if (k_max < 1) throw Error(Errc::NonPositiveIndex, "k_max must be at least 1; got " + std::to_string(k_max));
  Eigenvalue lambda = pf_eigenvalue(p);
  const double log_lambda = std::log(lambda.value);
  const BigMatrix big = cast_matrix<BigInt>(p);
  BigMatrix power = big;
  GrowthConstants out;
  out.k_max = k_max;
  out.lower = std::numeric_limits<double>::infinity();
  out.upper = 0;
  for (int k = 1; k <= k_max; ++k) {
    if (k > 1) power = exact_product(power, big);
    double kmin = std::numeric_limits<double>::infinity();
    double kmax = 0;
    for (Eigen::Index j = 0; j < power.cols(); ++j) {
      BigInt col = 0;
      for (Eigen::Index i = 0; i < power.rows(); ++i) col += power(i, j);
      double ratio = std::exp(log_big(col) - k * log_lambda);
      kmin = std::min(kmin, ratio);
      kmax = std::max(kmax, ratio);
    }
    out.min_ratio.push_back(kmin);
    out.max_ratio.push_back(kmax);
    out.lower = std::min(out.lower, kmin);
    out.upper = std::max(out.upper, kmax);
  }
  return out;
}

namespace {

void check_alpha2(const Rational& alpha2, int ell) {
  if (alpha2 < 1) throw Error(Errc::DomainError, "alpha2 must be at least 1; got " + to_string(alpha2));
  if (ell < 0) throw Error(Errc::DomainError, "ell must be non-negative; got " + std::to_string(ell));
}

}  // namespace

Rational s_of_ell(const Rational& alpha2, int ell) {
  check_alpha2(alpha2, ell);
  Rational l(ell);
  return ((l + 1) * alpha2 - l) / (l * alpha2 - (l - 1));
}

double s_of_ell(double alpha2, int ell) {
  if (!(alpha2 >= 1)) throw Error(Errc::DomainError, "alpha2 must be at least 1; got " + std::to_string(alpha2));
  if (ell < 0) throw Error(Errc::DomainError, "ell must be non-negative; got " + std::to_string(ell));
  double l = ell;
  return ((l + 1) * alpha2 - l) / (l * alpha2 - (l - 1));
}

Rational s_of_ell_iterated(const Rational& alpha2, int ell) {
  check_alpha2(alpha2, ell);
  Rational s = alpha2;
  for (int i = 0; i < ell; ++i) s = Rational(2) - Rational(1) / s;
  return s;
}

std::string SpectrumRecipe::describe() const {
  std::ostringstream os;
  if (q > 1) os << "Sigma^" << (q - 1) << " ";
  if (z2) {
    os << "Z^2";
  } else {
    os << "G_{2^" << p << ", (4^" << qprime << ")}";
  }
  if (ell > 0) os << " x Z^" << ell;
  return os.str();
}

SpectrumRecipe invert_spectrum(const Rational& s, int k) {
  if (k < 1) throw Error(Errc::DomainError, "k must be at least 1; got " + std::to_string(k));
  Rational floor_value(k + 1, k);
  if (s < floor_value) {
    throw Error(Errc::OutOfRange, "s must be at least " + to_string(floor_value) + " for k = " +
                                      std::to_string(k) + "; got " + to_string(s));
  }
  for (int ell = 0; ell < k; ++ell) {
    Rational x = s;
    bool ok = true;
    for (int t = 0; t < ell; ++t) {
      if (x >= 2) {
        ok = false;
        break;
      }
      x = Rational(1) / (Rational(2) - x);
    }
    if (!ok || x < 2) continue;
    SpectrumRecipe out;
    out.s = s;
    out.k = k;
    out.ell = ell;
    out.q = k - ell;
    out.alpha2 = x;
    if (x == 2) {
      out.z2 = true;
    } else {
      out.p = static_cast<std::int64_t>(boost::multiprecision::numerator(x));
      out.qprime = static_cast<std::int64_t>(boost::multiprecision::denominator(x));
    }
    return out;
  }
  throw Error(Errc::NonRepresentable, "no construction with " + std::to_string(k) +
                                          " dimensions realises s = " + to_string(s));
}

namespace {

IntMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  if (rows.empty()) throw Error(Errc::InvalidMatrix, "matrix must be non-empty");
  IntMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw Error(Errc::InvalidMatrix, "ragged matrix rows");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  validate_matrix(m);
  return m;
}

}  // namespace

IntMatrix parse_matrix(std::string_view text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw Error(Errc::InvalidMatrix, "empty matrix text");
  std::vector<std::vector<std::int64_t>> rows;
  if (text[first] == '[') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
      rows = j.get<std::vector<std::vector<std::int64_t>>>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::InvalidMatrix, std::string("malformed JSON matrix: ") + e.what());
    }
    return from_rows(rows);
  }
  std::string buf(text);
  std::istringstream in(buf);
  std::string chunk;
  std::getline(in, chunk, ';');
  std::int64_t dim = 0;
  try {
    dim = std::stoll(chunk);
  } catch (const std::exception&) {
    throw Error(Errc::InvalidMatrix, "matrix text must start with its dimension; got '" + chunk + "'");
  }
  while (std::getline(in, chunk, ';')) {
    std::istringstream row_in(chunk);
    std::vector<std::int64_t> row;
    std::string tok;
    while (row_in >> tok) {
      try {
        std::size_t used = 0;
        row.push_back(std::stoll(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw Error(Errc::InvalidMatrix, "bad matrix entry '" + tok + "'");
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (static_cast<std::int64_t>(rows.size()) != dim) {
    throw Error(Errc::InvalidMatrix, "matrix text declares " + std::to_string(dim) + " rows; got " +
                                         std::to_string(rows.size()));
  }
  return from_rows(rows);
}

std::string format_matrix(const IntMatrix& p) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    out += i ? ",[" : "[";
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (j) out += ",";
      out += std::to_string(p(i, j));
    }
    out += "]";
  }
  return out + "]";
}

}  // namespace snowflake
