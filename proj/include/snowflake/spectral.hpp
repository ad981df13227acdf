#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "snowflake/numeric.hpp"

namespace snowflake {

template <typename Scalar>
using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMatrix = Dense<std::int64_t>;
using BigMatrix = Dense<BigInt>;

// Product that also works for scalars Eigen cannot form expressions over
// (Boost.Multiprecision numbers trip Eigen's scalar promotion traits).
template <typename Scalar>
Dense<Scalar> exact_product(const Dense<Scalar>& a, const Dense<Scalar>& b) {
  if constexpr (std::is_arithmetic_v<Scalar>) {
    return a * b;
  } else {
    Dense<Scalar> out(a.rows(), b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < b.cols(); ++j) {
        Scalar acc = 0;
        for (Eigen::Index k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
        out(i, j) = acc;
      }
    }
    return out;
  }
}

template <typename Scalar>
Dense<Scalar> matrix_power(const Dense<Scalar>& m, int k) {
  Dense<Scalar> acc = Dense<Scalar>::Identity(m.rows(), m.cols());
  Dense<Scalar> base = m;
  while (k > 0) {
    if (k & 1) acc = exact_product(acc, base);
    k >>= 1;
    if (k > 0) base = exact_product(base, base);
  }
  return acc;
}

template <typename Scalar, typename Derived>
Dense<Scalar> cast_matrix(const Eigen::MatrixBase<Derived>& m) {
  Dense<Scalar> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = Scalar(m(i, j));
  return out;
}

// Throws InvalidMatrix unless square, non-empty and non-negative.
void validate_matrix(const IntMatrix& p);

std::int64_t max_row_sum(const IntMatrix& p);

bool is_permutation_matrix(const IntMatrix& p);

// Strong connectivity of the digraph with an edge i -> j whenever p(i, j) > 0.
bool is_irreducible(const IntMatrix& p);

struct Interval {
  double value = 0;
  double radius = 0;
  double lower() const { return value - radius; }
  double upper() const { return value + radius; }
};

struct Eigenvalue {
  double value = 0;
  double radius = 0;
  std::optional<std::int64_t> exact;
  int iterations = 0;
};

// Perron-Frobenius eigenvalue with a Collatz-Wielandt bracket evaluated in
// exact rational arithmetic. If the requested tolerance is below what double
// iterates can resolve, the achieved radius is reported instead.
Eigenvalue pf_eigenvalue(const IntMatrix& p, double tol = 1e-12);

struct Exponent {
  std::optional<Rational> exact;
  Interval approx;
  double value() const { return approx.value; }
};

struct ExponentReport {
  Eigenvalue lambda;
  Exponent alpha;
  Exponent dehn;
  bool z2 = false;
};

ExponentReport exponents(const IntMatrix& p, const Slope& r, double tol = 1e-12);

// The abelian family Z^2 treated as a degenerate case with alpha = 1.
ExponentReport z2_exponents();

struct GrowthConstants {
  double lower = 0;
  double upper = 0;
  int k_max = 0;
  std::vector<double> min_ratio;  // per k, minimum over basis vectors
  std::vector<double> max_ratio;
};

GrowthConstants growth_constants(const IntMatrix& p, int k_max = 16);

// Closed form for the exponent after taking a product with Z^ell.
Rational s_of_ell(const Rational& alpha2, int ell);
double s_of_ell(double alpha2, int ell);

// The same value reached by iterating s -> 2 - 1/s.
Rational s_of_ell_iterated(const Rational& alpha2, int ell);

struct SpectrumRecipe {
  Rational s;
  int k = 0;
  int q = 0;          // suspension depth plus one
  int ell = 0;        // number of Z factors
  Rational alpha2;    // base Dehn exponent
  bool z2 = false;    // base is Z^2
  std::int64_t p = 0; // for a snowflake base: r = 2^p, P = (4^qprime)
  std::int64_t qprime = 0;

  int suspensions() const { return q - 1; }
  std::string describe() const;
};

SpectrumRecipe invert_spectrum(const Rational& s, int k);

// JSON array-of-arrays, or "R; row; row" with whitespace separated entries.
IntMatrix parse_matrix(std::string_view text);

std::string format_matrix(const IntMatrix& p);

}  // namespace snowflake
