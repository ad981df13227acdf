#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "snowflake/numeric.hpp"
#include "snowflake/snowflake_words.hpp"

namespace snowflake {

// Number of cells per degree. Counts never go negative.
class CellCount {
 public:
  CellCount() = default;
  static CellCount of(int degree, const BigInt& n);

  void add(int degree, const BigInt& n);
  BigInt at(int degree) const;
  BigInt total() const;
  const std::map<int, BigInt>& cells() const { return cells_; }
  bool empty() const { return cells_.empty(); }

  CellCount& operator+=(const CellCount& other);
  // Throws Internal if a degree would go negative.
  CellCount& operator-=(const CellCount& other);
  CellCount& operator*=(const BigInt& k);

  friend CellCount operator+(CellCount a, const CellCount& b) { return a += b; }
  friend CellCount operator-(CellCount a, const CellCount& b) { return a -= b; }
  friend CellCount operator*(const BigInt& k, CellCount a) { return a *= k; }
  friend bool operator==(const CellCount&, const CellCount&) = default;

  // "{1: 3, 2: 4}"
  std::string str() const;

 private:
  std::map<int, BigInt> cells_;
};

// Image under the scaling automorphism: a degree-d cell becomes r^d cells.
CellCount phi_image(const CellCount& c, const Slope& r);

struct DiskStats {
  int vertex = 0;
  std::int64_t power = 0;
  BigInt perimeter = 0;
  CellCount area;
  int d_min = 0;
  int d_max = 0;
};

// Disks bounded by w+ (w-)^-1 for c_v^N, assembled from the snowflake
// diagrams of both halves.
class DiskCalculator {
 public:
  explicit DiskCalculator(const SnowflakeParams& params);

  const SnowflakeParams& params() const { return params_; }
  int default_vertex() const;
  DiskStats disk(int vertex, std::int64_t power);

  // Cells in the diagram of one half.
  CellCount half_area(const SnowflakeNode& node);

 private:
  SnowflakeParams params_;
  std::unique_ptr<SnowflakeBuilder> builder_;
  std::map<std::tuple<int, std::int64_t, int>, CellCount> memo_;
};

struct ScalingFit {
  double slope = 0;
  double intercept = 0;
  double residual = 0;
  double target = 0;
  // (size, volume) per sample: perimeter/area or boundary/interior.
  std::vector<std::pair<BigInt, BigInt>> samples;
};

// Regression of log area against log perimeter over N = r^d.
ScalingFit fit_disk_exponent(const SnowflakeParams& params, int d_lo, int d_hi, int vertex = -1);

struct BallLevel {
  CellCount interior;
  CellCount boundary;
  CellCount shell;
};

// Balls of the iterated suspensions, built from the depth-j unit disks for
// c_v^{r^j}. Requires integer r.
class BallCalculator {
 public:
  explicit BallCalculator(const SnowflakeParams& params, int vertex = -1);

  BallLevel ball(int k, int j);
  // interior(k, j) - phi(interior(k, j - 1)), the route the recursion avoids.
  CellCount shell_by_difference(int k, int j);

 private:
  SnowflakeParams params_;
  DiskCalculator disks_;
  int vertex_;
  std::map<std::pair<int, int>, BallLevel> memo_;
};

ScalingFit fit_ball_exponent(const SnowflakeParams& params, int k, int j_lo, int j_hi, int vertex = -1);

struct ProductLevel {
  Rational boundary;  // m_i = 3 V_i
  Rational volume;    // m_i^2 / (9 n_i)
};

// Balls of B x Z from (boundary n_i, interior V_i) of B.
std::vector<ProductLevel> product_ball(const std::vector<std::pair<BigInt, BigInt>>& levels);

ScalingFit fit_product_ball(const std::vector<std::pair<BigInt, BigInt>>& levels, double target);

}  // namespace snowflake
