#include "snowflake/geometry.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "snowflake/error.hpp"
#include "snowflake/fit.hpp"

namespace snowflake {

CellCount CellCount::of(int degree, const BigInt& n) {
  CellCount c;
  c.add(degree, n);
  return c;
}

void CellCount::add(int degree, const BigInt& n) {
  if (n == 0) return;
  BigInt& slot = cells_[degree];
  slot += n;
  if (slot < 0) throw Error(Errc::Internal, "negative cell count in degree " + std::to_string(degree));
  if (slot == 0) cells_.erase(degree);
}

BigInt CellCount::at(int degree) const {
  auto it = cells_.find(degree);
  return it == cells_.end() ? BigInt(0) : it->second;
}

BigInt CellCount::total() const {
  BigInt t = 0;
  for (const auto& [d, n] : cells_) t += n;
  return t;
}

CellCount& CellCount::operator+=(const CellCount& other) {
  for (const auto& [d, n] : other.cells_) add(d, n);
  return *this;
}

CellCount& CellCount::operator-=(const CellCount& other) {
  for (const auto& [d, n] : other.cells_) add(d, -n);
  return *this;
}

CellCount& CellCount::operator*=(const BigInt& k) {
  if (k < 0) throw Error(Errc::Internal, "cell counts scale by non-negative factors");
  if (k == 0) {
    cells_.clear();
    return *this;
  }
  for (auto& [d, n] : cells_) n *= k;
  return *this;
}

std::string CellCount::str() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [d, n] : cells_) {
    if (!first) out += ", ";
    first = false;
    out += std::to_string(d) + ": " + n.str();
  }
  return out + "}";
}

CellCount phi_image(const CellCount& c, const Slope& r) {
  if (!r.is_integer()) throw Error(Errc::RationalRNotAllowed, "scaling needs integer r; got " + r.str());
  CellCount out;
  for (const auto& [d, n] : c.cells()) {
    out.add(d, n * boost::multiprecision::pow(BigInt(r.p), static_cast<unsigned>(d)));
  }
  return out;
}

DiskCalculator::DiskCalculator(const SnowflakeParams& params) : params_(params) {
  if (!params.z2) builder_ = std::make_unique<SnowflakeBuilder>(params);
}

int DiskCalculator::default_vertex() const { return builder_ ? builder_->default_vertex() : 0; }

CellCount DiskCalculator::half_area(const SnowflakeNode& node) {
  const auto key = std::make_tuple(node.vertex, node.power, node.sign == Sign::Positive ? 1 : -1);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  const BigInt n(node.power);
  CellCount out = CellCount::of(2, BigInt(node.width - 1) * n * n);
  const Slope& r = params_.r;
  for (const auto& child : node.children) {
    const std::int64_t k = (node.power - child.remainder) / r.p;
    out.add(1, BigInt(std::llabs(k)));
    out += half_area(*child.node);
  }
  const std::size_t cap = memo_cap();
  if (cap == 0 || memo_.size() < cap) memo_.emplace(key, out);
  return out;
}

DiskStats DiskCalculator::disk(int vertex, std::int64_t power) {
  DiskStats st;
  st.vertex = vertex;
  st.power = power;
  if (params_.z2) {
    const BigInt n(std::llabs(power));
    st.perimeter = 4 * n;
    st.area = CellCount::of(2, n * n);
    return st;
  }
  NodePtr pos = builder_->build(vertex, power, Sign::Positive);
  NodePtr neg = builder_->build(vertex, power, Sign::Negative);
  const WordStats ps = word_stats(*pos);
  const WordStats ns = word_stats(*neg);
  st.perimeter = ps.length + ns.length;
  st.area = half_area(*pos) + half_area(*neg);
  st.d_min = std::min(ps.d_min, ns.d_min);
  st.d_max = std::max(ps.d_max, ns.d_max);
  return st;
}

namespace {

ScalingFit fit_samples(std::vector<std::pair<BigInt, BigInt>> samples, double target) {
  ScalingFit out;
  out.target = target;
  std::vector<double> xs, ys;
  for (const auto& [size, volume] : samples) {
    xs.push_back(log_big(size));
    ys.push_back(log_big(volume));
  }
  LineFit line = fit_line(xs, ys);
  out.slope = line.slope;
  out.intercept = line.intercept;
  out.residual = line.residual;
  out.samples = std::move(samples);
  return out;
}

double dehn_target(const SnowflakeParams& params) {
  return params.z2 ? 2.0 : exponents(params.matrix, params.r).dehn.value();
}

std::int64_t sample_power(const Slope& r, int d) {
  BigInt n = rounded_power(r, d);
  if (n > std::numeric_limits<std::int64_t>::max()) {
    throw Error(Errc::Overflow, "r^" + std::to_string(d) + " exceeds 64 bits");
  }
  return n.convert_to<std::int64_t>();
}

}  // namespace

ScalingFit fit_disk_exponent(const SnowflakeParams& params, int d_lo, int d_hi, int vertex) {
  if (d_hi - d_lo + 1 < 3) {
    throw Error(Errc::InsufficientData, "need at least 3 depths; got " + std::to_string(std::max(0, d_hi - d_lo + 1)));
  }
  if (d_lo < 1) throw Error(Errc::NonPositiveIndex, "depths must be positive; got " + std::to_string(d_lo));
  DiskCalculator calc(params);
  const int v = vertex < 0 ? calc.default_vertex() : vertex;
  std::vector<std::pair<BigInt, BigInt>> samples;
  for (int d = d_lo; d <= d_hi; ++d) {
    DiskStats st = calc.disk(v, sample_power(params.r, d));
    samples.emplace_back(st.perimeter, st.area.total());
  }
  return fit_samples(std::move(samples), dehn_target(params));
}

namespace {

SnowflakeParams unit_params(SnowflakeParams params) {
  if (!params.r.is_integer()) {
    throw Error(Errc::RationalRNotAllowed, "balls need integer r; got " + params.r.str());
  }
  params.rule = TerminalRule::Unit;
  return params;
}

}  // namespace

BallCalculator::BallCalculator(const SnowflakeParams& params, int vertex)
    : params_(unit_params(params)), disks_(params_), vertex_(vertex < 0 ? disks_.default_vertex() : vertex) {}

BallLevel BallCalculator::ball(int k, int j) {
  if (k < 2) throw Error(Errc::NonPositiveIndex, "ball dimension k must be at least 2; got " + std::to_string(k));
  if (j < 1) throw Error(Errc::NonPositiveIndex, "ball index j must be at least 1; got " + std::to_string(j));
  const auto key = std::make_pair(k, j);
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  BallLevel level;
  if (k == 2) {
    DiskStats st = disks_.disk(vertex_, sample_power(params_.r, j));
    level.interior = st.area;
    level.boundary = CellCount::of(1, st.perimeter);
    level.shell = j == 1 ? level.interior : level.interior - phi_image(ball(2, j - 1).interior, params_.r);
  } else {
    for (int i = 1; i <= j; ++i) {
      const BallLevel lower = ball(k - 1, i);
      level.interior += lower.interior;
      level.shell += lower.shell;
      level.boundary += lower.boundary + lower.shell;
    }
    level.interior *= 2;
    level.shell *= 2;
    level.boundary *= 2;
  }
  const std::size_t cap = memo_cap();
  if (cap == 0 || memo_.size() < cap) memo_.emplace(key, level);
  return level;
}

CellCount BallCalculator::shell_by_difference(int k, int j) {
  const CellCount interior = ball(k, j).interior;
  if (j == 1) return interior;
  return interior - phi_image(ball(k, j - 1).interior, params_.r);
}

ScalingFit fit_ball_exponent(const SnowflakeParams& params, int k, int j_lo, int j_hi, int vertex) {
  if (j_hi - j_lo + 1 < 3) {
    throw Error(Errc::InsufficientData, "need at least 3 indices; got " + std::to_string(std::max(0, j_hi - j_lo + 1)));
  }
  BallCalculator calc(params, vertex);
  std::vector<std::pair<BigInt, BigInt>> samples;
  for (int j = j_lo; j <= j_hi; ++j) {
    const BallLevel b = calc.ball(k, j);
    samples.emplace_back(b.boundary.total(), b.interior.total());
  }
  return fit_samples(std::move(samples), dehn_target(params));
}

std::vector<ProductLevel> product_ball(const std::vector<std::pair<BigInt, BigInt>>& levels) {
  std::vector<ProductLevel> out;
  for (const auto& [n, v] : levels) {
    if (n <= 0) throw Error(Errc::DomainError, "boundary sizes must be positive");
    ProductLevel level;
    level.boundary = Rational(3 * v);
    level.volume = level.boundary * level.boundary / Rational(9 * n);
    out.push_back(level);
  }
  return out;
}

ScalingFit fit_product_ball(const std::vector<std::pair<BigInt, BigInt>>& levels, double target) {
  auto product = product_ball(levels);
  ScalingFit out;
  out.target = target;
  std::vector<double> xs, ys;
  for (const auto& level : product) {
    const BigInt bn = boost::multiprecision::numerator(level.boundary);
    const BigInt vn = boost::multiprecision::numerator(level.volume);
    const BigInt vd = boost::multiprecision::denominator(level.volume);
    xs.push_back(log_big(bn));
    ys.push_back(log_big(vn) - log_big(vd));
  }
  LineFit line = fit_line(xs, ys);
  out.slope = line.slope;
  out.intercept = line.intercept;
  out.residual = line.residual;
  out.samples = levels;
  return out;
}

}  // namespace snowflake
