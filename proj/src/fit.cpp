#include "snowflake/fit.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "snowflake/error.hpp"

namespace snowflake {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error(Errc::Internal, "fit_line needs matching samples");
  if (x.size() < 3) {
    throw Error(Errc::InsufficientData, "need at least 3 sample points; got " + std::to_string(x.size()));
  }
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = x[i];
    design(i, 1) = 1.0;
    rhs(i) = y[i];
  }
  Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
  LineFit out;
  out.slope = coef(0);
  out.intercept = coef(1);
  out.points = static_cast<int>(n);
  out.residual = std::sqrt((design * coef - rhs).squaredNorm() / static_cast<double>(n));
  return out;
}

}  // namespace snowflake
