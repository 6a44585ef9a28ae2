#include <cmath>
#include <map>
#include <set>

#include <boost/math/distributions/students_t.hpp>

#include "congest/bench.hpp"
#include "congest/errors.hpp"

namespace congest::bench {

FitResult fit_loglog(const std::vector<std::pair<double, double>>& points) {
  std::set<double> xs;
  for (const auto& [x, y] : points) {
    if (!(x > 0) || !(y > 0)) throw InvalidArgument("fit: log-log fit needs positive values");
    xs.insert(x);
  }
  if (xs.size() < 3) throw InvalidArgument("fit: needs at least 3 distinct n, got " + std::to_string(xs.size()));
  const double k = static_cast<double>(points.size());
  double mx = 0, my = 0;
  for (const auto& [x, y] : points) {
    mx += std::log(x);
    my += std::log(y);
  }
  mx /= k;
  my /= k;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : points) {
    sxx += (std::log(x) - mx) * (std::log(x) - mx);
    sxy += (std::log(x) - mx) * (std::log(y) - my);
  }
  FitResult f;
  f.points = points.size();
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double sse = 0;
  for (const auto& [x, y] : points) {
    const double r = std::log(y) - (f.intercept + f.slope * std::log(x));
    sse += r * r;
  }
  f.residual = std::sqrt(sse / k);
  const double dof = k - 2;
  f.stderr_slope = std::sqrt(sse / dof / sxx);
  boost::math::students_t t(dof);
  const double q = boost::math::quantile(boost::math::complement(t, 0.025));
  f.ci_low = f.slope - q * f.stderr_slope;
  f.ci_high = f.slope + q * f.stderr_slope;
  return f;
}

FitResult fit_exponent(const std::vector<Row>& rows, const std::string& metric) {
  std::map<std::size_t, std::pair<double, std::size_t>> acc;
  for (const auto& r : rows) {
    if (!r.ok) continue;
    auto& a = acc[r.n];
    a.first += r.metric(metric);
    ++a.second;
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& [n, a] : acc) pts.emplace_back(static_cast<double>(n), a.first / static_cast<double>(a.second));
  return fit_loglog(pts);
}

}  // namespace congest::bench
