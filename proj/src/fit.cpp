#include "nhscat/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace nhscat {

namespace {

double mean(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_line: size mismatch");
  if (x.size() < 3) throw std::invalid_argument("fit_line: need at least 3 points");

  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: abscissae are all equal");

  LinearFit fit;
  fit.points = x.size();
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ssr += r * r;
  }
  fit.residual_sum_squares = ssr;
  fit.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  fit.slope_stderr = std::sqrt(ssr / static_cast<double>(x.size() - 2) / sxx);
  return fit;
}

SharedSlopeFit fit_shared_slope(std::span<const double> xa, std::span<const double> ya,
                                std::span<const double> xb, std::span<const double> yb) {
  if (xa.size() != ya.size() || xb.size() != yb.size()) {
    throw std::invalid_argument("fit_shared_slope: size mismatch");
  }
  if (xa.empty() || xb.empty() || xa.size() + xb.size() < 4) {
    throw std::invalid_argument("fit_shared_slope: need points in both groups, 4 in total");
  }
  const double mxa = mean(xa), mya = mean(ya);
  const double mxb = mean(xb), myb = mean(yb);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xa.size(); ++i) {
    sxx += (xa[i] - mxa) * (xa[i] - mxa);
    sxy += (xa[i] - mxa) * (ya[i] - mya);
  }
  for (std::size_t i = 0; i < xb.size(); ++i) {
    sxx += (xb[i] - mxb) * (xb[i] - mxb);
    sxy += (xb[i] - mxb) * (yb[i] - myb);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_shared_slope: no spread in abscissae");

  SharedSlopeFit fit;
  fit.points = xa.size() + xb.size();
  fit.slope = sxy / sxx;
  fit.intercept_a = mya - fit.slope * mxa;
  fit.intercept_b = myb - fit.slope * mxb;

  // R^2 against the pooled mean, as for an ordinary regression on all points.
  const double pooled =
      (mya * xa.size() + myb * xb.size()) / static_cast<double>(fit.points);
  double ssr = 0.0, sst = 0.0;
  for (std::size_t i = 0; i < xa.size(); ++i) {
    const double r = ya[i] - (fit.intercept_a + fit.slope * xa[i]);
    ssr += r * r;
    sst += (ya[i] - pooled) * (ya[i] - pooled);
  }
  for (std::size_t i = 0; i < xb.size(); ++i) {
    const double r = yb[i] - (fit.intercept_b + fit.slope * xb[i]);
    ssr += r * r;
    sst += (yb[i] - pooled) * (yb[i] - pooled);
  }
  fit.r_squared = sst > 0.0 ? 1.0 - ssr / sst : 1.0;
  fit.slope_stderr = std::sqrt(ssr / static_cast<double>(fit.points - 3) / sxx);
  return fit;
}

}  // namespace nhscat
