#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace bfdc::num {

// Cubic Hermite segment on [x0, x1] with endpoint values y0, y1 and endpoint
// derivatives m0, m1.
double hermite(double x0, double x1, double y0, double y1, double m0,
               double m1, double x);
double hermite_deriv(double x0, double x1, double y0, double y1, double m0,
                     double m1, double x);
double hermite_second(double x0, double x1, double y0, double y1, double m0,
                      double m1, double x);

// Knot tangents for a shape-preserving piecewise cubic (Fritsch-Carlson
// limiter, scipy-compatible endpoint rule). xs strictly increasing.
std::vector<double> pchip_tangents(std::span<const double> xs,
                                   std::span<const double> ys);

// Piecewise cubic Hermite curve; linear extrapolation beyond the knot range.
class PiecewiseCubic {
 public:
  PiecewiseCubic() = default;
  PiecewiseCubic(std::vector<double> xs, std::vector<double> ys,
                 std::vector<double> ms);

  double value(double x) const;
  double deriv(double x) const;
  double second(double x) const;

  const std::vector<double>& knots() const { return xs_; }

 private:
  std::size_t segment(double x) const;

  std::vector<double> xs_, ys_, ms_;
};

// Root of f(x) = target on [lo, hi] by bisection, assuming f is continuous
// and f(lo), f(hi) bracket the target. Stops when the interval is below
// xtol; returns the midpoint.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double target, double xtol);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;  // root mean square residual
};
LinearFit linear_fit(std::span<const double> t, std::span<const double> y);

// Successive polynomial extrapolations of r(t) to t = 0. Entry i is the
// Neville extrapolant through the (up to max_degree+1) points ending at i,
// so the sequence sharpens as t decreases.
std::vector<double> extrapolate_to_zero(std::span<const double> t,
                                        std::span<const double> r,
                                        int max_degree);

}  // namespace bfdc::num
