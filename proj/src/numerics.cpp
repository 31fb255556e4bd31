#include "bfdc/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bfdc::num {

double hermite(double x0, double x1, double y0, double y1, double m0,
               double m1, double x) {
  const double d = x1 - x0;
  const double s = (x - x0) / d;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return y0 * h00 + d * m0 * h10 + y1 * h01 + d * m1 * h11;
}

double hermite_deriv(double x0, double x1, double y0, double y1, double m0,
                     double m1, double x) {
  const double d = x1 - x0;
  const double s = (x - x0) / d;
  const double s2 = s * s;
  const double h00 = 6 * s2 - 6 * s;
  const double h10 = 3 * s2 - 4 * s + 1;
  const double h01 = -6 * s2 + 6 * s;
  const double h11 = 3 * s2 - 2 * s;
  return y0 * h00 / d + m0 * h10 + y1 * h01 / d + m1 * h11;
}

double hermite_second(double x0, double x1, double y0, double y1, double m0,
                      double m1, double x) {
  const double d = x1 - x0;
  const double s = (x - x0) / d;
  const double h00 = 12 * s - 6;
  const double h10 = 6 * s - 4;
  const double h01 = -12 * s + 6;
  const double h11 = 6 * s - 2;
  return y0 * h00 / (d * d) + m0 * h10 / d + y1 * h01 / (d * d) +
         m1 * h11 / d;
}

std::vector<double> pchip_tangents(std::span<const double> xs,
                                   std::span<const double> ys) {
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n)
    throw std::invalid_argument("pchip_tangents: need >= 2 matching points");
  std::vector<double> h(n - 1), d(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = xs[k + 1] - xs[k];
    if (h[k] <= 0.0)
      throw std::invalid_argument("pchip_tangents: knots must increase");
    d[k] = (ys[k + 1] - ys[k]) / h[k];
  }
  std::vector<double> m(n, 0.0);
  if (n == 2) {
    m[0] = m[1] = d[0];
    return m;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (d[k - 1] == 0.0 || d[k] == 0.0 || (d[k - 1] < 0) != (d[k] < 0)) {
      m[k] = 0.0;
    } else {
      const double w1 = 2 * h[k] + h[k - 1];
      const double w2 = h[k] + 2 * h[k - 1];
      m[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
    }
  }
  auto endpoint = [](double h0, double h1, double d0, double d1) {
    double t = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (t * d0 <= 0.0)
      t = 0.0;
    else if ((d0 < 0) != (d1 < 0) && std::abs(t) > 3 * std::abs(d0))
      t = 3 * d0;
    return t;
  };
  m[0] = endpoint(h[0], h[1], d[0], d[1]);
  m[n - 1] = endpoint(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
  return m;
}

PiecewiseCubic::PiecewiseCubic(std::vector<double> xs, std::vector<double> ys,
                               std::vector<double> ms)
    : xs_(std::move(xs)), ys_(std::move(ys)), ms_(std::move(ms)) {
  if (xs_.size() < 2 || ys_.size() != xs_.size() || ms_.size() != xs_.size())
    throw std::invalid_argument("PiecewiseCubic: inconsistent sizes");
}

std::size_t PiecewiseCubic::segment(double x) const {
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  if (it == xs_.begin()) return 0;
  std::size_t k = static_cast<std::size_t>(it - xs_.begin()) - 1;
  return std::min(k, xs_.size() - 2);
}

double PiecewiseCubic::value(double x) const {
  if (x < xs_.front()) return ys_.front() + ms_.front() * (x - xs_.front());
  if (x > xs_.back()) return ys_.back() + ms_.back() * (x - xs_.back());
  const std::size_t k = segment(x);
  return hermite(xs_[k], xs_[k + 1], ys_[k], ys_[k + 1], ms_[k], ms_[k + 1],
                 x);
}

double PiecewiseCubic::deriv(double x) const {
  if (x < xs_.front()) return ms_.front();
  if (x > xs_.back()) return ms_.back();
  const std::size_t k = segment(x);
  return hermite_deriv(xs_[k], xs_[k + 1], ys_[k], ys_[k + 1], ms_[k],
                       ms_[k + 1], x);
}

double PiecewiseCubic::second(double x) const {
  if (x < xs_.front() || x > xs_.back()) return 0.0;
  const std::size_t k = segment(x);
  return hermite_second(xs_[k], xs_[k + 1], ys_[k], ys_[k + 1], ms_[k],
                        ms_[k + 1], x);
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double target, double xtol) {
  if (!(lo < hi)) throw std::invalid_argument("bisect: empty interval");
  double flo = f(lo) - target;
  double fhi = f(hi) - target;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0) == (fhi < 0))
    throw std::invalid_argument("bisect: endpoints do not bracket target");
  for (int it = 0; it < 200 && (hi - lo) > xtol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid) - target;
    if (fm == 0.0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

LinearFit linear_fit(std::span<const double> t, std::span<const double> y) {
  const std::size_t n = t.size();
  if (n < 2 || y.size() != n)
    throw std::invalid_argument("linear_fit: need >= 2 matching points");
  double st = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    st += t[i];
    sy += y[i];
  }
  const double tbar = st / n, ybar = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (t[i] - tbar) * (t[i] - tbar);
    sxy += (t[i] - tbar) * (y[i] - ybar);
  }
  if (sxx == 0.0) throw std::invalid_argument("linear_fit: degenerate times");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = ybar - fit.slope * tbar;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * t[i]);
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

std::vector<double> extrapolate_to_zero(std::span<const double> t,
                                        std::span<const double> r,
                                        int max_degree) {
  const std::size_t n = t.size();
  if (r.size() != n) throw std::invalid_argument("extrapolate: size mismatch");
  if (max_degree < 1) throw std::invalid_argument("extrapolate: degree >= 1");
  std::vector<double> est(n);
  std::vector<double> p;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = (i >= static_cast<std::size_t>(max_degree))
                               ? i - max_degree
                               : 0;
    const std::size_t m = i - lo + 1;
    p.assign(r.begin() + lo, r.begin() + i + 1);
    // Neville evaluation at t = 0 over the window [lo, i].
    for (std::size_t k = 1; k < m; ++k) {
      for (std::size_t j = 0; j + k < m; ++j) {
        const double tj = t[lo + j], tjk = t[lo + j + k];
        p[j] = (tj * p[j + 1] - tjk * p[j]) / (tj - tjk);
      }
    }
    est[i] = p[0];
  }
  return est;
}

}  // namespace bfdc::num
