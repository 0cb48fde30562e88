#include <array>
#include <cmath>
#include <numbers>

#include "nlab/spectral.hpp"

namespace nlab {

namespace {

// 20-point Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton
// iteration on the Legendre recurrence (machine precision).
struct Gauss20 {
  std::array<double, 20> x{}, w{};
  Gauss20() {
    constexpr int n = 20;
    for (int i = 0; i < n / 2; ++i) {
      // Chebyshev-like initial guess for the i-th positive root.
      double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double p0 = 0, p1 = 0;
      for (int it = 0; it < 100; ++it) {
        p0 = 1;
        p1 = 0;
        for (int k = 0; k < n; ++k) {  // Legendre recurrence up to P_n
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
        }
        const double dp = n * (t * p0 - p1) / (t * t - 1.0);
        const double step = p0 / dp;
        t -= step;
        if (std::abs(step) < 1e-15) break;
      }
      p0 = 1;
      p1 = 0;
      for (int k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * t * p1 - k * p2) / (k + 1.0);
      }
      const double dp = n * (t * p0 - p1) / (t * t - 1.0);
      x[i] = -t;
      x[n - 1 - i] = t;
      w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
  }
};

double j0_series(double x) {
  // J0(x) = sum_k (-1)^k (x^2/4)^k / (k!)^2; at x = 8 the largest term is
  // ~114, so cancellation stays below ~1e-13 absolute.
  const double q = x * x / 4.0;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 80; ++k) {
    term *= -q / (static_cast<double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-19) break;
  }
  return sum;
}

double j0_integral(double x) {
  // J0(x) = (1/pi) * int_0^pi cos(x sin t) dt, composite Gauss-Legendre with
  // panel widths keeping |x| * width <= ~8 so 20 points per panel are exact
  // to machine precision.
  static const Gauss20 g;
  const int panels = static_cast<int>(std::ceil(std::numbers::pi * x / 8.0)) + 4;
  const double width = std::numbers::pi / panels;
  double sum = 0;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * width;
    double local = 0;
    for (int q = 0; q < 20; ++q)
      local += g.w[q] * std::cos(x * std::sin(mid + 0.5 * width * g.x[q]));
    sum += local * 0.5 * width;
  }
  return sum / std::numbers::pi;
}

}  // namespace

double bessel_j0(double x) {
  x = std::abs(x);  // J0 is even
  return x <= 8.0 ? j0_series(x) : j0_integral(x);
}

double j0_first_zero() {
  // J0(2) > 0 > J0(3); bisection to machine width. |J0'| ~ 0.52 near the
  // root, so the residual at the midpoint is a few 1e-16.
  double lo = 2.0, hi = 3.0;
  double flo = bessel_j0(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = bessel_j0(mid);
    if ((flo > 0) == (fm > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace nlab
