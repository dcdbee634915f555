#include "irsho/quadrature.hpp"

#include <cmath>

namespace irsho {

namespace {

double simpson(double fa, double fm, double fb, double h6) {
  return h6 * (fa + 4.0 * fm + fb);
}

double adapt(const Fn1& f, double a, double m, double b, double fa, double fm,
             double fb, double whole, double rtol, double atol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(fa, flm, fm, (m - a) / 6.0);
  const double right = simpson(fm, frm, fb, (b - m) / 6.0);
  const double err = left + right - whole;
  if (depth <= 0 ||
      std::abs(err) <= 15.0 * std::max(atol, rtol * std::abs(left + right))) {
    return left + right + err / 15.0;  // Richardson correction
  }
  return adapt(f, a, lm, m, fa, flm, fm, left, rtol, 0.5 * atol, depth - 1) +
         adapt(f, m, rm, b, fm, frm, fb, right, rtol, 0.5 * atol, depth - 1);
}

}  // namespace

double adaptive_simpson(const Fn1& f, double a, double b, double rtol,
                        double atol, int max_depth) {
  if (!(b > a)) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = simpson(fa, fm, fb, (b - a) / 6.0);
  return adapt(f, a, m, b, fa, fm, fb, whole, rtol, atol, max_depth);
}

double midpoint(const Fn1& f, double a, double b, int n) {
  if (!(b > a) || n <= 0) return 0.0;
  const double h = (b - a) / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += f(a + (i + 0.5) * h);
  return sum * h;
}

double midpoint_refined(const Fn1& f, double a, double b, int n, double rel_tol) {
  const double coarse = midpoint(f, a, b, n);
  const double fine = midpoint(f, a, b, 2 * n);
  const double scale = std::max(std::abs(coarse), std::abs(fine));
  if (scale > 0.0 && std::abs(fine - coarse) > rel_tol * scale) return fine;
  return coarse;
}

}  // namespace irsho
