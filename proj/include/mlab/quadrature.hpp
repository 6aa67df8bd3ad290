#pragma once

#include <cmath>
#include <utility>
#include <vector>

namespace mlab::quad {

struct Result {
  double value = 0;
  double error = 0;
  bool converged = true;
  long evals = 0;

  Result& operator+=(const Result& o) {
    value += o.value;
    error += o.error;
    converged = converged && o.converged;
    evals += o.evals;
    return *this;
  }
};

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1,1].
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class F>
std::pair<double, double> gk15(F&& f, double a, double b, long& evals) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double fc = f(c);
  evals += 15;
  double kron = kWgk[7] * fc, gauss = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    double x = h * kXgk[j];
    double f1 = f(c - x), f2 = f(c + x);
    kron += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  kron *= h;
  gauss *= h;
  return {kron, std::fabs(kron - gauss)};
}

template <class F>
void refine(F&& f, double a, double b, double tol, int depth, Result& out) {
  auto [v, e] = gk15(f, a, b, out.evals);
  if (e <= tol || depth <= 0) {
    out.value += v;
    out.error += e;
    if (e > tol && depth <= 0) out.converged = false;
    return;
  }
  double m = 0.5 * (a + b);
  refine(f, a, m, 0.5 * tol, depth - 1, out);
  refine(f, m, b, 0.5 * tol, depth - 1, out);
}

}  // namespace detail

// Adaptive Gauss-Kronrod with interval bisection until the local error
// estimate drops below the (length-distributed) tolerance.
template <class F>
Result integrate(F&& f, double a, double b, double abs_tol = 1e-12, double rel_tol = 1e-8,
                 int max_depth = 40) {
  Result out;
  if (a == b) return out;
  auto [v0, e0] = detail::gk15(f, a, b, out.evals);
  double tol = std::max(abs_tol, rel_tol * std::fabs(v0));
  if (e0 <= tol) {
    out.value = v0;
    out.error = e0;
    return out;
  }
  double m = 0.5 * (a + b);
  detail::refine(f, a, m, 0.5 * tol, max_depth, out);
  detail::refine(f, m, b, 0.5 * tol, max_depth, out);
  return out;
}

// Monotone cubic interpolant (Fritsch-Carlson) on an increasing grid.
class Pchip {
 public:
  Pchip() = default;
  Pchip(std::vector<double> x, std::vector<double> y);

  double operator()(double t) const;  // constant extrapolation outside
  double min_x() const { return x_.empty() ? 0 : x_.front(); }
  double max_x() const { return x_.empty() ? 0 : x_.back(); }

 private:
  std::vector<double> x_, y_, d_;
};

}  // namespace mlab::quad
