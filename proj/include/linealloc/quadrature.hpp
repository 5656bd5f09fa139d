#pragma once

#include <cmath>
#include <complex>
#include <functional>

#include "linealloc/common.hpp"

namespace linealloc {

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1].
inline constexpr double kGK15Nodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,                0.207784955007898,
    0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
inline constexpr double kGK15Weights[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
inline constexpr double kG7Weights[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

template <typename T, typename F>
void gk15(F&& f, double a, double b, T& kronrod, double& err) {
  const double h = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  T k{};
  T g{};
  for (int i = 0; i < 15; ++i) {
    T v = f(mid + h * kGK15Nodes[i]);
    k += kGK15Weights[i] * v;
    if (i % 2 == 1) g += kG7Weights[i / 2] * v;
  }
  kronrod = h * k;
  err = std::abs(h * (k - g));
}

template <typename T, typename F>
T adaptive(F&& f, double a, double b, double abs_tol, int depth) {
  T whole;
  double err;
  gk15<T>(f, a, b, whole, err);
  if (err <= abs_tol || depth >= 48) {
    if (depth >= 48 && err > abs_tol * 1e3)
      throw NumericError("quadrature: failed to reach tolerance");
    return whole;
  }
  const double mid = 0.5 * (a + b);
  return adaptive<T>(f, a, mid, abs_tol / 2, depth + 1) +
         adaptive<T>(f, mid, b, abs_tol / 2, depth + 1);
}

}  // namespace detail

// Adaptive Gauss-Kronrod integration of f over the finite interval [a, b]
// to absolute tolerance abs_tol. T is double or std::complex<double>.
template <typename T = double, typename F>
T integrate(F&& f, double a, double b, double abs_tol = 1e-10) {
  if (!(b >= a)) throw std::invalid_argument("integrate: bad interval");
  if (a == b) return T{};
  return detail::adaptive<T>(f, a, b, abs_tol, 0);
}

}  // namespace linealloc
