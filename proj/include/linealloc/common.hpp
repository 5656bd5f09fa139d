#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace linealloc {

using cplx = std::complex<double>;

// Thrown when an iterative/numeric procedure cannot produce a trustworthy
// result (non-convergence, ill-conditioning, duplicate roots, ...).
// Precondition violations use std::invalid_argument instead.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr const char* kToolVersion = "linealloc 0.1.0";

// Bisection on [lo, hi]; f(lo) and f(hi) must have opposite signs.
template <typename F>
double bisect(F&& f, double lo, double hi, double tol = 1e-12,
              int max_iter = 200) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo > 0) == (fhi > 0))
    throw NumericError("bisect: no sign change on bracket");
  for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (fm == 0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Truncated power series with double coefficients, c[0] + c[1] x + ...
// Orders stay fixed at construction; products drop terms beyond the order.
struct Series {
  std::vector<double> c;

  explicit Series(int order) : c(order + 1, 0.0) {}
  int order() const { return static_cast<int>(c.size()) - 1; }

  static Series constant(double v, int order) {
    Series s(order);
    s.c[0] = v;
    return s;
  }

  Series& operator+=(const Series& o) {
    for (size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
    return *this;
  }
  Series& operator-=(const Series& o) {
    for (size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
    return *this;
  }
  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator*(const Series& a, const Series& b) {
    Series r(a.order());
    for (int i = 0; i <= a.order(); ++i) {
      if (a.c[i] == 0) continue;
      for (int j = 0; i + j <= a.order(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    return r;
  }
  Series& operator*=(double v) {
    for (auto& x : c) x *= v;
    return *this;
  }
  friend Series operator*(Series a, double v) { return a *= v; }

  // (1 + x)^k truncated; k >= 0.
  static Series binomial_pow(int k, int order) {
    Series r = constant(1.0, order);
    double coef = 1.0;
    for (int j = 1; j <= order; ++j) {
      coef *= double(k - j + 1) / j;
      if (j > k) break;
      r.c[j] = coef;
    }
    return r;
  }

  // Series division a / b, requires b.c[0] != 0.
  friend Series divide(const Series& a, const Series& b) {
    if (b.c[0] == 0) throw NumericError("series divide: zero constant term");
    Series q(a.order());
    for (int j = 0; j <= a.order(); ++j) {
      double acc = a.c[j];
      for (int i = 0; i < j; ++i) acc -= q.c[i] * b.c[j - i];
      q.c[j] = acc / b.c[0];
    }
    return q;
  }

  // Drop the leading `k` coefficients (requires them ~0): series / x^k.
  Series shift_down(int k) const {
    Series r(order());
    for (int i = k; i <= order(); ++i) r.c[i - k] = c[i];
    return r;
  }
};

}  // namespace linealloc
