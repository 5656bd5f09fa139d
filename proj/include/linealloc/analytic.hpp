#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "linealloc/common.hpp"
#include "linealloc/distributions.hpp"
#include "linealloc/quadrature.hpp"

namespace linealloc {

// ---------------------------------------------------------------------------
// Poisson users, exponential server spacing, batches up to c: the occupancy
// is geometric in the root of mu r^(c+1) - (lambda+mu) r + lambda.
// ---------------------------------------------------------------------------

struct BulkMM1Solution {
  double lambda = 0, mu = 0;
  int c = 1;
  double root = 0;        // geometric ratio in (0, 1)
  double mean_count = 0;  // users in transit
  double mean_delay = 0;  // user arrival to matched server

  double count_pmf(int n) const {
    return n < 0 ? 0.0 : (1 - root) * std::pow(root, n);
  }
};

inline BulkMM1Solution bulk_mm1(double lambda, double mu, int c) {
  if (lambda <= 0 || mu <= 0 || c < 1)
    throw std::invalid_argument("rates must be positive, capacity >= 1");
  if (lambda >= c * mu) throw std::invalid_argument("unstable: lambda >= c*mu");
  BulkMM1Solution sol{lambda, mu, c};
  auto g = [&](double r) {
    return mu * std::pow(r, c + 1) - (lambda + mu) * r + lambda;
  };
  sol.root = bisect(g, 1e-14, 1.0 - 1e-14, 1e-15);
  sol.mean_count = sol.root / (1 - sol.root);
  sol.mean_delay = sol.mean_count / lambda;
  return sol;
}

// ---------------------------------------------------------------------------
// Renewal users, exponential server spacing (rate mu), batches up to c:
// embedded pre-arrival occupancy is geometric in the root of
// r = Y*(mu - mu r^c), with Y* the inter-user transform.
// ---------------------------------------------------------------------------

struct GM1BatchSolution {
  double lambda = 0, mu = 0;
  int c = 1;
  double root = 0;
  double norm_const = 0;  // lambda (1-r) r^c
  double omega = 0;       // 1 / Y*(mu)
  double mean_queue = 0;  // waiting users only
  double mean_count = 0;  // waiting plus in service
  double mean_delay = 0;
  double p0 = 0;

  double count_pmf(int n) const {
    if (n < 0) return 0;
    if (n == 0) return p0;
    return lambda * (1 - root) * (1 - root) * std::pow(root, n - 1) /
           (mu * (1 - std::pow(root, c)));
  }
  double prearrival_pmf(int j) const {
    return j < 0 ? 0.0 : (1 - root) * std::pow(root, j);
  }
};

inline GM1BatchSolution gm1_batch(const DistanceLaw& user_law, double mu, int c) {
  if (mu <= 0 || c < 1)
    throw std::invalid_argument("rate must be positive, capacity >= 1");
  GM1BatchSolution sol;
  sol.lambda = 1.0 / user_law.mean();
  sol.mu = mu;
  sol.c = c;
  if (sol.lambda >= c * mu)
    throw std::invalid_argument("unstable: lambda >= c*mu");
  auto h = [&](double r) {
    return r - user_law.lst(mu - mu * std::pow(r, c));
  };
  sol.root = bisect(h, 1e-14, 1.0 - 1e-14, 1e-15);
  double r = sol.root, rc = std::pow(r, c);
  sol.norm_const = sol.lambda * (1 - r) * rc;
  sol.omega = 1.0 / user_law.lst(mu);
  sol.mean_queue = sol.lambda * rc / (mu * (1 - rc));
  sol.mean_delay = 1.0 / (mu * (1 - rc));
  sol.mean_count = sol.lambda * sol.mean_delay;
  sol.p0 = 1 - sol.lambda * (1 - r) / (mu * (1 - rc));
  return sol;
}

// ---------------------------------------------------------------------------
// Matched-distance density under the LIFO sweep at unit capacity.
// ---------------------------------------------------------------------------

// exp(-y) I_1(y), stable for all y >= 0.
inline double scaled_bessel_i1(double y) {
  if (y <= 0) return 0;
  if (y > 700) {
    double iy = 1.0 / y;
    return (1 - iy * (3.0 / 8 + iy * (15.0 / 128 + iy * 105.0 / 1024))) /
           std::sqrt(2 * std::numbers::pi * y);
  }
  // term_k = (y/2)^(2k+1) e^(-y) / (k! (k+1)!), built multiplicatively
  double half = 0.5 * y;
  double term = half * std::exp(-y);
  double acc = term;
  for (int k = 0; k < 5000; ++k) {
    term *= half * half / (double(k + 1) * (k + 2));
    acc += term;
    if (term < 1e-17 * acc) break;
  }
  return acc;
}

inline double ugs_distance_pdf(double lambda, double mu, double x) {
  if (lambda <= 0 || mu <= 0 || lambda >= mu)
    throw std::invalid_argument("need 0 < lambda < mu");
  if (x <= 0) return 0;
  double y = 2 * x * std::sqrt(lambda * mu);
  double decay = std::sqrt(mu) - std::sqrt(lambda);
  return scaled_bessel_i1(y) * std::exp(-x * decay * decay) /
         (x * std::sqrt(lambda / mu));
}

// ---------------------------------------------------------------------------
// Zeros of z^c - g(z) strictly inside the closed unit disk (z = 1 excluded),
// one per nonprincipal c-th root of unity, by the damped-free fixed point
// z <- w_j g(z)^(1/c).
// ---------------------------------------------------------------------------

inline std::vector<cplx> unit_disk_zeros(const std::function<cplx(cplx)>& g,
                                         int c, double tol = 1e-13,
                                         int max_iter = 200000) {
  std::vector<cplx> zeros;
  zeros.reserve(c - 1);
  for (int j = 1; j < c; ++j) {
    cplx w = std::polar(1.0, 2 * std::numbers::pi * j / c);
    cplx z = 0.5 * w;
    bool converged = false;
    for (int it = 0; it < max_iter; ++it) {
      cplx nz = w * std::pow(g(z), 1.0 / c);
      if (std::abs(nz - z) < tol) {
        z = nz;
        converged = true;
        break;
      }
      z = nz;
    }
    if (!converged) throw NumericError("batch zero iteration did not converge");
    zeros.push_back(z);
  }
  for (size_t i = 0; i < zeros.size(); ++i)
    for (size_t j = i + 1; j < zeros.size(); ++j)
      if (std::abs(zeros[i] - zeros[j]) < 1e-8)
        throw NumericError("batch zeros collide; parameters out of range");
  return zeros;
}

// ---------------------------------------------------------------------------
// Poisson users (rate lambda), renewal server spacing F_X, batches up to c,
// with the head-of-cycle interval drawn from the size-biased overlap law F_Z.
// Occupancy transform N(z) = num(z) / den(z) with
//   num(z) = sum_k a_k [z^c - z^k + z(1-z^c) Z*(th) - (1-z^k) X*(th)],
//   den(z) = th(z) (z^c - X*(th)),  th(z) = lambda (1 - z),
// the a_k fixed by the interior zeros of den plus normalization.
// ---------------------------------------------------------------------------

struct MG1BatchSolution {
  double lambda = 0, mu = 0, rho = 0, rho_z = 0;
  int c = 1;
  std::vector<cplx> inner_zeros;  // c-1 zeros of z^c - X*(lambda(1-z))
  std::vector<double> coeff;      // a_1..a_c
  double mean_count = 0;
  double mean_delay = 0;
  std::array<double, 6> mz{}, mx{};      // moments 0..5
  std::array<double, 6> num_w{}, den_w{};  // series in w = 1-z
  std::function<cplx(cplx)> lst_z, lst_x;

  cplx pgf(cplx z) const {
    cplx w = 1.0 - z;
    if (std::abs(w) < 1e-3) {
      cplx num = 0, den = 0;
      for (int i = 5; i >= 2; --i) {
        num = num * w + num_w[i];
        den = den * w + den_w[i];
      }
      return num / den;
    }
    cplx th = lambda * w;
    cplx fz = lst_z(th), fx = lst_x(th);
    std::vector<cplx> zp(c + 1);
    zp[0] = 1.0;
    for (int k = 1; k <= c; ++k) zp[k] = zp[k - 1] * z;
    cplx num = 0;
    for (int k = 1; k <= c; ++k)
      num += coeff[k - 1] * (zp[c] - zp[k] + z * (1.0 - zp[c]) * fz -
                             (1.0 - zp[k]) * fx);
    cplx den = th * (zp[c] - fx);
    return num / den;
  }

  double pgf_at_one() const { return num_w[2] / den_w[2]; }

  double mean_count_via_series() const {
    return -(num_w[3] * den_w[2] - num_w[2] * den_w[3]) / (den_w[2] * den_w[2]);
  }

  // Occupancy probabilities by inverse transform over a circle whose radius
  // stays clear of the interior zero moduli.
  std::vector<double> count_pmf(int n_max) const {
    const int m_points = 4096;
    // Largest radius clear of the interior zero moduli: coefficient noise
    // scales like radius^-n, so high and clear beats low and clear.
    double radius = 0.9;
    double best = -1;
    for (int s = 100; s >= 0; --s) {
      double r = 0.8 + 0.17 * s / 100;
      double dist = 1;
      for (const auto& xi : inner_zeros)
        dist = std::min(dist, std::abs(std::abs(xi) - r));
      if (dist > best) {
        best = dist;
        radius = r;
      }
    }
    if (best < 1e-6) throw NumericError("no usable inversion radius");
    std::vector<cplx> vals(m_points);
    for (int m = 0; m < m_points; ++m) {
      double ang = 2 * std::numbers::pi * m / m_points;
      vals[m] = pgf(std::polar(radius, ang));
    }
    std::vector<double> p(n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
      cplx acc = 0;
      for (int m = 0; m < m_points; ++m) {
        double ang = -2 * std::numbers::pi * m * n / m_points;
        acc += vals[m] * std::polar(1.0, ang);
      }
      p[n] = acc.real() / (m_points * std::pow(radius, n));
    }
    return p;
  }
};

inline MG1BatchSolution mg1_batch(const DistanceLaw& server_law, double lambda,
                                  int c, bool exceptional_first = true) {
  if (lambda <= 0 || c < 1)
    throw std::invalid_argument("rate must be positive, capacity >= 1");
  MG1BatchSolution sol;
  sol.lambda = lambda;
  sol.mu = 1.0 / server_law.mean();
  sol.c = c;
  sol.rho = lambda * server_law.mean();
  if (sol.rho >= c) throw std::invalid_argument("unstable: lambda >= c*mu");

  ExceptionalLaw first(server_law, lambda);
  for (int j = 0; j <= 5; ++j) {
    sol.mx[j] = j == 0 ? 1.0 : server_law.moment(j);
    if (exceptional_first)
      sol.mz[j] = j == 0 ? 1.0 : first.moment(j);
    else
      sol.mz[j] = sol.mx[j];
  }
  sol.rho_z = lambda * sol.mz[1];
  sol.lst_x = [server_law](cplx s) { return server_law.lst(s); };
  if (exceptional_first)
    sol.lst_z = [first](cplx s) { return first.lst(s); };
  else
    sol.lst_z = sol.lst_x;

  auto g = [&](cplx z) { return sol.lst_x(lambda * (1.0 - z)); };
  sol.inner_zeros = unit_disk_zeros(g, c);

  // Rows: one per interior zero, scaled by (1 - xi^c) for conditioning,
  // then the normalization N(1) = 1 in series form.
  Eigen::MatrixXcd A(c, c);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(c);
  for (int i = 0; i + 1 < c; ++i) {
    cplx xi = sol.inner_zeros[i];
    cplx fz = sol.lst_z(lambda * (1.0 - xi));
    cplx xik = xi;
    for (int k = 1; k <= c; ++k) {
      A(i, k - 1) = xi * fz - xik;
      xik *= xi;
    }
  }
  for (int k = 1; k <= c; ++k)
    A(c - 1, k - 1) = c * (1 + sol.rho_z) - sol.rho * k;
  b(c - 1) = lambda * (c - sol.rho);

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  double cond = svd.singularValues()(0) / svd.singularValues()(c - 1);
  if (!std::isfinite(cond) || cond > 1e12)
    throw NumericError("coefficient system is ill-conditioned");
  Eigen::VectorXcd a = A.colPivHouseholderQr().solve(b);
  sol.coeff.resize(c);
  for (int k = 0; k < c; ++k) {
    if (std::abs(a(k).imag()) > 1e-8 * std::max(1.0, std::abs(a(k).real())))
      throw NumericError("coefficient solve left an imaginary residue");
    sol.coeff[k] = a(k).real();
  }

  // Mean occupancy from the transform derivative at 1 in closed form.
  double acc = 0;
  double l2 = lambda * lambda, rho = sol.rho, rz = sol.rho_z;
  for (int k = 1; k <= c; ++k) {
    double term = l2 * sol.mz[2] * c * (c - rho) +
                  l2 * sol.mx[2] * c * (1 + rz - k) +
                  (double(c) * k * (c - k) + double(k) * (k - 1) * rho -
                   double(c) * (c - 1)) *
                      rho +
                  2.0 * c * c * rz - double(c) * (c + 1) * rz * rho;
    acc += sol.coeff[k - 1] * term;
  }
  sol.mean_count = acc / (2 * lambda * (c - rho) * (c - rho));
  sol.mean_delay = sol.mean_count / lambda;
  if (!std::isfinite(sol.mean_count) || sol.mean_count < 0)
    throw NumericError("mean occupancy came out negative or non-finite");

  // Series of num/den in w = 1-z from moments, orders 0..5.
  const int ord = 5;
  auto one_minus_pow = [&](int k) {
    Series s = Series::binomial_pow(k, ord);
    for (int j = 1; j <= ord; j += 2) s.c[j] = -s.c[j];
    return s;
  };
  auto lst_series = [&](const std::array<double, 6>& m) {
    Series s(ord);
    double sign = 1, fact = 1;
    for (int j = 0; j <= ord; ++j) {
      s.c[j] = sign * m[j] * std::pow(lambda, j) / fact;
      sign = -sign;
      fact *= j + 1;
    }
    return s;
  };
  Series zc = one_minus_pow(c);
  Series fzs = lst_series(sol.mz), fxs = lst_series(sol.mx);
  Series one = Series::constant(1.0, ord);
  Series z1 = one_minus_pow(1);
  Series num(ord);
  for (int k = 1; k <= c; ++k) {
    Series zk = one_minus_pow(k);
    Series t = zc - zk + z1 * (one - zc) * fzs - (one - zk) * fxs;
    num += t * sol.coeff[k - 1];
  }
  Series den_core = (zc - fxs) * lambda;  // divide by w, then shift up by one
  for (int j = 0; j <= ord; ++j) sol.num_w[j] = num.c[j];
  sol.den_w[0] = 0;
  for (int j = 1; j <= ord; ++j) sol.den_w[j] = den_core.c[j - 1];
  if (std::abs(sol.num_w[0]) > 1e-9 || std::abs(sol.num_w[1]) > 1e-9 ||
      std::abs(sol.den_w[1]) > 1e-9)
    throw NumericError("transform series lost its structural zeros");
  return sol;
}

// ---------------------------------------------------------------------------
// Limits and cost functionals.
// ---------------------------------------------------------------------------

// Diffusion-style delay at utilization near one, unit capacity.
inline double heavy_traffic_delay(const DistanceLaw& user_law,
                                  const DistanceLaw& server_law) {
  double ay = user_law.mean(), ax = server_law.mean();
  if (ax >= ay) throw std::invalid_argument("unstable: need rho < 1");
  double rho = ax / ay;
  return ax + (server_law.variance() + user_law.variance()) /
                  (2 * ay * (1 - rho));
}

// Unbounded batches: with exponential server spacing every user only waits
// for the next server.
inline double uncapacitated_delay_exponential_servers(double mu) {
  if (mu <= 0) throw std::invalid_argument("rate must be positive");
  return 1.0 / mu;
}

// Unbounded batches under Poisson users: the forward recurrence distance of
// the server process.
inline double uncapacitated_delay_poisson_users(const DistanceLaw& server_law) {
  return server_law.moment(2) / (2 * server_law.mean());
}

// Two parallel server lines fed by one Poisson user stream, both exponential;
// a user finishes when the later of its two copies is matched.
inline double forkjoin_delay(double lambda, double mu) {
  if (lambda <= 0 || mu <= 0 || lambda >= mu)
    throw std::invalid_argument("need 0 < lambda < mu");
  return (12 * mu - lambda) / (8 * mu * (mu - lambda));
}

// E[t0 D^beta] with renewal users and exponential servers at unit capacity:
// the delay is exponential with rate mu (1 - r0).
inline double cost_gm1(const DistanceLaw& user_law, double mu, double t0,
                       double beta) {
  if (beta <= -1) throw std::invalid_argument("beta must exceed -1");
  auto sol = gm1_batch(user_law, mu, 1);
  return t0 * std::tgamma(beta + 1) / std::pow(mu * (1 - sol.root), beta);
}

// E[t0 D^beta] with Poisson users and renewal servers at unit capacity, via
// the delay transform
//   W*(s) = (1-rho) [lambda (Z* - X*) - s Z*] / ((1-rho+rho_z)[lambda-s-lambda X*]),
// expanding numerator and denominator over s and dividing the series.
inline double cost_mg1(const DistanceLaw& server_law, double lambda, double t0,
                       int beta, bool exceptional_first = true) {
  if (beta < 1 || beta > 4)
    throw std::invalid_argument("beta must be an integer in [1, 4]");
  double ax = server_law.mean();
  double rho = lambda * ax;
  if (lambda <= 0 || rho >= 1) throw std::invalid_argument("need 0 < rho < 1");
  ExceptionalLaw first(server_law, lambda);
  std::array<double, 6> mzv{}, mxv{};
  for (int j = 0; j <= beta + 1; ++j) {
    mxv[j] = j == 0 ? 1.0 : server_law.moment(j);
    mzv[j] = exceptional_first ? (j == 0 ? 1.0 : first.moment(j)) : mxv[j];
  }
  double rho_z = lambda * mzv[1];
  Series p(beta), q(beta);
  double fact = 1;  // j!
  for (int j = 0; j <= beta; ++j) {
    double sj = (j % 2) ? -1.0 : 1.0;  // (-1)^j
    double fj1 = fact * (j + 1);       // (j+1)!
    p.c[j] = (1 - rho) * (lambda * (-sj) * (mzv[j + 1] - mxv[j + 1]) / fj1 -
                          sj * mzv[j] / fact);
    if (j == 0)
      q.c[j] = (1 - rho + rho_z) * (rho - 1);
    else
      q.c[j] = (1 - rho + rho_z) * lambda * sj * mxv[j + 1] / fj1;
    fact = fj1;
  }
  Series u = divide(p, q);
  double sign = (beta % 2) ? -1.0 : 1.0;
  return t0 * std::tgamma(beta + 1) * sign * u.c[beta];
}

}  // namespace linealloc
