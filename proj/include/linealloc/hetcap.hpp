#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "linealloc/analytic.hpp"
#include "linealloc/common.hpp"
#include "linealloc/distributions.hpp"
#include "linealloc/quadrature.hpp"

namespace linealloc {

// Per-server capacity distribution on {1, ..., cmax}.
struct CapacityDist {
  std::vector<double> pmf;  // pmf[j] = P(C = j+1)

  static CapacityDist fixed(int c) {
    if (c < 1) throw std::invalid_argument("capacity must be >= 1");
    CapacityDist d;
    d.pmf.assign(c, 0.0);
    d.pmf[c - 1] = 1.0;
    return d;
  }
  static CapacityDist uniform_range(int lo, int hi) {
    if (lo < 1 || hi < lo) throw std::invalid_argument("bad capacity range");
    CapacityDist d;
    d.pmf.assign(hi, 0.0);
    for (int v = lo; v <= hi; ++v) d.pmf[v - 1] = 1.0 / (hi - lo + 1);
    return d;
  }

  int cmax() const { return int(pmf.size()); }
  double mean() const {
    double m = 0;
    for (size_t j = 0; j < pmf.size(); ++j) m += (j + 1) * pmf[j];
    return m;
  }
  void validate() const {
    if (pmf.empty()) throw std::invalid_argument("empty capacity pmf");
    double tot = 0;
    for (double p : pmf) {
      if (p < 0) throw std::invalid_argument("negative capacity probability");
      tot += p;
    }
    if (std::abs(tot - 1) > 1e-12)
      throw std::invalid_argument("capacity pmf must sum to one");
  }
};

// P(V = v): users arriving within one server gap, V Poisson(lambda X) mixed
// over the gap law.
inline std::vector<double> arrival_batch_probs(const DistanceLaw& server_law,
                                               double lambda, int count) {
  if (lambda <= 0 || count < 1) throw std::invalid_argument("bad parameters");
  std::vector<double> k(count);
  switch (server_law.kind) {
    case LawKind::Deterministic: {
      double m = lambda * server_law.value;
      double term = std::exp(-m);
      for (int v = 0; v < count; ++v) {
        k[v] = term;
        term *= m / (v + 1);
      }
      break;
    }
    case LawKind::Exponential: {
      double mu = server_law.rate;
      double geo = lambda / (lambda + mu);
      double term = mu / (lambda + mu);
      for (int v = 0; v < count; ++v) {
        k[v] = term;
        term *= geo;
      }
      break;
    }
    case LawKind::HyperExp2: {
      double p[2] = {server_law.p1, 1 - server_law.p1};
      double mu[2] = {server_law.mu1, server_law.mu2};
      for (int i = 0; i < 2; ++i) {
        double geo = lambda / (lambda + mu[i]);
        double term = p[i] * mu[i] / (lambda + mu[i]);
        for (int v = 0; v < count; ++v) {
          k[v] += term;
          term *= geo;
        }
      }
      break;
    }
    case LawKind::Uniform: {
      double b = server_law.b;
      double logl = std::log(lambda);
      for (int v = 0; v < count; ++v) {
        double lg = std::lgamma(v + 1.0);
        k[v] = integrate<double>(
                   [&](double x) {
                     return x == 0 && v > 0
                                ? 0.0
                                : std::exp(-lambda * x + v * (logl + std::log(x)) -
                                           lg);
                   },
                   0.0, b, 1e-13) /
               b;
      }
      break;
    }
  }
  return k;
}

// Queue just after each server under the rightward FIFO sweep with per-server
// random capacity: H' = (H + V - C)+. Transform of the stationary H:
//   N(z) = [z^c E_pi - sum_j pi_j T_j(z)] / [z^c - K(z) Chat(z)]
// with K the arrival transform, Chat the reversed capacity polynomial, and
// pi_0..pi_{c-1} fixed by the interior zeros plus N(1) = 1.
struct VariableCapacitySolution {
  double lambda = 0, mu = 0, rho = 0;
  int c = 1;                      // largest capacity
  double cap_mean = 0, m2_x = 0;
  std::vector<double> k;          // arrival pmf 0..c-1
  std::vector<double> cap_pmf;    // capacity pmf 1..c
  std::vector<cplx> inner_zeros;
  std::vector<double> pi;         // boundary probabilities 0..c-1
  double mean_queue_after_server = 0;  // from one-sided Richardson differences
  double mean_delay = 0;
  std::function<cplx(cplx)> lst_x;

  // building blocks shared by the solver and the evaluators
  double s_jm(int j, int m) const {
    double acc = 0;
    for (int i = m + j; i <= c; ++i) acc += k[i - m - j] * cap_pmf[i - 1];
    return acc;
  }
  double g_j(int j) const {
    double acc = 0;
    for (int i = j; i <= c - 1; ++i) {
      double tail = 0;  // P(C >= i+1)
      for (int q = i + 1; q <= c; ++q) tail += cap_pmf[q - 1];
      acc += k[i - j] * tail;
    }
    return acc;
  }
  cplx t_j(int j, cplx z) const {
    cplx acc = 0;
    for (int m = 1; m <= c - j; ++m) acc += std::pow(z, c - m) * s_jm(j, m);
    return acc;
  }
  cplx chat(cplx z) const {
    cplx acc = 0;
    for (int i = 1; i <= c; ++i) acc += cap_pmf[i - 1] * std::pow(z, c - i);
    return acc;
  }

  cplx pgf(cplx z) const {
    cplx e_pi = 0, num = 0;
    for (int j = 0; j < c; ++j) e_pi += pi[j] * g_j(j);
    num = std::pow(z, c) * e_pi;
    for (int j = 0; j < c; ++j) num -= pi[j] * t_j(j, z);
    cplx den = std::pow(z, c) - lst_x(lambda * (1.0 - z)) * chat(z);
    return num / den;
  }

  double pgf_at_one() const {  // Num'(1)/Den'(1), analytic
    double num = 0;
    for (int j = 0; j < c; ++j) {
      double tp = 0;
      for (int m = 1; m <= c - j; ++m) tp += (c - m) * s_jm(j, m);
      num += pi[j] * (c * g_j(j) - tp);
    }
    return num / (cap_mean - rho);
  }

  // Analytic N'(1) by second-order l'Hopital; cross-check for the
  // Richardson value used in production.
  double mean_via_lhopital() const {
    double fp = 0, fpp = 0;
    double e_pi = 0;
    for (int j = 0; j < c; ++j) e_pi += pi[j] * g_j(j);
    for (int j = 0; j < c; ++j) {
      double tp = 0, tpp = 0;
      for (int m = 1; m <= c - j; ++m) {
        tp += (c - m) * s_jm(j, m);
        tpp += double(c - m) * (c - m - 1) * s_jm(j, m);
      }
      fp += pi[j] * (c * g_j(j) - tp);
      fpp += pi[j] * (double(c) * (c - 1) * g_j(j) - tpp);
    }
    double kp = rho, kpp = lambda * lambda * m2_x;
    double cp = 0, cpp = 0;
    for (int i = 1; i <= c; ++i) {
      cp += cap_pmf[i - 1] * (c - i);
      cpp += cap_pmf[i - 1] * double(c - i) * (c - i - 1);
    }
    double gp = cap_mean - rho;
    double gpp = double(c) * (c - 1) - (kpp + 2 * kp * cp + cpp);
    return (fpp * gp - fp * gpp) / (2 * gp * gp);
  }
};

inline VariableCapacitySolution hetcap_solve(const DistanceLaw& server_law,
                                             double lambda,
                                             const CapacityDist& cap) {
  cap.validate();
  if (lambda <= 0) throw std::invalid_argument("rate must be positive");
  VariableCapacitySolution sol;
  sol.lambda = lambda;
  sol.mu = 1.0 / server_law.mean();
  sol.rho = lambda * server_law.mean();
  sol.c = cap.cmax();
  sol.cap_mean = cap.mean();
  sol.cap_pmf = cap.pmf;
  if (sol.rho >= sol.cap_mean)
    throw std::invalid_argument("unstable: arrivals per gap exceed mean capacity");
  sol.k = arrival_batch_probs(server_law, lambda, sol.c);
  sol.m2_x = server_law.moment(2);
  sol.lst_x = [server_law](cplx s) { return server_law.lst(s); };

  const int c = sol.c;
  auto g = [&](cplx z) {
    return sol.lst_x(lambda * (1.0 - z)) * sol.chat(z);
  };
  sol.inner_zeros = unit_disk_zeros(g, c);

  Eigen::MatrixXcd A(c, c);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(c);
  sol.pi.assign(c, 0.0);
  for (int i = 0; i + 1 < c; ++i) {
    cplx xi = sol.inner_zeros[i];
    cplx xic = std::pow(xi, c);
    for (int j = 0; j < c; ++j) A(i, j) = xic * sol.g_j(j) - sol.t_j(j, xi);
  }
  for (int j = 0; j < c; ++j) {
    double tp = 0;
    for (int m = 1; m <= c - j; ++m) tp += (c - m) * sol.s_jm(j, m);
    A(c - 1, j) = c * sol.g_j(j) - tp;
  }
  b(c - 1) = sol.cap_mean - sol.rho;

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  double cond = svd.singularValues()(0) / svd.singularValues()(c - 1);
  if (!std::isfinite(cond) || cond > 1e12)
    throw NumericError("boundary system is ill-conditioned");
  Eigen::VectorXcd x = A.colPivHouseholderQr().solve(b);
  for (int j = 0; j < c; ++j) {
    if (std::abs(x(j).imag()) > 1e-8 * std::max(1.0, std::abs(x(j).real())))
      throw NumericError("boundary solve left an imaginary residue");
    sol.pi[j] = x(j).real();
  }

  if (std::abs(sol.pgf_at_one() - 1.0) > 1e-8)
    throw NumericError("transform normalization failed");

  // One-sided first derivative at 1 with two Richardson refinements.
  auto diff = [&](double h) {
    return (1.0 - sol.pgf(cplx(1.0 - h, 0)).real()) / h;
  };
  double h = 1e-4;
  double d1 = diff(h), d2 = diff(h / 2), d3 = diff(h / 4);
  double r1 = 2 * d2 - d1, r2 = 2 * d3 - d2;
  sol.mean_queue_after_server = (4 * r2 - r1) / 3;

  sol.mean_delay = (sol.mean_queue_after_server / sol.mu +
                    0.5 * lambda * sol.m2_x) /
                   sol.rho;
  if (!std::isfinite(sol.mean_delay) || sol.mean_delay < 0)
    throw NumericError("mean delay came out negative or non-finite");
  return sol;
}

}  // namespace linealloc
