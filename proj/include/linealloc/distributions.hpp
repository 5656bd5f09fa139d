#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "linealloc/common.hpp"
#include "linealloc/quadrature.hpp"

namespace linealloc {

enum class LawKind { Exponential, Deterministic, Uniform, HyperExp2 };

inline std::string law_kind_name(LawKind k) {
  switch (k) {
    case LawKind::Exponential: return "exponential";
    case LawKind::Deterministic: return "deterministic";
    case LawKind::Uniform: return "uniform";
    case LawKind::HyperExp2: return "h2";
  }
  return "?";
}

inline double uniform01(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;  // [0, 1)
}

// Law of a nonnegative inter-point distance. Immutable after construction.
struct DistanceLaw {
  LawKind kind = LawKind::Exponential;
  // Exponential: rate. Deterministic: value. Uniform on (0, b]: b.
  // HyperExp2: mix of Exp(mu1) w.p. p1 and Exp(mu2) w.p. 1-p1.
  double rate = 1.0;
  double value = 1.0;
  double b = 1.0;
  double p1 = 0.5, mu1 = 1.0, mu2 = 1.0;

  static DistanceLaw Exponential(double rate) {
    if (!(rate > 0)) throw std::invalid_argument("exponential rate must be > 0");
    DistanceLaw d;
    d.kind = LawKind::Exponential;
    d.rate = rate;
    return d;
  }
  static DistanceLaw Deterministic(double v) {
    if (!(v > 0)) throw std::invalid_argument("deterministic value must be > 0");
    DistanceLaw d;
    d.kind = LawKind::Deterministic;
    d.value = v;
    return d;
  }
  static DistanceLaw Uniform(double b) {
    if (!(b > 0)) throw std::invalid_argument("uniform upper bound must be > 0");
    DistanceLaw d;
    d.kind = LawKind::Uniform;
    d.b = b;
    return d;
  }
  static DistanceLaw HyperExp2(double p1, double mu1, double mu2) {
    if (!(p1 >= 0 && p1 <= 1 && mu1 > 0 && mu2 > 0))
      throw std::invalid_argument("bad hyperexponential parameters");
    DistanceLaw d;
    d.kind = LawKind::HyperExp2;
    d.p1 = p1;
    d.mu1 = mu1;
    d.mu2 = mu2;
    return d;
  }

  double mean() const {
    switch (kind) {
      case LawKind::Exponential: return 1.0 / rate;
      case LawKind::Deterministic: return value;
      case LawKind::Uniform: return 0.5 * b;
      case LawKind::HyperExp2: return p1 / mu1 + (1 - p1) / mu2;
    }
    return 0;
  }

  // Raw k-th moment, closed form for every kind.
  double moment(int k) const {
    if (k < 0) throw std::invalid_argument("moment order must be >= 0");
    if (k == 0) return 1.0;
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    switch (kind) {
      case LawKind::Exponential: return fact / std::pow(rate, k);
      case LawKind::Deterministic: return std::pow(value, k);
      case LawKind::Uniform: return std::pow(b, k) / (k + 1);
      case LawKind::HyperExp2:
        return fact * (p1 / std::pow(mu1, k) + (1 - p1) / std::pow(mu2, k));
    }
    return 0;
  }

  double variance() const {
    double m = mean();
    return moment(2) - m * m;
  }

  double cdf(double x) const {
    if (x <= 0) return 0.0;
    switch (kind) {
      case LawKind::Exponential: return -std::expm1(-rate * x);
      case LawKind::Deterministic: return x >= value ? 1.0 : 0.0;
      case LawKind::Uniform: return x >= b ? 1.0 : x / b;
      case LawKind::HyperExp2:
        return 1.0 - p1 * std::exp(-mu1 * x) - (1 - p1) * std::exp(-mu2 * x);
    }
    return 0;
  }

  // Density; the Deterministic atom has no density (returns 0 off the atom).
  double pdf(double x) const {
    if (x < 0) return 0.0;
    switch (kind) {
      case LawKind::Exponential: return rate * std::exp(-rate * x);
      case LawKind::Deterministic: return 0.0;
      case LawKind::Uniform: return x <= b ? 1.0 / b : 0.0;
      case LawKind::HyperExp2:
        return p1 * mu1 * std::exp(-mu1 * x) +
               (1 - p1) * mu2 * std::exp(-mu2 * x);
    }
    return 0;
  }

  // Laplace-Stieltjes transform E[e^{-sX}] for Re(s) >= 0.
  cplx lst(cplx s) const {
    switch (kind) {
      case LawKind::Exponential: return rate / (rate + s);
      case LawKind::Deterministic: return std::exp(-s * value);
      case LawKind::Uniform: {
        cplx x = s * b;
        if (std::abs(x) < 1e-3)  // direct form cancels catastrophically here
          return 1.0 - x * (1.0 / 2 - x * (1.0 / 6 - x * (1.0 / 24 - x / 120.0)));
        return (1.0 - std::exp(-x)) / x;
      }
      case LawKind::HyperExp2:
        return p1 * mu1 / (mu1 + s) + (1 - p1) * mu2 / (mu2 + s);
    }
    return 0;
  }

  double lst(double s) const { return lst(cplx(s, 0)).real(); }

  // Point beyond which the upper tail mass is below `tail`.
  double support_ub(double tail = 1e-12) const {
    switch (kind) {
      case LawKind::Exponential: return -std::log(tail) / rate;
      case LawKind::Deterministic: return value;
      case LawKind::Uniform: return b;
      case LawKind::HyperExp2: {
        double x = 1.0;
        while (p1 * std::exp(-mu1 * x) + (1 - p1) * std::exp(-mu2 * x) > tail)
          x *= 2;
        return x;
      }
    }
    return 0;
  }

  double sample(std::mt19937_64& rng) const {
    switch (kind) {
      case LawKind::Exponential:
        return -std::log1p(-uniform01(rng)) / rate;
      case LawKind::Deterministic: return value;
      case LawKind::Uniform: {
        // Support (0, b]: map u in [0,1) to b(1-u).
        return b * (1.0 - uniform01(rng));
      }
      case LawKind::HyperExp2: {
        double m = uniform01(rng) < p1 ? mu1 : mu2;
        return -std::log1p(-uniform01(rng)) / m;
      }
    }
    return 0;
  }
};

// Balanced-mean two-phase hyperexponential with given mean and squared
// coefficient of variation cv2 > 1.
inline DistanceLaw h2_from_cv2(double mean, double cv2) {
  if (!(mean > 0)) throw std::invalid_argument("h2_from_cv2: mean must be > 0");
  if (!(cv2 > 1)) throw std::invalid_argument("h2_from_cv2: cv2 must be > 1");
  double q = std::sqrt((cv2 - 1) / (cv2 + 1));
  double p1 = 0.5 * (1 + q);
  double mu1 = 2 * p1 / mean;
  double mu2 = 2 * (1 - p1) / mean;
  return DistanceLaw::HyperExp2(p1, mu1, mu2);
}

inline void to_json(nlohmann::json& j, const DistanceLaw& d) {
  j = nlohmann::json{{"kind", law_kind_name(d.kind)}};
  switch (d.kind) {
    case LawKind::Exponential: j["rate"] = d.rate; break;
    case LawKind::Deterministic: j["value"] = d.value; break;
    case LawKind::Uniform: j["max"] = d.b; break;
    case LawKind::HyperExp2:
      j["p1"] = d.p1;
      j["mu1"] = d.mu1;
      j["mu2"] = d.mu2;
      break;
  }
}

inline void from_json(const nlohmann::json& j, DistanceLaw& d) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "exponential") {
    d = DistanceLaw::Exponential(j.at("rate").get<double>());
  } else if (kind == "deterministic") {
    d = DistanceLaw::Deterministic(j.at("value").get<double>());
  } else if (kind == "uniform") {
    d = DistanceLaw::Uniform(j.at("max").get<double>());
  } else if (kind == "h2") {
    if (j.contains("cv2"))
      d = h2_from_cv2(j.at("mean").get<double>(), j.at("cv2").get<double>());
    else
      d = DistanceLaw::HyperExp2(j.at("p1").get<double>(),
                                 j.at("mu1").get<double>(),
                                 j.at("mu2").get<double>());
  } else {
    throw std::invalid_argument("unknown distribution kind: " + kind);
  }
}

// Law of the distance still to be covered by the oldest request when a fresh
// server appears: the forward-recurrence-style transform of the inter-server
// law X against request rate lambda. Exponential X is its own transform.
class ExceptionalLaw {
 public:
  ExceptionalLaw(const DistanceLaw& base, double lambda)
      : base_(base), lambda_(lambda) {
    if (!(lambda > 0)) throw std::invalid_argument("lambda must be > 0");
    switch (base.kind) {
      case LawKind::Exponential:
        ub_ = base.support_ub();
        break;
      case LawKind::Deterministic: {
        double d0 = base.value;
        norm_ = 1.0 / (1.0 - std::exp(-lambda * d0));
        ub_ = d0;
        break;
      }
      case LawKind::Uniform: {
        double b = base.b;
        norm_ = 1.0 / (b * lambda + std::exp(-lambda * b) - 1.0);
        ub_ = b;
        break;
      }
      case LawKind::HyperExp2: {
        // Mixture of the same exponential phases with reweighted masses.
        double s = 0;
        double p[2] = {base.p1, 1 - base.p1};
        double mu[2] = {base.mu1, base.mu2};
        for (int i = 0; i < 2; ++i) s += lambda * p[i] / (lambda + mu[i]);
        for (int i = 0; i < 2; ++i) w_[i] = lambda * p[i] / ((lambda + mu[i]) * s);
        double x = 1.0;
        while ((w_[0] * std::exp(-mu[0] * x) + w_[1] * std::exp(-mu[1] * x)) >
               1e-12)
          x *= 2;
        ub_ = x;
        break;
      }
    }
  }

  const DistanceLaw& base() const { return base_; }
  double lambda() const { return lambda_; }
  double support_ub() const { return ub_; }

  double cdf(double x) const {
    if (x <= 0) return 0.0;
    switch (base_.kind) {
      case LawKind::Exponential: return base_.cdf(x);
      case LawKind::Deterministic: {
        double d0 = base_.value;
        if (x >= d0) return 1.0;
        return norm_ * (std::exp(-lambda_ * (d0 - x)) - std::exp(-lambda_ * d0));
      }
      case LawKind::Uniform: {
        double b = base_.b;
        if (x >= b) return 1.0;
        return norm_ * (lambda_ * x -
                        (std::exp(-lambda_ * (b - x)) - std::exp(-lambda_ * b)));
      }
      case LawKind::HyperExp2:
        return 1.0 - w_[0] * std::exp(-base_.mu1 * x) -
               w_[1] * std::exp(-base_.mu2 * x);
    }
    return 0;
  }

  double pdf(double x) const {
    if (x < 0) return 0.0;
    switch (base_.kind) {
      case LawKind::Exponential: return base_.pdf(x);
      case LawKind::Deterministic: {
        double d0 = base_.value;
        if (x > d0) return 0.0;
        return norm_ * lambda_ * std::exp(-lambda_ * (d0 - x));
      }
      case LawKind::Uniform: {
        double b = base_.b;
        if (x > b) return 0.0;
        return norm_ * lambda_ * (1.0 - std::exp(-lambda_ * (b - x)));
      }
      case LawKind::HyperExp2:
        return w_[0] * base_.mu1 * std::exp(-base_.mu1 * x) +
               w_[1] * base_.mu2 * std::exp(-base_.mu2 * x);
    }
    return 0;
  }

  double mean() const {
    switch (base_.kind) {
      case LawKind::Exponential: return base_.mean();
      case LawKind::Deterministic: {
        double d0 = base_.value;
        return norm_ * (d0 * lambda_ + std::exp(-lambda_ * d0) - 1.0) / lambda_;
      }
      case LawKind::Uniform: {
        double b = base_.b;
        return 0.5 * b * b * lambda_ * norm_ - 1.0 / lambda_;
      }
      case LawKind::HyperExp2: return moment(1);
    }
    return 0;
  }

  double moment(int k) const {
    if (k < 0) throw std::invalid_argument("moment order must be >= 0");
    if (k == 0) return 1.0;
    switch (base_.kind) {
      case LawKind::Exponential: return base_.moment(k);
      case LawKind::Deterministic:
        if (k == 1) return mean();
        if (k == 2) {
          double d0 = base_.value;
          return (norm_ / lambda_) *
                 (d0 * (d0 * lambda_ - 2.0) +
                  (2.0 / lambda_) * (1.0 - std::exp(-lambda_ * d0)));
        }
        break;
      case LawKind::Uniform:
        if (k == 1) return mean();
        if (k == 2) {
          double b = base_.b;
          return b * b * b * lambda_ * norm_ / 3.0 -
                 (norm_ / lambda_) *
                     (b * (b * lambda_ - 2.0) +
                      (2.0 / lambda_) * (1.0 - std::exp(-lambda_ * b)));
        }
        break;
      case LawKind::HyperExp2: {
        double f = 1;
        for (int j = 2; j <= k; ++j) f *= j;
        return f * (w_[0] / std::pow(base_.mu1, k) +
                    w_[1] / std::pow(base_.mu2, k));
      }
    }
    // Higher deterministic/uniform orders by quadrature.
    return integrate<double>(
        [&](double x) { return std::pow(x, k) * pdf(x); }, 0.0, ub_, 1e-10);
  }

  double variance() const {
    double m = mean();
    return moment(2) - m * m;
  }

  // E[e^{-sZ}] in closed form for every kind. phi(a, L) below is
  // (e^{aL} - 1)/a with a series branch near a = 0.
  cplx lst(cplx s) const {
    auto phi = [](cplx a, double len) -> cplx {
      if (std::abs(a) * len < 1e-6) {
        cplx al = a * len;
        return len * (1.0 + al * (0.5 + al * (1.0 / 6 + al / 24.0)));
      }
      return (std::exp(a * len) - 1.0) / a;
    };
    switch (base_.kind) {
      case LawKind::Exponential:
        return base_.lst(s);
      case LawKind::Deterministic: {
        double d0 = base_.value;
        return lambda_ * norm_ * std::exp(-lambda_ * d0) *
               phi(lambda_ - s, d0);
      }
      case LawKind::Uniform: {
        double b = base_.b;
        return lambda_ * norm_ *
               (phi(-s, b) - std::exp(-lambda_ * b) * phi(lambda_ - s, b));
      }
      case LawKind::HyperExp2:
        return w_[0] * base_.mu1 / (base_.mu1 + s) +
               w_[1] * base_.mu2 / (base_.mu2 + s);
    }
    return 0;
  }

  double lst(double s) const { return lst(cplx(s, 0)).real(); }

 private:
  DistanceLaw base_;
  double lambda_;
  double norm_ = 1.0;   // Deterministic / Uniform normalizing constant
  double w_[2] = {0, 0};  // HyperExp2 reweighted mixture masses
  double ub_ = 0;
};

}  // namespace linealloc
