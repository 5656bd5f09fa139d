#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "linealloc/assign.hpp"
#include "linealloc/common.hpp"
#include "linealloc/spatial.hpp"

namespace linealloc {

using Point2 = std::array<double, 2>;

inline double dist2d(const Point2& a, const Point2& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

// Users and servers in the plane, one slot per server.
struct PlanarInstance {
  std::vector<Point2> users, servers;
};

// Users uniform on the unit square; each server lands in a small box around a
// randomly chosen user, so demand and supply share cluster structure.
inline PlanarInstance clustered_planar_instance(int n_users, int n_servers,
                                                uint64_t seed,
                                                double box = 0.1) {
  if (n_users < 1 || n_servers < 1)
    throw std::invalid_argument("counts must be positive");
  std::mt19937_64 rng(seed);
  PlanarInstance inst;
  inst.users.reserve(n_users);
  inst.servers.reserve(n_servers);
  for (int i = 0; i < n_users; ++i)
    inst.users.push_back({uniform01(rng), uniform01(rng)});
  for (int j = 0; j < n_servers; ++j) {
    const Point2& anchor = inst.users[size_t(uniform01(rng) * n_users) %
                                      inst.users.size()];
    inst.servers.push_back({anchor[0] + box * (uniform01(rng) - 0.5),
                            anchor[1] + box * (uniform01(rng) - 0.5)});
  }
  return inst;
}

// Everything on one random line through the square.
inline PlanarInstance collinear_planar_instance(int n_users, int n_servers,
                                                uint64_t seed) {
  if (n_users < 1 || n_servers < 1)
    throw std::invalid_argument("counts must be positive");
  std::mt19937_64 rng(seed);
  double theta = 2 * std::numbers::pi * uniform01(rng);
  Point2 dir = {std::cos(theta), std::sin(theta)};
  Point2 base = {uniform01(rng), uniform01(rng)};
  PlanarInstance inst;
  auto along = [&](double t) {
    return Point2{base[0] + t * dir[0], base[1] + t * dir[1]};
  };
  for (int i = 0; i < n_users; ++i) inst.users.push_back(along(2 * uniform01(rng)));
  for (int j = 0; j < n_servers; ++j)
    inst.servers.push_back(along(2 * uniform01(rng)));
  return inst;
}

// Neighbor budget against the opposite role, given as an absolute count or as
// a fraction of that role's population (count wins when both are set).
struct NeighborCount {
  int count = 0;
  double fraction = 0.25;

  static NeighborCount of(int k) { return {k, 0.0}; }
  static NeighborCount share(double f) { return {0, f}; }

  int resolve(int pool) const {
    int k = count > 0 ? count : int(std::lround(fraction * pool));
    return std::clamp(k, 1, pool);
  }
};

struct EmbeddingConfig {
  NeighborCount k_users;         // servers consulted per user
  NeighborCount k_servers;       // users consulted per server
  double reg_scale = 1e-3;       // Tikhonov weight, times trace(G)/K
  double far_mult = 2.0;         // plane-far cutoff, times mean nearest-opposite distance
  double close_frac = 1e-4;      // line-close cutoff, times embedded span
  double step_frac = 1.0;        // spread step, times span/n
  bool auto_select = true;       // try sparser neighbor counts too, keep the cheapest match

  void validate(int n_users, int n_servers) const {
    auto check = [](const NeighborCount& k, int pool, const char* who) {
      if (k.count < 0 || k.count > pool)
        throw std::invalid_argument(std::string(who) + " neighbor count out of range");
      if (k.count == 0 && !(k.fraction > 0 && k.fraction <= 1))
        throw std::invalid_argument(std::string(who) + " neighbor fraction out of range");
    };
    check(k_users, n_servers, "user");
    check(k_servers, n_users, "server");
    if (!(reg_scale >= 0)) throw std::invalid_argument("reg_scale must be nonnegative");
    if (!(far_mult > 0) || !(close_frac > 0) || !(step_frac > 0))
      throw std::invalid_argument("spread constants must be positive");
  }
};

// Line coordinates, users first; residual is y'(I-W)'(I-W)y for the solved y.
struct LineEmbedding {
  std::vector<double> user_pos, server_pos;
  double residual = 0;
};

// Reconstruction weights: each node is expressed as an affine combination of
// its nearest opposite-role neighbors, solving the regularized Gram system
// (G + reg I) w = 1 and renormalizing to sum one. Rows are users then
// servers; the diagonal blocks are zero.
inline Eigen::MatrixXd knn_weights(const PlanarInstance& inst, int k_users,
                                   int k_servers, double reg_scale = 1e-3) {
  const int n_u = int(inst.users.size()), n_s = int(inst.servers.size());
  const int n = n_u + n_s;
  if (n_u < 1 || n_s < 1) throw std::invalid_argument("both roles required");
  if (k_users < 1 || k_users > n_s || k_servers < 1 || k_servers > n_u)
    throw std::invalid_argument("neighbor count out of range");
  auto point = [&](int i) -> const Point2& {
    return i < n_u ? inst.users[i] : inst.servers[i - n_u];
  };

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const bool is_user = i < n_u;
    const int base = is_user ? n_u : 0;
    const int pool = is_user ? n_s : n_u;
    const int kk = is_user ? k_users : k_servers;

    std::vector<int> order(pool);
    std::iota(order.begin(), order.end(), 0);
    std::partial_sort(order.begin(), order.begin() + kk, order.end(),
                      [&](int a, int b) {
                        return dist2d(point(i), point(base + a)) <
                               dist2d(point(i), point(base + b));
                      });

    Eigen::MatrixXd gram(kk, kk);
    for (int a = 0; a < kk; ++a)
      for (int b = 0; b <= a; ++b) {
        const Point2 &pa = point(base + order[a]), &pb = point(base + order[b]),
                     &pi = point(i);
        gram(a, b) = gram(b, a) = (pa[0] - pi[0]) * (pb[0] - pi[0]) +
                                  (pa[1] - pi[1]) * (pb[1] - pi[1]);
      }
    if (gram.trace() == 0)
      throw NumericError("degenerate neighborhood: all neighbors coincide with the node");
    double reg = std::max(reg_scale * gram.trace() / kk, 1e-12);
    gram.diagonal().array() += reg;
    Eigen::VectorXd wi = gram.ldlt().solve(Eigen::VectorXd::Ones(kk));
    double tot = wi.sum();
    if (tot == 0 || !std::isfinite(tot))
      throw NumericError("degenerate reconstruction weights");
    for (int a = 0; a < kk; ++a) w(i, base + order[a]) = wi(a) / tot;
  }
  return w;
}

inline Eigen::MatrixXd knn_weights(const PlanarInstance& inst,
                                   const EmbeddingConfig& cfg) {
  const int n_u = int(inst.users.size()), n_s = int(inst.servers.size());
  cfg.validate(n_u, n_s);
  return knn_weights(inst, cfg.k_users.resolve(n_s), cfg.k_servers.resolve(n_u),
                     cfg.reg_scale);
}

// Line coordinates minimizing the reconstruction error under y'y = 1: the
// eigenvector of the second-smallest eigenvalue of (I-W)'(I-W) (the smallest
// belongs to the constant vector the row normalization annihilates). Sign is
// fixed so the first user sits at or left of the last user.
inline LineEmbedding embed_1d(const Eigen::MatrixXd& w, int n_users) {
  const int n = int(w.rows());
  if (n < 2 || n_users < 1 || n_users >= n)
    throw std::invalid_argument("need at least one node of each role");
  Eigen::MatrixXd iw = Eigen::MatrixXd::Identity(n, n) - w;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(iw.transpose() * iw);
  if (es.info() != Eigen::Success)
    throw NumericError("embedding eigensolve failed");
  Eigen::VectorXd y = es.eigenvectors().col(1);
  if (y(0) > y(n_users - 1)) y = -y;

  LineEmbedding emb;
  emb.residual = es.eigenvalues()(1);
  emb.user_pos.assign(y.data(), y.data() + n_users);
  emb.server_pos.assign(y.data() + n_users, y.data() + n);
  return emb;
}

// Walk the embedded line left to right; whenever consecutive points are
// nearly coincident on the line yet far apart in the plane, everything from
// the second one on shifts right by one more step. Order is preserved, and
// each flagged pair ends up at least one step apart.
inline LineEmbedding spread_adjust(const LineEmbedding& emb,
                                   const PlanarInstance& inst,
                                   const EmbeddingConfig& cfg) {
  const int n_u = int(inst.users.size()), n_s = int(inst.servers.size());
  const int n = n_u + n_s;
  if (int(emb.user_pos.size()) != n_u || int(emb.server_pos.size()) != n_s)
    throw std::invalid_argument("embedding does not match the instance");
  auto point = [&](int i) -> const Point2& {
    return i < n_u ? inst.users[i] : inst.servers[i - n_u];
  };
  auto coord = [&](int i) {
    return i < n_u ? emb.user_pos[i] : emb.server_pos[i - n_u];
  };

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return coord(a) < coord(b); });
  double span = coord(order.back()) - coord(order.front());
  if (span <= 0) throw NumericError("embedding collapsed to a point");

  double nn_acc = 0;
  for (int i = 0; i < n; ++i) {
    const bool is_user = i < n_u;
    const int base = is_user ? n_u : 0;
    const int pool = is_user ? n_s : n_u;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < pool; ++j)
      best = std::min(best, dist2d(point(i), point(base + j)));
    nn_acc += best;
  }
  const double far = cfg.far_mult * nn_acc / n;
  const double close = cfg.close_frac * span;
  const double step = cfg.step_frac * span / n;

  LineEmbedding out = emb;
  auto coord_out = [&](int i) -> double& {
    return i < n_u ? out.user_pos[i] : out.server_pos[i - n_u];
  };
  double offset = 0;
  for (int r = 1; r < n; ++r) {
    double gap = coord(order[r]) - coord(order[r - 1]);
    if (gap < close && dist2d(point(order[r]), point(order[r - 1])) > far)
      offset += step;
    coord_out(order[r]) += offset;
  }
  return out;
}

struct PlanarMatchResult {
  std::vector<int> server_of_user;
  double total = 0;  // summed plane distance of the matched pairs

  double mean(int n_users) const { return n_users ? total / n_users : 0.0; }
};

// A matching produced through the line, plus which neighbor counts won.
struct EmbeddedMatch : PlanarMatchResult {
  int k_users = 0, k_servers = 0;
  double residual = 0;
};

// One full pass at fixed neighbor counts: weights, line coordinates, spread,
// then the exact line matcher; the result is priced back in the plane.
inline EmbeddedMatch match_via_embedding(const PlanarInstance& inst,
                                         const EmbeddingConfig& cfg,
                                         int k_users, int k_servers) {
  const int n_u = int(inst.users.size()), n_s = int(inst.servers.size());
  if (n_u > n_s) throw std::invalid_argument("more users than server slots");
  auto emb = spread_adjust(
      embed_1d(knn_weights(inst, k_users, k_servers, cfg.reg_scale), n_u),
      inst, cfg);

  std::vector<int> uidx(n_u), sidx(n_s);
  std::iota(uidx.begin(), uidx.end(), 0);
  std::iota(sidx.begin(), sidx.end(), 0);
  std::sort(uidx.begin(), uidx.end(), [&](int a, int b) {
    return emb.user_pos[a] < emb.user_pos[b];
  });
  std::sort(sidx.begin(), sidx.end(), [&](int a, int b) {
    return emb.server_pos[a] < emb.server_pos[b];
  });

  SpatialInstance line;
  line.users.reserve(n_u);
  line.servers.reserve(n_s);
  double lo = std::min(emb.user_pos[uidx[0]], emb.server_pos[sidx[0]]);
  for (int r = 0; r < n_u; ++r)
    line.users.push_back(emb.user_pos[uidx[r]] - lo);
  for (int r = 0; r < n_s; ++r)
    line.servers.push_back(emb.server_pos[sidx[r]] - lo);
  line.capacities.assign(n_s, 1);

  auto res = opt_dp(line);
  EmbeddedMatch out;
  out.k_users = k_users;
  out.k_servers = k_servers;
  out.residual = emb.residual;
  out.server_of_user.assign(n_u, -1);
  for (int r = 0; r < n_u; ++r) {
    int q = res.server_of_user[r];
    out.server_of_user[uidx[r]] = sidx[q];
    out.total += dist2d(inst.users[uidx[r]], inst.servers[sidx[q]]);
  }
  return out;
}

// Matching through the line embedding. With auto_select the configured
// neighbor counts compete against a few sparse ones and the cheapest matching
// (priced in the plane) wins; sparse counts keep cluster structure out of the
// reconstruction while generous counts track exactly embeddable inputs.
inline EmbeddedMatch match_via_embedding(const PlanarInstance& inst,
                                         const EmbeddingConfig& cfg = {}) {
  const int n_u = int(inst.users.size()), n_s = int(inst.servers.size());
  if (n_u < 1 || n_s < 1) throw std::invalid_argument("both roles required");
  if (n_u > n_s) throw std::invalid_argument("more users than server slots");
  cfg.validate(n_u, n_s);

  std::vector<std::pair<int, int>> cands = {
      {cfg.k_users.resolve(n_s), cfg.k_servers.resolve(n_u)}};
  if (cfg.auto_select) {
    for (auto [ku, ks] : {std::pair{1, 1}, {1, 2}, {2, 1}, {2, 2}, {3, 2}}) {
      std::pair<int, int> c{std::min(ku, n_s), std::min(ks, n_u)};
      if (std::find(cands.begin(), cands.end(), c) == cands.end())
        cands.push_back(c);
    }
  }

  EmbeddedMatch best;
  bool have = false;
  for (auto [ku, ks] : cands) {
    auto res = match_via_embedding(inst, cfg, ku, ks);
    if (!have || res.total < best.total) {
      best = std::move(res);
      have = true;
    }
  }
  return best;
}

// Reference: optimal matching priced directly in the plane.
inline PlanarMatchResult match_planar_optimal(const PlanarInstance& inst) {
  const int n_u = int(inst.users.size()), n_s = int(inst.servers.size());
  if (n_u > n_s) throw std::invalid_argument("more users than server slots");
  std::vector<std::vector<double>> cost(n_u, std::vector<double>(n_s));
  for (int i = 0; i < n_u; ++i)
    for (int j = 0; j < n_s; ++j)
      cost[i][j] = dist2d(inst.users[i], inst.servers[j]);
  auto cols = hungarian_min(cost);
  PlanarMatchResult out;
  out.server_of_user = cols;
  for (int i = 0; i < n_u; ++i) out.total += cost[i][cols[i]];
  return out;
}

}  // namespace linealloc
