#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "linealloc/common.hpp"
#include "linealloc/distributions.hpp"

namespace linealloc {

// Per-server capacity used when generating instances: a fixed value or an
// integer drawn uniformly from [lo, hi].
struct CapacityModel {
  int lo = 1, hi = 1;

  static CapacityModel fixed(int c) {
    if (c < 1) throw std::invalid_argument("capacity must be >= 1");
    return {c, c};
  }
  static CapacityModel uniform_int(int lo, int hi) {
    if (lo < 1 || hi < lo) throw std::invalid_argument("bad capacity range");
    return {lo, hi};
  }
  int sample(std::mt19937_64& rng) const {
    if (lo == hi) return lo;
    int span = hi - lo + 1;
    int v = lo + int(uniform01(rng) * span);
    return std::min(v, hi);
  }
};

// Users and servers on the half-line, positions ascending from 0.
struct SpatialInstance {
  std::vector<double> users;
  std::vector<double> servers;
  std::vector<int> capacities;  // one per server

  void validate() const {
    if (capacities.size() != servers.size())
      throw std::invalid_argument("capacity count must match server count");
    if (!std::is_sorted(users.begin(), users.end()) ||
        !std::is_sorted(servers.begin(), servers.end()))
      throw std::invalid_argument("positions must be sorted ascending");
    for (int c : capacities)
      if (c < 1) throw std::invalid_argument("capacity must be >= 1");
  }
};

inline SpatialInstance generate_instance(const DistanceLaw& user_law,
                                         const DistanceLaw& server_law,
                                         int n_users, int n_servers,
                                         CapacityModel cap, uint64_t seed) {
  if (n_users < 0 || n_servers < 0)
    throw std::invalid_argument("counts must be nonnegative");
  std::mt19937_64 rng(seed);
  SpatialInstance inst;
  inst.users.reserve(n_users);
  inst.servers.reserve(n_servers);
  double x = 0;
  for (int i = 0; i < n_users; ++i) {
    x += user_law.sample(rng);
    inst.users.push_back(x);
  }
  x = 0;
  for (int j = 0; j < n_servers; ++j) {
    x += server_law.sample(rng);
    inst.servers.push_back(x);
    inst.capacities.push_back(cap.sample(rng));
  }
  return inst;
}

// Generates n_users users, then keeps generating servers until a rightward
// sweep has served everyone (no unmatched tail). The stopping point depends
// only on buffer sizes, so it is identical for every sweep policy.
inline SpatialInstance generate_drained_instance(const DistanceLaw& user_law,
                                                 const DistanceLaw& server_law,
                                                 int n_users, CapacityModel cap,
                                                 uint64_t seed) {
  if (n_users <= 0) throw std::invalid_argument("need at least one user");
  std::mt19937_64 rng(seed);
  SpatialInstance inst;
  inst.users.reserve(n_users);
  double x = 0;
  for (int i = 0; i < n_users; ++i) {
    x += user_law.sample(rng);
    inst.users.push_back(x);
  }
  const size_t max_servers = 10000 + 1000ull * n_users;
  size_t next_user = 0;
  long pending = 0;
  double s = 0;
  while (true) {
    if (inst.servers.size() >= max_servers)
      throw NumericError("drained instance generation did not terminate");
    s += server_law.sample(rng);
    int c = cap.sample(rng);
    inst.servers.push_back(s);
    inst.capacities.push_back(c);
    while (next_user < inst.users.size() && inst.users[next_user] <= s) {
      ++pending;
      ++next_user;
    }
    pending -= std::min<long>(pending, c);
    if (next_user == inst.users.size() && pending == 0) break;
  }
  return inst;
}

struct AssignmentResult {
  std::vector<int> server_of_user;  // -1 where unmatched
  int matched = 0;

  std::vector<double> matched_distances(const SpatialInstance& inst) const {
    std::vector<double> d;
    d.reserve(matched);
    for (size_t i = 0; i < server_of_user.size(); ++i)
      if (server_of_user[i] >= 0)
        d.push_back(std::abs(inst.servers[server_of_user[i]] - inst.users[i]));
    return d;
  }
};

// Step function counting requests in transit past each point, built from all
// users (+1) and every server's matched batch (-batch). level[i] holds on
// [x[i], x[i+1]); the function is 0 left of x[0].
struct QueueProfile {
  std::vector<double> x;
  std::vector<int> level;

  double integral() const {
    double acc = 0;
    for (size_t i = 0; i + 1 < x.size(); ++i)
      acc += level[i] * (x[i + 1] - x[i]);
    return acc;
  }

  // Maximal intervals with positive level. If the profile ends at a positive
  // level the last cycle is open (second coordinate = last breakpoint).
  std::vector<std::pair<double, double>> busy_cycles(bool* open_tail = nullptr) const {
    std::vector<std::pair<double, double>> cycles;
    bool open = false;
    double start = 0;
    int prev = 0;
    for (size_t i = 0; i < x.size(); ++i) {
      if (prev == 0 && level[i] > 0) start = x[i];
      if (prev > 0 && level[i] == 0) cycles.emplace_back(start, x[i]);
      prev = level[i];
    }
    if (prev > 0) {
      cycles.emplace_back(start, x.back());
      open = true;
    }
    if (open_tail) *open_tail = open;
    return cycles;
  }

  bool operator==(const QueueProfile& o) const {
    return x == o.x && level == o.level;
  }
};

inline QueueProfile queue_profile(const SpatialInstance& inst,
                                  const AssignmentResult& res) {
  std::vector<std::pair<double, int>> events;
  events.reserve(inst.users.size() + inst.servers.size());
  for (double r : inst.users) events.emplace_back(r, +1);
  std::vector<int> served(inst.servers.size(), 0);
  for (int sj : res.server_of_user)
    if (sj >= 0) ++served[sj];
  for (size_t j = 0; j < inst.servers.size(); ++j)
    if (served[j] > 0) events.emplace_back(inst.servers[j], -served[j]);
  std::sort(events.begin(), events.end());
  QueueProfile p;
  int lvl = 0;
  for (size_t i = 0; i < events.size(); ++i) {
    lvl += events[i].second;
    // Merge coincident positions into one breakpoint.
    if (i + 1 < events.size() && events[i + 1].first == events[i].first)
      continue;
    p.x.push_back(events[i].first);
    p.level.push_back(lvl);
  }
  return p;
}

namespace detail {

// Rightward sweep shared by the FIFO and LIFO disciplines: at each server,
// min(capacity, buffered) users leave the buffer.
template <bool Lifo>
AssignmentResult sweep_allocate(const SpatialInstance& inst) {
  inst.validate();
  AssignmentResult res;
  res.server_of_user.assign(inst.users.size(), -1);
  std::vector<int> buffer;  // user indices in push order
  buffer.reserve(inst.users.size());
  size_t head = 0;  // FIFO consumption point
  size_t iu = 0;
  for (size_t j = 0; j < inst.servers.size(); ++j) {
    double s = inst.servers[j];
    while (iu < inst.users.size() && inst.users[iu] <= s)
      buffer.push_back(int(iu++));
    int take = std::min<int>(inst.capacities[j], int(buffer.size() - head));
    for (int k = 0; k < take; ++k) {
      int u;
      if constexpr (Lifo) {
        u = buffer.back();
        buffer.pop_back();
      } else {
        u = buffer[head++];
      }
      res.server_of_user[u] = int(j);
      ++res.matched;
    }
  }
  return res;
}

}  // namespace detail

// Rightward sweep, oldest buffered user first.
inline AssignmentResult allocate_mtr(const SpatialInstance& inst) {
  return detail::sweep_allocate<false>(inst);
}

// Rightward sweep, most recently passed user first (equivalently: each server
// takes the nearest pending users on its left).
inline AssignmentResult allocate_ugs(const SpatialInstance& inst) {
  return detail::sweep_allocate<true>(inst);
}

// Users processed left to right, each taking the nearest server with residual
// capacity; distance ties go to the right server.
inline AssignmentResult allocate_nn(const SpatialInstance& inst) {
  inst.validate();
  AssignmentResult res;
  res.server_of_user.assign(inst.users.size(), -1);
  std::vector<int> residual = inst.capacities;
  std::set<std::pair<double, int>> avail;  // (position, server index)
  for (size_t j = 0; j < inst.servers.size(); ++j)
    avail.emplace(inst.servers[j], int(j));
  for (size_t i = 0; i < inst.users.size() && !avail.empty(); ++i) {
    double r = inst.users[i];
    auto right = avail.lower_bound({r, -1});
    int pick = -1;
    if (right == avail.end()) {
      pick = std::prev(right)->second;
    } else if (right == avail.begin()) {
      pick = right->second;
    } else {
      auto left = std::prev(right);
      double dl = r - left->first, dr = right->first - r;
      pick = dr <= dl ? right->second : left->second;
    }
    res.server_of_user[i] = pick;
    ++res.matched;
    if (--residual[pick] == 0) avail.erase({inst.servers[pick], pick});
  }
  return res;
}

// Iterated removal of mutual nearest user/server pairs. Implemented by
// scanning candidate pairs in ascending distance over a linked list of the
// merged point sequence: the globally closest adjacent user-server pair is
// always mutual nearest. Ties: smaller user position, then larger server
// position, first.
inline AssignmentResult allocate_gs(const SpatialInstance& inst) {
  inst.validate();
  const int nu = int(inst.users.size()), ns = int(inst.servers.size());
  AssignmentResult res;
  res.server_of_user.assign(nu, -1);
  // Node ids: users [0, nu), servers [nu, nu+ns).
  std::vector<double> pos(nu + ns);
  std::vector<int> order(nu + ns);
  for (int i = 0; i < nu; ++i) pos[i] = inst.users[i];
  for (int j = 0; j < ns; ++j) pos[nu + j] = inst.servers[j];
  for (int i = 0; i < nu + ns; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return pos[a] < pos[b]; });
  int n = nu + ns;
  std::vector<int> prev(n + 2), next(n + 2), residual(nu + ns, 1);
  for (int j = 0; j < ns; ++j) residual[nu + j] = inst.capacities[j];
  // Sentinel list over sorted ranks; rank r holds node order[r-1].
  for (int r = 0; r <= n + 1; ++r) {
    prev[r] = r - 1;
    next[r] = r + 1;
  }
  auto node_at = [&](int r) { return order[r - 1]; };  // ranks 1..n
  auto is_user = [&](int node) { return node < nu; };
  using Cand = std::tuple<double, double, double, int, int>;  // d, u, -s, ru, rs
  std::priority_queue<Cand, std::vector<Cand>, std::greater<>> heap;
  auto push_pair = [&](int ra, int rb) {
    if (ra < 1 || rb > n) return;
    int a = node_at(ra), b = node_at(rb);
    if (is_user(a) == is_user(b)) return;
    int ru = is_user(a) ? ra : rb, rs = is_user(a) ? rb : ra;
    double d = std::abs(pos[node_at(ru)] - pos[node_at(rs)]);
    heap.emplace(d, pos[node_at(ru)], -pos[node_at(rs)], ru, rs);
  };
  for (int r = 1; r < n; ++r) push_pair(r, r + 1);
  std::vector<bool> alive(n + 2, true);
  auto drop = [&](int r) {
    alive[r] = false;
    int p = prev[r], q = next[r];
    next[p] = q;
    prev[q] = p;
    if (p >= 1 && q <= n) push_pair(p, q);
  };
  int unmatched = nu;
  while (unmatched > 0 && !heap.empty()) {
    auto [d, upos, nspos, ru, rs] = heap.top();
    heap.pop();
    if (!alive[ru] || !alive[rs]) continue;
    if (next[ru] != rs && next[rs] != ru) continue;  // stale adjacency
    int u = node_at(ru), s = node_at(rs);
    res.server_of_user[u] = s - nu;
    ++res.matched;
    --unmatched;
    drop(ru);
    if (--residual[s] == 0) drop(rs);
    (void)d;
    (void)upos;
    (void)nspos;
  }
  return res;
}

struct DistanceStats {
  double mean = 0;
  double variance = 0;  // unbiased sample variance
  double max = 0;
  size_t count = 0;
};

// Statistics over matched users in user order. warmup_frac in [0, 1) drops
// that fraction of the earliest matched users before estimating.
inline DistanceStats distance_stats(const SpatialInstance& inst,
                                    const AssignmentResult& res,
                                    double warmup_frac = 0.0) {
  if (warmup_frac < 0 || warmup_frac >= 1)
    throw std::invalid_argument("warmup fraction must be in [0, 1)");
  auto d = res.matched_distances(inst);
  size_t skip = size_t(warmup_frac * d.size());
  if (d.size() - skip == 0)
    throw std::invalid_argument("no matched users to aggregate");
  DistanceStats st;
  st.count = d.size() - skip;
  double acc = 0, mx = 0;
  for (size_t i = skip; i < d.size(); ++i) {
    acc += d[i];
    mx = std::max(mx, d[i]);
  }
  st.mean = acc / st.count;
  st.max = mx;
  double ss = 0;
  for (size_t i = skip; i < d.size(); ++i) {
    double e = d[i] - st.mean;
    ss += e * e;
  }
  st.variance = st.count > 1 ? ss / (st.count - 1) : 0.0;
  return st;
}

// Doubling family on which greedy pair removal degrades: level t has 2^(t-1)
// unit user-server cells; each level appends a shifted copy with the bridge
// gap chosen just under the current width, so greedy zips across the bridge
// and strands the leftmost user at ever longer range. Width grows like 3^t
// while the order-preserving optimum stays at one unit per cell.
inline SpatialInstance greedy_adversarial_instance(int t) {
  if (t < 1) throw std::invalid_argument("family level must be >= 1");
  SpatialInstance inst;
  inst.users = {0.0};
  inst.servers = {1.0};
  double width = 1.0;
  for (int k = 2; k <= t; ++k) {
    double gap = width - 0.1;
    double offset = width + gap;
    size_t nu = inst.users.size(), ns = inst.servers.size();
    for (size_t i = 0; i < nu; ++i) inst.users.push_back(inst.users[i] + offset);
    for (size_t j = 0; j < ns; ++j)
      inst.servers.push_back(inst.servers[j] + offset);
    width = 2 * width + gap;
  }
  inst.capacities.assign(inst.servers.size(), 1);
  return inst;
}

}  // namespace linealloc
