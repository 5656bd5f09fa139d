#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "linealloc/common.hpp"
#include "linealloc/spatial.hpp"

namespace linealloc {

// Servers expanded into unit-capacity slots, position order preserved.
inline std::vector<double> expand_slots(const SpatialInstance& inst,
                                        std::vector<int>* slot_server = nullptr) {
  std::vector<double> pos;
  if (slot_server) slot_server->clear();
  for (size_t j = 0; j < inst.servers.size(); ++j)
    for (int k = 0; k < inst.capacities[j]; ++k) {
      pos.push_back(inst.servers[j]);
      if (slot_server) slot_server->push_back(int(j));
    }
  return pos;
}

// Minimum total distance assignment of every user to a distinct server slot.
// An order-preserving optimum always exists on the line, so the DP walks
// users against the B = slots - users + 1 wide diagonal band; ties prefer
// leaving the current slot unused. Decision bits are recomputed per panel
// from checkpointed cost rows, so memory stays near max_decision_bits even
// when users * band is large.
inline AssignmentResult opt_dp(const SpatialInstance& inst,
                               long long max_decision_bits = 1LL << 28) {
  inst.validate();
  std::vector<int> slot_server;
  std::vector<double> slot = expand_slots(inst, &slot_server);
  const int m = int(inst.users.size()), n = int(slot.size());
  if (m > n) throw std::invalid_argument("more users than server slots");
  AssignmentResult res;
  res.server_of_user.assign(m, -1);
  if (m == 0) return res;
  const int B = n - m + 1;
  auto dist = [&](int i, int j) {  // 1-based user and slot
    return std::abs(inst.users[i - 1] - slot[j - 1]);
  };
  const int K = int(std::clamp<long long>(max_decision_bits / std::max(1, B),
                                          1LL, (long long)m));
  const int n_panels = (m + K - 1) / K;

  // Forward sweep, checkpointing the cost row entering each panel.
  std::vector<std::vector<double>> entry(n_panels);
  std::vector<double> prev(B, 0.0), cur(B);
  auto advance_row = [&](int i, uint64_t* decisions) {
    cur[0] = prev[0] + dist(i, i);
    for (int k = 1; k < B; ++k) {
      double skip_val = cur[k - 1];
      double match_val = prev[k] + dist(i, i + k);
      if (skip_val <= match_val) {
        cur[k] = skip_val;
        if (decisions) decisions[k >> 6] |= uint64_t(1) << (k & 63);
      } else {
        cur[k] = match_val;
      }
    }
    std::swap(prev, cur);
  };
  for (int i = 1; i <= m; ++i) {
    if ((i - 1) % K == 0) entry[(i - 1) / K] = prev;
    advance_row(i, nullptr);
  }

  // Backtrack panel by panel, rebuilding decision bits from the checkpoints.
  const int words = (B + 63) / 64;
  std::vector<uint64_t> bits;
  int t = B - 1;
  for (int p = n_panels - 1; p >= 0; --p) {
    int lo = p * K + 1, hi = std::min(m, (p + 1) * K);
    bits.assign(size_t(hi - lo + 1) * words, 0);
    prev = entry[p];
    for (int i = lo; i <= hi; ++i)
      advance_row(i, bits.data() + size_t(i - lo) * words);
    for (int i = hi; i >= lo; --i) {
      const uint64_t* row = bits.data() + size_t(i - lo) * words;
      int k = t;
      while (k > 0 && (row[k >> 6] >> (k & 63)) & 1) --k;
      int j = i + k;
      res.server_of_user[i - 1] = slot_server[j - 1];
      ++res.matched;
      t = j - i;  // band column for row i-1
    }
  }
  return res;
}

// User i takes slot i; the baseline order-preserving matching.
inline AssignmentResult identity_assignment(const SpatialInstance& inst) {
  inst.validate();
  std::vector<int> slot_server;
  std::vector<double> slot = expand_slots(inst, &slot_server);
  if (inst.users.size() > slot.size())
    throw std::invalid_argument("more users than server slots");
  AssignmentResult res;
  res.server_of_user.resize(inst.users.size());
  for (size_t i = 0; i < inst.users.size(); ++i)
    res.server_of_user[i] = slot_server[i];
  res.matched = int(inst.users.size());
  return res;
}

// True when matched server indices never decrease along ascending users.
inline bool crossing_free(const AssignmentResult& res) {
  int last = -1;
  for (int sj : res.server_of_user) {
    if (sj < 0) continue;
    if (sj < last) return false;
    last = sj;
  }
  return true;
}

// Minimum-cost assignment of every row to a distinct column, rows <= cols,
// by shortest augmenting paths over dual potentials. Returns row -> column.
inline std::vector<int> hungarian_min(const std::vector<std::vector<double>>& a) {
  const int m = int(a.size());
  if (m == 0) return {};
  const int n = int(a[0].size());
  if (m > n) throw std::invalid_argument("need at least as many columns as rows");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(m + 1, 0), v(n + 1, 0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= m; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(m, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

// Optimal assignment through the generic matcher; cross-check for opt_dp.
inline AssignmentResult opt_hungarian(const SpatialInstance& inst) {
  inst.validate();
  std::vector<int> slot_server;
  std::vector<double> slot = expand_slots(inst, &slot_server);
  const size_t m = inst.users.size();
  if (m > slot.size())
    throw std::invalid_argument("more users than server slots");
  AssignmentResult res;
  res.server_of_user.assign(m, -1);
  if (m == 0) return res;
  std::vector<std::vector<double>> cost(m, std::vector<double>(slot.size()));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < slot.size(); ++j)
      cost[i][j] = std::abs(inst.users[i] - slot[j]);
  auto cols = hungarian_min(cost);
  for (size_t i = 0; i < m; ++i) res.server_of_user[i] = slot_server[cols[i]];
  res.matched = int(m);
  return res;
}

}  // namespace linealloc
