// Matches users to servers in the plane through the 1D embedding pipeline and
// compares against the optimal planar assignment.

#include <cstdio>

#include "linealloc/embed.hpp"

using namespace linealloc;

int main() {
  for (uint64_t seed : {1, 2, 3}) {
    auto inst = clustered_planar_instance(150, 300, seed);
    auto emb = match_via_embedding(inst);
    auto opt = match_planar_optimal(inst);
    std::printf(
        "seed %llu: embedded total %.4f  optimal total %.4f  ratio %.3f  "
        "(neighbors %d/%d)\n",
        (unsigned long long)seed, emb.total, opt.total, emb.total / opt.total,
        emb.k_users, emb.k_servers);
  }

  auto line = collinear_planar_instance(40, 80, 7);
  auto emb = match_via_embedding(line);
  auto opt = match_planar_optimal(line);
  std::printf("collinear: ratio %.12f (embedding recovers the line order)\n",
              emb.total / opt.total);
  return 0;
}
