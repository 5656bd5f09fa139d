// Sweeps utilization for three user/server law pairs and prints the analytic
// mean delay next to a simulated sweep allocation, one line per cell.

#include <cstdio>

#include "linealloc/analytic.hpp"
#include "linealloc/spatial.hpp"

using namespace linealloc;

namespace {

double simulate(const DistanceLaw& ul, const DistanceLaw& sl, int c,
                uint64_t seed) {
  double lambda = 1 / ul.mean(), mu = 1 / sl.mean();
  int n_users = 40000;
  int n_servers = int(1.05 * n_users * mu / lambda) + 16;
  double acc = 0;
  const int trials = 10;
  for (int t = 0; t < trials; ++t) {
    auto inst = generate_instance(ul, sl, n_users, n_servers,
                                  CapacityModel::fixed(c), seed + t);
    acc += distance_stats(inst, allocate_mtr(inst), 0.1).mean;
  }
  return acc / trials;
}

}  // namespace

int main() {
  std::printf("%-28s %4s %6s %10s %10s\n", "laws (user/server)", "c", "rho",
              "analytic", "simulated");
  for (double rho : {0.3, 0.5, 0.7, 0.9}) {
    for (int c : {1, 2}) {
      double lambda = rho * c;
      double a = bulk_mm1(lambda, 1.0, c).mean_delay;
      double s = simulate(DistanceLaw::Exponential(lambda),
                          DistanceLaw::Exponential(1.0), c, 10 * c);
      std::printf("%-28s %4d %6.2f %10.4f %10.4f\n", "exp/exp", c, rho, a, s);
    }
    {
      DistanceLaw users = DistanceLaw::Deterministic(1 / rho);
      double a = gm1_batch(users, 1.0, 1).mean_delay;
      double s = simulate(users, DistanceLaw::Exponential(1.0), 1, 30);
      std::printf("%-28s %4d %6.2f %10.4f %10.4f\n", "deterministic/exp", 1,
                  rho, a, s);
    }
    {
      DistanceLaw servers = h2_from_cv2(1.0, 4.0);
      double a = mg1_batch(servers, rho, 1, true).mean_delay;
      double s = simulate(DistanceLaw::Exponential(rho), servers, 1, 40);
      std::printf("%-28s %4d %6.2f %10.4f %10.4f\n", "exp/hyperexp cv2=4", 1,
                  rho, a, s);
    }
  }
  return 0;
}
