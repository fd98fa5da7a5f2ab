// Perron root of a weighted 3-cycle, then a continuity bound for a small
// perturbation of it.

#include <cstdio>

#include "perronroot/perronroot.hpp"

using namespace perronroot;

int main() {
  const NonNegMatrix a{{0, 2, 0}, {0, 0, 1}, {4, 0, 0}};  // rho = 8^(1/3) = 2
  const auto c = perron_irreducible(a);
  std::printf("rho(A) in [%.17g, %.17g] after %zu iterations\n", c.lo(), c.hi(), c.iterations);
  std::printf("q_star = %.6g\n", q_star(c));

  const NonNegMatrix a2{{0.01, 2, 0}, {0, 0, 1}, {4, 0, 0.02}};
  const auto pb = continuity_certificate(a, a2);
  const auto c2 = perron_root(a2);
  std::printf("||E||_F = %.3g, bound = %.6g\n", pb.e_norm, pb.bound);
  std::printf("enclosure [%.10g, %.10g] vs rho(A') in [%.10g, %.10g]\n", pb.enclosure.lo, pb.enclosure.hi,
              c2.lo(), c2.hi());
}
