// f_m(X) = ||X^m||^(1/m) tends to rho(X), but at any fixed m the gap scales
// with X, so no single m works for every matrix.

#include <cstdio>
#include <vector>

#include "perronroot/perronroot.hpp"

using namespace perronroot;

int main() {
  const NonNegMatrix x{{1, 3}, {0, 1}};
  const auto trace = gelfand_trace(x, 8);
  for (const auto& r : trace.rows) std::printf("m=%zu  f_m=%.10f  residual=%.3e\n", r.m, r.f, r.residual);

  const std::vector<double> alphas{1, 10, 1000};
  const auto demo = nonuniformity_demo(x, 4, alphas);
  for (const auto& r : demo.rows) std::printf("alpha=%-6g residual=%.6g\n", r.alpha, r.residual);
}
