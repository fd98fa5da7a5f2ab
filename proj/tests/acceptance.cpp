// Acceptance suite: nine end-to-end criteria, one PASS/FAIL line each.
// Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"
#include "perronroot/perronroot.hpp"
#include "support/oracles.hpp"
#include "support/random_matrices.hpp"

using namespace perronroot;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. Certified interval contains the oracle roots.
Outcome oracle_enclosure() {
  const auto start = Clock::now();
  gen::Rng rng(1001);
  SolverOptions opts;
  opts.tol = 1e-12;
  int violations = 0, closed_checks = 0;
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = gen::uniform_int(rng, 1, 8);
    const NonNegMatrix a = gen::mixed(rng, n, 10.0);
    const auto c = perron_root(a, opts);
    const double slack = 1e-9 * std::max(1.0, c.hi());
    auto check = [&](double oracle_root) {
      const double miss = std::max({0.0, c.lo() - oracle_root, oracle_root - c.hi()});
      worst = std::max(worst, miss / std::max(1.0, c.hi()));
      if (miss > slack) ++violations;
    };
    if (n <= 3) {
      check(oracle::closed_form_root(a));
      check(oracle::bisection_root(a));
      ++closed_checks;
    }
    check(oracle::componentwise_cw_midpoint(a));
  }
  const double secs = seconds_since(start);
  return {violations == 0 && secs < 60.0,
          fmt("1000 matrices (%d with n<=3), %d violations, worst miss %.2e, %.1f s", closed_checks, violations,
              worst, secs)};
}

// 2. 0 <= A <= B implies rho(A) <= rho(B).
Outcome monotonicity() {
  gen::Rng rng(1002);
  int violations = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = gen::uniform_int(rng, 1, 8);
    const NonNegMatrix a = gen::mixed(rng, n);
    const NonNegMatrix noise = gen::mixed(rng, n, gen::uniform(rng, 0.0, 2.0));
    const NonNegMatrix b(add_scaled(a, 1.0, noise));
    const auto ca = perron_root(a);
    const auto cb = perron_root(b);
    if (!(ca.mid() <= cb.mid() + ca.width() + cb.width())) ++violations;
  }
  return {violations == 0, fmt("1000 pairs, %d violations", violations)};
}

// 3. |rho(A+E) - rho(A)| <= ||E||_F / q* for irreducible A.
Outcome certificate_soundness() {
  const auto start = Clock::now();
  gen::Rng rng(1003);
  int violations = 0;
  double tightest = 0.0;
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = gen::uniform_int(rng, 1, 6);
    const NonNegMatrix a = gen::irreducible(rng, n, gen::uniform(rng, 0.2, 1.0));
    const RealMatrix raw = RealMatrix::generate(n, [&](auto, auto) { return gen::uniform(rng, -1.0, 1.0); });
    const double target = gen::uniform(rng, 0.0, 0.1);
    const double raw_norm = frobenius_norm(raw);
    const RealMatrix e = RealMatrix::generate(n, [&](std::size_t i, std::size_t j) {
      return std::max(-a(i, j), raw(i, j) * target / raw_norm);
    });
    const NonNegMatrix ap(add_scaled(a, 1.0, e));
    const RealMatrix actual_e = difference(ap, a);
    const double e_norm = frobenius_norm(actual_e);
    if (e_norm > 0.1) ++violations;

    const auto ca = perron_irreducible(a);
    const auto cp = perron_root(ap);
    const double shift = std::abs(cp.mid() - ca.mid());
    const double allowed = e_norm / q_star(ca) + ca.width() + cp.width();
    if (!(shift <= allowed)) ++violations;
    if (allowed > 0.0) tightest = std::max(tightest, shift / allowed);
  }
  const double secs = seconds_since(start);
  return {violations == 0 && secs < 60.0,
          fmt("500 perturbations, %d violations, max shift/bound %.3f, %.1f s", violations, tightest, secs)};
}

bool strongly_connected(const RealMatrix& a) { return oracle::components_by_closure(a).size() == 1; }

std::vector<std::size_t> sorted(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// 4. Planted block structure is recovered.
Outcome fnf_recovery() {
  gen::Rng rng(1004);
  int violations = 0;
  for (int t = 0; t < 500; ++t) {
    const auto planted = gen::planted_blocks(rng, gen::random_sizes(rng, 10, 5));
    const NonNegMatrix& a = planted.matrix;
    const auto fnf = frobenius_normal_form(a);
    bool ok = true;

    // Reconstruction: blocks tile P A P^T, nothing below the block diagonal.
    const NonNegMatrix pa = apply_symmetric_permutation(a, fnf.perm);
    std::vector<std::size_t> block_of(a.size());
    std::size_t offset = 0;
    for (std::size_t b = 0; b < fnf.blocks.size(); ++b) {
      ok = ok && fnf.blocks[b].offset == offset && fnf.blocks[b].size >= 1;
      for (std::size_t i = 0; i < fnf.blocks[b].size && offset + i < a.size(); ++i) block_of[offset + i] = b;
      ok = ok && fnf.block_matrices[b] == principal_block(pa, fnf.blocks[b].offset, fnf.blocks[b].size);
      ok = ok && strongly_connected(fnf.block_matrices[b]);
      offset += fnf.blocks[b].size;
    }
    ok = ok && offset == a.size();
    for (std::size_t i = 0; ok && i < a.size(); ++i)
      for (std::size_t j = 0; j < a.size(); ++j)
        if (block_of[i] > block_of[j] && pa(i, j) != 0.0) ok = false;
    // Undo the permutation and compare with the input exactly.
    ok = ok && apply_symmetric_permutation(pa, fnf.perm.inverse()) == a;
    ok = ok && sorted(fnf.block_sizes()) == sorted(planted.sizes);

    // Largest block root is the whole-matrix root.
    const auto certs = certify_blocks(fnf);
    const auto whole = perron_root(a);
    const auto& top = *std::max_element(certs.begin(), certs.end(), [](const auto& x, const auto& y) {
      return x.mid() < y.mid();
    });
    ok = ok && std::abs(top.mid() - whole.mid()) <= top.width() + whole.width();
    if (!ok) ++violations;
  }
  return {violations == 0, fmt("500 planted structures, %d violations", violations)};
}

// 5. Reducible-base traces: block root below the whole root, final row close.
Outcome reducible_traces() {
  gen::Rng rng(1005);
  int violations = 0, rows = 0;
  double tightest = 0.0;
  for (int t = 0; t < 100; ++t) {
    NonNegMatrix base{{0}};
    do {
      std::vector<std::size_t> sizes;
      do sizes = gen::random_sizes(rng, 8, 4);
      while (sizes.size() < 2);
      base = gen::planted_blocks(rng, sizes).matrix;
    } while (is_irreducible(base) || is_nilpotent(base));
    const std::size_t n = base.size();
    const NonNegMatrix direction = gen::nonneg(rng, n, gen::uniform(rng, 0.2, 1.0), 1.0);
    const SequenceSpec spec{base, direction, Schedule{}, 20, false};
    const auto trace = run_reducible_trace(spec);

    for (const auto& r : trace.rows) {
      ++rows;
      if (!(r.block_root->lo <= r.r.hi)) ++violations;
    }
    const auto& last = trace.rows.back();
    const double threshold = 2.0 * last.s * frobenius_norm(direction) * static_cast<double>(n);
    const double dev = std::abs(last.block_root->mid() - trace.base.mid());
    if (!(dev <= threshold)) ++violations;
    if (threshold > 0.0) tightest = std::max(tightest, dev / threshold);
  }
  return {violations == 0,
          fmt("100 traces, %d rows, %d violations, max final deviation/threshold %.3f", rows, violations, tightest)};
}

// 6. Nilpotent base [[0,1],[0,0]] with the lower-left unit direction.
Outcome nilpotent_branch() {
  const SequenceSpec spec{NonNegMatrix{{0, 1}, {0, 0}}, RealMatrix{{0, 0}, {1, 0}}, Schedule{}, 20, false};
  const auto trace = run_nilpotent_trace(spec);
  int violations = 0;
  double worst = 0.0;
  for (const auto& r : trace.rows) {
    const double k = static_cast<double>(r.k);
    const double expected = 1.0 / std::sqrt(k);
    const double rel = std::abs(r.r.mid() - expected) / expected;
    worst = std::max(worst, rel);
    if (rel > 1e-8) ++violations;
    // A_k^2 = (1/k) I
    const double sq_norm = one_norm(matrix_power(sequence_term(spec, r.k), 2));
    if (std::abs(sq_norm - 1.0 / k) > 1e-15) ++violations;
    if (!(r.r.hi * r.r.hi <= sq_norm + 1e-10)) ++violations;
  }
  return {violations == 0 && trace.rows.size() == 20,
          fmt("%zu rows, %d violations, worst relative error %.2e", trace.rows.size(), violations, worst)};
}

// 7. residual(alpha X) = alpha residual(X).
Outcome gelfand_homogeneity() {
  gen::Rng rng(1007);
  const std::vector<double> alphas{2.0, 10.0, 100.0};
  int violations = 0, checked = 0, vacuous = 0;
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const NonNegMatrix x = gen::mixed(rng, gen::uniform_int(rng, 1, 6));
    for (std::size_t m = 1; m <= 10; ++m) {
      const auto demo = nonuniformity_demo(x, m, alphas);
      if (demo.vacuous) {
        ++vacuous;
        continue;
      }
      for (const auto& row : demo.rows) {
        ++checked;
        const double expected = row.alpha * demo.residual;
        const double rel = std::abs(row.residual - expected) / std::abs(expected);
        worst = std::max(worst, rel);
        if (!(rel <= 1e-12)) ++violations;
      }
    }
  }
  return {violations == 0 && checked > 0,
          fmt("%d checks (%d vacuous (X, m) skipped), %d violations, worst relative error %.2e", checked, vacuous,
              violations, worst)};
}

// 8. rho(A^p) and rho(A)^p intervals intersect.
Outcome power_identity() {
  gen::Rng rng(1008);
  int violations = 0;
  for (int t = 0; t < 200; ++t) {
    const NonNegMatrix a = gen::mixed(rng, gen::uniform_int(rng, 1, 6));
    for (std::size_t p : {2u, 3u})
      if (!power_radius_identity_check(a, p).consistent()) ++violations;
  }
  return {violations == 0, fmt("200 matrices x p in {2,3}, %d violations", violations)};
}

std::string run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "perronroot");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return std::to_string(code) + '\n' + out.str() + err.str();
}

// 9. Byte-identical CLI output; FNF verdicts invariant under permutation.
Outcome determinism() {
  const std::filesystem::path dir(PERRONROOT_FIXTURE_DIR);
  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());

  gen::Rng rng(1009);
  int mismatches = 0, matrices = 0, runs = 0;
  for (const auto& f : files) {
    for (const char* sub : {"analyze", "gelfand"}) {
      const auto first = run_cli({sub, f});
      for (int rep = 0; rep < 2; ++rep) {
        ++runs;
        if (run_cli({sub, f}) != first) ++mismatches;
      }
    }
    NonNegMatrix a{{0}};
    try {
      a = read_nonneg_matrix(f);
    } catch (const error&) {
      continue;  // deliberately malformed fixtures
    }
    ++matrices;
    const auto ref = frobenius_normal_form(a);
    const auto ref_sizes = sorted(ref.block_sizes());
    const bool ref_irr = is_irreducible(a);
    for (int t = 0; t < 50; ++t) {
      const NonNegMatrix pa = apply_symmetric_permutation(a, gen::permutation(rng, a.size()));
      if (sorted(frobenius_normal_form(pa).block_sizes()) != ref_sizes || is_irreducible(pa) != ref_irr)
        ++mismatches;
    }
  }
  // Trace and certificate commands on a fixed set of fixture pairs.
  const std::vector<std::vector<std::string>> pairs{
      {"certify", (dir / "cycle2.txt").string(), (dir / "cycle2_perturbed.txt").string()},
      {"converge", (dir / "blocks3.txt").string(), (dir / "direction3.txt").string()},
      {"converge", (dir / "nilpotent2.txt").string(), (dir / "lower_unit2.txt").string(), "--format", "csv"},
  };
  for (const auto& cmd : pairs) {
    const auto first = run_cli(cmd);
    ++runs;
    if (run_cli(cmd) != first) ++mismatches;
  }
  return {mismatches == 0 && matrices > 0,
          fmt("%d repeated CLI runs, %d fixture matrices x 50 permutations, %d mismatches", runs, matrices,
              mismatches)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"oracle enclosure", oracle_enclosure},
      {"monotonicity", monotonicity},
      {"perturbation certificate soundness", certificate_soundness},
      {"normal form recovery", fnf_recovery},
      {"reducible-base traces", reducible_traces},
      {"nilpotent branch", nilpotent_branch},
      {"Gelfand homogeneity", gelfand_homogeneity},
      {"power identity", power_identity},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
