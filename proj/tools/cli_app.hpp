#pragma once

// Command-line front end. Kept in a header so tests can drive it in-process
// with captured streams.
//
// Exit codes: 0 success/PASS, 1 an invariant FAILed, 2 input or parse error,
// 3 precondition violation.

#include <CLI11.hpp>

#include <exception>
#include <ostream>
#include <string>
#include <vector>

#include "perronroot/perronroot.hpp"

namespace perronroot::cli {

enum ExitCode : int { exit_ok = 0, exit_fail = 1, exit_input = 2, exit_precondition = 3 };

struct RunConfig {
  std::string subcommand;
  std::vector<std::string> inputs;
  double tol = 1e-12;
  std::size_t max_iter = 1'000'000;
  std::string schedule = "inv-k";
  double scale = 1.0;
  std::size_t count = 20;
  bool clamp = false;
  std::size_t m_max = 10;
  std::vector<double> alphas{2.0, 10.0, 100.0};
  std::string format = "table";

  SolverOptions solver() const { return {tol, max_iter}; }
  OutputFormat output() const { return format == "csv" ? OutputFormat::csv : OutputFormat::table; }

  void validate() const {
    if (!(tol > 0.0)) throw domain_violation("--tol must be positive");
    if (max_iter < 1) throw domain_violation("--max-iter must be at least 1");
    if (count < 1) throw domain_violation("--count must be at least 1");
    if (m_max < 1) throw domain_violation("--m-max must be at least 1");
    for (double a : alphas)
      if (!(a > 0.0)) throw domain_violation("--alphas values must be positive");
  }
};

inline Schedule parse_schedule(const std::string& text, double scale) {
  Schedule s;
  s.scale = scale;
  if (text == "inv-k") {
    s.rule = ScheduleRule::inverse_k;
  } else if (text == "inv-k2") {
    s.rule = ScheduleRule::inverse_k2;
  } else if (text.rfind("geom:", 0) == 0) {
    s.rule = ScheduleRule::geometric;
    try {
      std::size_t used = 0;
      s.ratio = std::stod(text.substr(5), &used);
      if (used != text.size() - 5) throw std::invalid_argument(text);
    } catch (const std::logic_error&) {
      throw domain_violation("bad geometric ratio in --schedule '" + text + "'");
    }
  } else {
    throw domain_violation("unknown --schedule '" + text + "' (inv-k, inv-k2, geom:<ratio>)");
  }
  s.validate();
  return s;
}

namespace detail {

inline std::string vector_text(std::span<const double> v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_real(v[i]);
  }
  return s + "]";
}

inline std::string interval_text(const Interval& r) {
  return "[" + format_real(r.lo) + ", " + format_real(r.hi) + "]";
}

}  // namespace detail

inline int cmd_analyze(const RunConfig& cfg, std::ostream& out) {
  const NonNegMatrix a = read_nonneg_matrix(cfg.inputs.at(0));
  const auto opts = cfg.solver();
  const auto fnf = frobenius_normal_form(a);
  const auto block_certs = certify_blocks(fnf, opts);
  const bool irreducible = is_irreducible(a);
  const auto nil = nilpotency_index(a);
  const auto cert = perron_root(a, opts);

  out << "dimension: " << a.size() << '\n';
  out << "irreducible: " << (irreducible ? "yes" : "no") << '\n';
  out << "blocks: [";
  for (std::size_t k = 0; k < fnf.blocks.size(); ++k) out << (k ? "," : "") << fnf.blocks[k].size;
  out << "]\n";
  out << "permutation: [";
  for (std::size_t k = 0; k < fnf.perm.size(); ++k) out << (k ? " " : "") << fnf.perm(k);
  out << "]\n";
  if (nil)
    out << "nilpotent: yes (p=" << *nil << ")\n";
  else
    out << "nilpotent: no\n";
  for (std::size_t k = 0; k < block_certs.size(); ++k)
    out << "block " << k << ": size " << fnf.blocks[k].size << ", rho in "
        << detail::interval_text(block_certs[k].root) << '\n';
  out << "spectral_block: " << spectral_block(block_certs) << '\n';
  out << "rho in " << detail::interval_text(cert.root) << '\n';
  out << "converged: " << (cert.converged ? "yes" : "no") << '\n';
  out << "iterations: " << cert.iterations << '\n';
  if (irreducible) {
    out << "right_vector: " << detail::vector_text(*cert.right_vector) << '\n';
    out << "left_vector: " << detail::vector_text(*cert.left_vector) << '\n';
    out << "residual: " << format_real(*cert.residual) << '\n';
    out << "q_star: " << format_real(q_star(cert)) << '\n';
  }
  return exit_ok;
}

inline int cmd_certify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const NonNegMatrix a = read_nonneg_matrix(cfg.inputs.at(0));
  const NonNegMatrix a_prime = read_nonneg_matrix(cfg.inputs.at(1));
  require_same_size(a, a_prime);
  if (!is_irreducible(a)) {
    err << "error: A is reducible; the continuity certificate needs an irreducible A "
           "(run `analyze` to inspect its block structure)\n";
    return exit_precondition;
  }
  const auto opts = cfg.solver();
  const auto pb = continuity_certificate(a, a_prime, opts);
  const auto target = perron_root(a_prime, opts);
  const bool sound = pb.enclosure.intersects(target.root);

  out << "q_star: " << format_real(pb.q_star) << '\n';
  out << "norm: " << PerturbationBound::norm_name << '\n';
  out << "e_norm: " << format_real(pb.e_norm) << '\n';
  out << "bound: " << format_real(pb.bound) << '\n';
  out << "slack: " << format_real(pb.slack) << '\n';
  out << "rho(A) in " << detail::interval_text(pb.base.root) << '\n';
  out << "enclosure: " << detail::interval_text(pb.enclosure) << '\n';
  out << "rho(A') in " << detail::interval_text(target.root) << '\n';
  out << "soundness: " << verdict(sound) << '\n';
  return sound ? exit_ok : exit_fail;
}

inline int cmd_converge(const RunConfig& cfg, std::ostream& out) {
  SequenceSpec spec{read_nonneg_matrix(cfg.inputs.at(0)), read_real_matrix(cfg.inputs.at(1)),
                    parse_schedule(cfg.schedule, cfg.scale), cfg.count, cfg.clamp};
  require_same_size(spec.base, spec.direction);
  const auto trace = run_trace(spec, cfg.solver());
  write_trace(out, trace, cfg.output());
  return trace.all_passed() ? exit_ok : exit_fail;
}

inline int cmd_gelfand(const RunConfig& cfg, std::ostream& out) {
  const NonNegMatrix x = read_nonneg_matrix(cfg.inputs.at(0));
  const auto opts = cfg.solver();
  const auto fmt = cfg.output();
  const auto trace = gelfand_trace(x, cfg.m_max, opts);
  const auto demo = nonuniformity_demo(x, cfg.m_max, cfg.alphas, opts);
  write_gelfand(out, trace, fmt);
  out << '\n';
  write_nonuniformity(out, demo, fmt);
  return trace.all_passed() && demo.all_passed() ? exit_ok : exit_fail;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certified Perron roots, Frobenius normal forms and continuity traces"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--tol", cfg.tol, "relative interval width to stop at")->capture_default_str();
    sub->add_option("--max-iter", cfg.max_iter, "power-iteration cap")->capture_default_str();
  };
  auto formatted = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "table or csv")
        ->check(CLI::IsMember({"table", "csv"}))
        ->capture_default_str();
  };

  auto* analyze = app.add_subcommand("analyze", "structure and certified Perron root of a matrix");
  analyze->add_option("matrix", cfg.inputs, "matrix file")->required()->expected(1);
  common(analyze);

  auto* certify = app.add_subcommand("certify", "continuity bound for rho(A') around irreducible A");
  certify->add_option("files", cfg.inputs, "A and A' matrix files")->required()->expected(2);
  common(certify);

  auto* converge = app.add_subcommand("converge", "trace rho along A_k = base + s_k * direction");
  converge->add_option("files", cfg.inputs, "base and direction matrix files")->required()->expected(2);
  converge->add_option("--schedule", cfg.schedule, "inv-k | inv-k2 | geom:<ratio>")->capture_default_str();
  converge->add_option("--scale", cfg.scale, "schedule constant c")->capture_default_str();
  converge->add_option("--count", cfg.count, "number of terms")->capture_default_str();
  converge->add_flag("--clamp", cfg.clamp, "clamp negative entries of A_k to 0 instead of failing");
  common(converge);
  formatted(converge);

  auto* gelfand = app.add_subcommand("gelfand", "Gelfand sequence and its non-uniformity");
  gelfand->add_option("matrix", cfg.inputs, "matrix file")->required()->expected(1);
  gelfand->add_option("--m-max", cfg.m_max, "largest power")->capture_default_str();
  gelfand->add_option("--alphas", cfg.alphas, "scalings for the non-uniformity table")
      ->delimiter(',')
      ->capture_default_str();
  common(gelfand);
  formatted(gelfand);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_input;
  }

  try {
    cfg.validate();
    if (*analyze) return cmd_analyze(cfg, out);
    if (*certify) return cmd_certify(cfg, out, err);
    if (*converge) return cmd_converge(cfg, out);
    if (*gelfand) return cmd_gelfand(cfg, out);
  } catch (const precondition_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_precondition;
  } catch (const parse_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_input;
  } catch (const dimension_mismatch& e) {
    err << "error: " << e.what() << '\n';
    return exit_input;
  } catch (const domain_violation& e) {
    err << "error: " << e.what() << '\n';
    return exit_input;
  } catch (const error& e) {
    err << "error: " << e.what() << '\n';
    return exit_input;
  }
  return exit_input;
}

}  // namespace perronroot::cli
