#pragma once

// Text rendering of traces: aligned tables for reading, CSV (header row,
// 17 significant digits) for machines. Column sets are fixed per trace kind.

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "perronroot/harness.hpp"
#include "perronroot/matrix_io.hpp"

namespace perronroot {

enum class OutputFormat { table, csv };

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void write(std::ostream& os, OutputFormat fmt) const {
    if (fmt == OutputFormat::csv) {
      write_csv_line(os, header_);
      for (const auto& r : rows_) write_csv_line(os, r);
      return;
    }
    std::vector<std::size_t> width(header_.size());
    for (std::size_t c = 0; c < header_.size(); ++c) {
      width[c] = header_[c].size();
      for (const auto& r : rows_) width[c] = std::max(width[c], r[c].size());
    }
    auto line = [&](const std::vector<std::string>& cells) {
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (c) os << "  ";
        os << std::string(width[c] - cells[c].size(), ' ') << cells[c];
      }
      os << '\n';
    };
    line(header_);
    for (const auto& r : rows_) line(r);
  }

 private:
  static void write_csv_line(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) os << ',';
      os << cells[c];
    }
    os << '\n';
  }

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

inline std::string format_cell(double v, OutputFormat fmt) {
  if (fmt == OutputFormat::csv) return format_real(v);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

inline std::vector<std::string> trace_columns(TraceKind kind) {
  switch (kind) {
    case TraceKind::irreducible: return {"k", "s_k", "r_lo", "r_hi", "deviation", "bound", "check"};
    case TraceKind::reducible: return {"k", "s_k", "r_lo", "r_hi", "deviation", "b_lo", "b_hi", "check"};
    case TraceKind::nilpotent:
      return {"k", "s_k", "r_lo", "r_hi", "deviation", "power_norm_root", "check"};
  }
  return {};
}

inline Table trace_table(const ConvergenceTrace& t, OutputFormat fmt) {
  Table table(trace_columns(t.kind));
  for (const auto& r : t.rows) {
    std::vector<std::string> cells{std::to_string(r.k), format_cell(r.s, fmt), format_cell(r.r.lo, fmt),
                                   format_cell(r.r.hi, fmt), format_cell(r.deviation, fmt)};
    switch (t.kind) {
      case TraceKind::irreducible: cells.push_back(format_cell(*r.bound, fmt)); break;
      case TraceKind::reducible:
        cells.push_back(format_cell(r.block_root->lo, fmt));
        cells.push_back(format_cell(r.block_root->hi, fmt));
        break;
      case TraceKind::nilpotent: cells.push_back(format_cell(*r.power_norm_root, fmt)); break;
    }
    cells.emplace_back(verdict(r.pass));
    table.add_row(std::move(cells));
  }
  return table;
}

inline void write_trace(std::ostream& os, const ConvergenceTrace& t, OutputFormat fmt) {
  if (fmt == OutputFormat::table) {
    os << "trace: " << to_string(t.kind) << '\n';
    os << "rho(base): [" << format_real(t.base.lo()) << ", " << format_real(t.base.hi()) << "]\n";
    if (t.q_star) os << "q_star: " << format_real(*t.q_star) << '\n';
    if (t.spectral_range)
      os << "spectral_block: " << *t.spectral_block << " (offset " << t.spectral_range->offset
         << ", size " << t.spectral_range->size << ")\n";
    if (t.nilpotency_index) os << "nilpotency_index: " << *t.nilpotency_index << '\n';
  }
  trace_table(t, fmt).write(os, fmt);
  if (fmt == OutputFormat::table) {
    if (t.final_threshold)
      os << "final block deviation: " << format_real(*t.final_block_deviation)
         << " (threshold " << format_real(*t.final_threshold) << ") " << verdict(t.final_pass) << '\n';
    os << "result: " << verdict(t.all_passed()) << '\n';
  }
}

inline void write_gelfand(std::ostream& os, const GelfandTrace& t, OutputFormat fmt) {
  if (fmt == OutputFormat::table)
    os << "rho(X): [" << format_real(t.root.lo()) << ", " << format_real(t.root.hi()) << "]\n";
  Table table({"m", "f_m", "residual", "check"});
  for (const auto& r : t.rows)
    table.add_row({std::to_string(r.m), format_cell(r.f, fmt), format_cell(r.residual, fmt), verdict(r.pass)});
  table.write(os, fmt);
}

inline void write_nonuniformity(std::ostream& os, const NonuniformityDemo& d, OutputFormat fmt) {
  if (fmt == OutputFormat::table) {
    os << "non-uniformity at m = " << d.m << ", residual(X) = " << format_real(d.residual) << '\n';
    if (d.vacuous) os << "note: vacuous demo, f_m(X) equals rho(X) at certified precision\n";
  }
  Table table({"alpha", "residual", "expected", "check"});
  for (const auto& r : d.rows)
    table.add_row({format_cell(r.alpha, fmt), format_cell(r.residual, fmt), format_cell(r.expected, fmt),
                   d.vacuous ? "VACUOUS" : verdict(r.pass)});
  table.write(os, fmt);
}

}  // namespace perronroot
