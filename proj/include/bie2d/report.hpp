#pragma once

// Structured text reports: "key = value" lines plus simple delimited tables,
// deterministic down to the last bit so runs can be diffed directly.

#include <algorithm>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bie2d/problems.hpp"

namespace bie2d {

// Shortest decimal text that parses back to exactly the same double.
inline std::string format_double(double v) {
  char buf[40];
  for (int prec = 1; prec <= 17; prec++) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v || (v != v && back != back)) break;
  }
  return buf;
}

inline std::string format_hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%016" PRIx64, v);
  return buf;
}

class ReportDoc {
 public:
  void add(std::string_view key, std::string_view value) {
    body_ += key;
    body_ += " = ";
    body_ += value;
    body_ += '\n';
  }
  void add(std::string_view key, double value) { add(key, format_double(value)); }
  void add(std::string_view key, int value) { add(key, std::to_string(value)); }
  void add(std::string_view key, std::size_t value) { add(key, std::to_string(value)); }
  void add(std::string_view key, Vec2 value) {
    add(key, format_double(value.x) + " " + format_double(value.y));
  }
  void comment(std::string_view text) {
    body_ += "# ";
    body_ += text;
    body_ += '\n';
  }
  void blank() { body_ += '\n'; }

  void begin_table(std::string_view name, const std::vector<std::string>& columns) {
    body_ += "[table ";
    body_ += name;
    body_ += "]\n";
    for (std::size_t i = 0; i < columns.size(); i++) {
      if (i) body_ += '\t';
      body_ += columns[i];
    }
    body_ += '\n';
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); i++) {
      if (i) body_ += '\t';
      body_ += cells[i];
    }
    body_ += '\n';
  }

  const std::string& str() const { return body_; }

 private:
  std::string body_;
};

// Standard report body for a solved problem: scalars first, then one row per
// body with whichever quantities the problem produces.
inline void describe_solution(ReportDoc& doc, const Assembly& asmb, const SolveReport& rep,
                              std::string_view table_name = "bodies",
                              std::string_view key_prefix = "") {
  const std::string pre(key_prefix);
  doc.add(pre + "problem", problem_name(rep.kind));
  doc.add(pre + "body_count", asmb.bodies.size());
  doc.add(pre + "unknowns", rep.stats.dim);
  doc.add(pre + "gmres_iterations", rep.stats.iterations);
  doc.add(pre + "gmres_converged", rep.stats.converged ? "true" : "false");
  if (!rep.stats.residual_history.empty())
    doc.add(pre + "gmres_residual", rep.stats.residual_history.back());
  const bool laplace = rep.kind == ProblemKind::elastance || rep.kind == ProblemKind::capacitance;
  if (laplace)
    doc.add(pre + "u_inf", rep.u_inf_scalar);
  else
    doc.add(pre + "u_inf", rep.u_inf);
  if (!rep.constancy.empty()) {
    double worst = 0.0;
    for (double c : rep.constancy) worst = std::max(worst, c);
    doc.add(pre + "max_constancy_deviation", worst);
  }

  doc.blank();
  std::vector<std::string> cols{"body"};
  if (laplace) {
    cols.push_back("charge");
    cols.push_back("charge_log_coeff");
    cols.push_back("potential");
  } else {
    cols.push_back("force_x");
    cols.push_back("force_y");
    cols.push_back("torque");
    cols.push_back("velocity_x");
    cols.push_back("velocity_y");
    cols.push_back("angular_velocity");
  }
  doc.begin_table(table_name, cols);
  for (std::size_t b = 0; b < asmb.bodies.size(); b++) {
    std::vector<std::string> cells{std::to_string(b + 1)};
    if (laplace) {
      cells.push_back(format_double(rep.q[b]));
      cells.push_back(format_double(charge_log_coefficient(rep.q[b])));
      cells.push_back(format_double(rep.phi[b]));
    } else {
      cells.push_back(format_double(rep.F[b].x));
      cells.push_back(format_double(rep.F[b].y));
      cells.push_back(format_double(rep.T[b]));
      cells.push_back(format_double(rep.v[b].x));
      cells.push_back(format_double(rep.v[b].y));
      cells.push_back(format_double(rep.omega[b]));
    }
    doc.row(cells);
  }
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

// Grid file: one point per line, "x y region values..."; region -1 marks
// exterior points, a nonnegative value flags the interior of that body (the
// row then carries the body's constant boundary value).
inline std::string grid_text(const FieldGrid& g) {
  std::string out;
  out += "# x\ty\tregion";
  if (g.ncomp == 1) {
    out += "\tu\n";
  } else {
    out += "\tu_x\tu_y\n";
  }
  for (int iy = 0; iy < g.ny; iy++)
    for (int ix = 0; ix < g.nx; ix++) {
      const std::size_t idx = (std::size_t)iy * g.nx + ix;
      const Vec2 p = g.point(ix, iy);
      out += format_double(p.x);
      out += '\t';
      out += format_double(p.y);
      out += '\t';
      out += std::to_string(g.region[idx]);
      for (int c = 0; c < g.ncomp; c++) {
        out += '\t';
        out += format_double(g.values[idx * g.ncomp + c]);
      }
      out += '\n';
    }
  return out;
}

} // namespace bie2d
