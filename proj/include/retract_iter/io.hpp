#pragma once

// Flat-file emission and re-validation. All floats are written as the
// shortest decimal that round-trips to the same 64-bit value, so identical
// runs produce bitwise-identical files.

#include <charconv>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "retract_iter/certify.hpp"
#include "retract_iter/errors.hpp"
#include "retract_iter/iterate.hpp"
#include "retract_iter/mapexpr.hpp"  // format_double
#include "retract_iter/space.hpp"

namespace retract_iter {

inline constexpr const char* kTraceHeader = "n,x,y,r1,r2,dist_p,power_gap,step_delta";
inline constexpr const char* kCertifyHeader =
    "check_name,n,margin_or_estimate,worst_x,worst_y,verdict";
inline constexpr const char* kSummaryHeader =
    "scheme,iterations,terminal_reason,final_r_max,rate_rho";

inline std::string format_vector(const Vector& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += format_double(v[i]);
  }
  return out;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot open for writing: " + path);
  f << content;
  if (!f) throw InvalidInput("write failed: " + path);
}

inline std::string render_trace_csv(const IterTrace& trace) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const auto& row : trace.rows) {
    out += std::to_string(row.n);
    out += ',';
    out += format_vector(row.x);
    out += ',';
    if (row.y) out += format_vector(*row.y);
    out += ',';
    out += format_double(row.r1);
    out += ',';
    out += format_double(row.r2);
    out += ',';
    if (row.dist_p) out += format_double(*row.dist_p);
    out += ',';
    if (row.power_gap) out += format_double(*row.power_gap);
    out += ',';
    if (row.step_delta) out += format_double(*row.step_delta);
    out += '\n';
  }
  out += "# terminal: ";
  out += to_string(trace.reason);
  out += '\n';
  return out;
}

struct CertifyCsvRow {
  std::string check_name;
  std::size_t n = 0;
  double value = 0.0;
  Vector worst_x, worst_y;
  bool pass = true;
};

inline std::string render_certify_csv(const std::vector<CertifyCsvRow>& rows) {
  std::string out = kCertifyHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += r.check_name;
    out += ',';
    out += std::to_string(r.n);
    out += ',';
    out += format_double(r.value);
    out += ',';
    out += format_vector(r.worst_x);
    out += ',';
    out += format_vector(r.worst_y);
    out += ',';
    out += r.pass ? "pass" : "fail";
    out += '\n';
  }
  return out;
}

struct SummaryCsvRow {
  std::string scheme;
  std::size_t iterations = 0;
  std::string terminal_reason;
  std::optional<double> final_r_max;
  std::optional<double> rate_rho;
};

inline std::string render_summary_csv(const std::vector<SummaryCsvRow>& rows) {
  std::string out = kSummaryHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += r.scheme;
    out += ',';
    out += std::to_string(r.iterations);
    out += ',';
    out += r.terminal_reason;
    out += ',';
    if (r.final_r_max) out += format_double(*r.final_r_max);
    out += ',';
    if (r.rate_rho) out += format_double(*r.rate_rho);
    out += '\n';
  }
  return out;
}

// -- SVG convergence plot ------------------------------------------------------

// Fixed 800x600 line chart of log10(r1), log10(r2) and log10(dist_p) against
// n. Non-positive values cannot be drawn on a log axis and are skipped.
inline std::string render_trace_svg(const IterTrace& trace) {
  const double width = 800, height = 600;
  const double ml = 70, mr = 20, mt = 40, mb = 50;  // margins

  struct Series {
    const char* label;
    const char* color;
    std::vector<std::pair<double, double>> pts;  // (n, log10 value)
  };
  Series series[3] = {{"log10 r1", "#1f77b4", {}},
                      {"log10 r2", "#d62728", {}},
                      {"log10 dist_p", "#2ca02c", {}}};
  for (const auto& row : trace.rows) {
    double n = static_cast<double>(row.n);
    if (row.r1 > 0.0) series[0].pts.emplace_back(n, std::log10(row.r1));
    if (row.r2 > 0.0) series[1].pts.emplace_back(n, std::log10(row.r2));
    if (row.dist_p && *row.dist_p > 0.0)
      series[2].pts.emplace_back(n, std::log10(*row.dist_p));
  }

  double xmin = 1.0, xmax = 1.0, ymin = 0.0, ymax = 0.0;
  bool any = false;
  for (const auto& s : series)
    for (auto [x, y] : s.pts) {
      if (!any) {
        xmin = xmax = x;
        ymin = ymax = y;
        any = true;
      }
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (!any) {
    xmax = static_cast<double>(trace.rows.empty() ? 1 : trace.rows.back().n);
    ymin = -1.0;
    ymax = 1.0;
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;

  auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
  auto sy = [&](double y) {
    return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\">\n";
  svg << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">convergence</text>\n";
  // axes
  svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << height - mb << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">n</text>\n";
  // y tick labels at the extremes
  svg << "<text x=\"" << ml - 6 << "\" y=\"" << sy(ymin) + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(ymin) << "</text>\n";
  svg << "<text x=\"" << ml - 6 << "\" y=\"" << sy(ymax) + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(ymax) << "</text>\n";
  svg << "<text x=\"" << ml - 6 << "\" y=\"" << height - mb + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(xmin) << "</text>\n";
  svg << "<text x=\"" << width - mr << "\" y=\"" << height - mb + 16
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
      << format_double(xmax) << "</text>\n";

  int legend_y = 46;
  for (const auto& s : series) {
    if (s.pts.empty()) continue;
    svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
    for (auto [x, y] : s.pts) svg << sx(x) << ',' << sy(y) << ' ';
    svg << "\"/>\n";
    svg << "<text x=\"" << width - mr - 110 << "\" y=\"" << legend_y
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << s.color << "\">"
        << s.label << "</text>\n";
    legend_y += 16;
  }
  svg << "</svg>\n";
  return svg.str();
}

// -- CSV re-validation ---------------------------------------------------------

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

inline bool parse_finite(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc{} && ptr == e && std::isfinite(out);
}

inline bool parse_index(const std::string& s, std::size_t& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc{} && ptr == e;
}

inline bool parse_vector_cell(const std::string& s, std::size_t* dim_out = nullptr) {
  if (s.empty()) return false;
  double v;
  std::size_t dim = 0;
  for (const std::string& part : split(s, ';')) {
    if (!parse_finite(part, v)) return false;
    ++dim;
  }
  if (dim_out) *dim_out = dim;
  return true;
}

}  // namespace detail

struct ValidationResult {
  bool ok = true;
  std::string kind;  // trace / certify / summary
  std::string message;
  std::size_t rows = 0;
};

// Re-reads a CSV emitted by this tool and checks it against its schema.
inline ValidationResult validate_csv(const std::string& path) {
  ValidationResult res;
  std::ifstream f(path);
  if (!f) return {false, "", "cannot open: " + path, 0};
  std::string header;
  if (!std::getline(f, header)) return {false, "", "empty file: " + path, 0};

  enum class Kind { Trace, Certify, Summary } kind;
  if (header == kTraceHeader) {
    kind = Kind::Trace;
    res.kind = "trace";
  } else if (header == kCertifyHeader) {
    kind = Kind::Certify;
    res.kind = "certify";
  } else if (header == kSummaryHeader) {
    kind = Kind::Summary;
    res.kind = "summary";
  } else {
    return {false, "", "unrecognized header: " + header, 0};
  }

  auto fail = [&](std::size_t lineno, const std::string& why) {
    res.ok = false;
    res.message = path + ":" + std::to_string(lineno) + ": " + why;
    return res;
  };

  std::string line;
  std::size_t lineno = 1;
  std::size_t prev_n = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto cells = detail::split(line, ',');
    double v;
    std::size_t idx;
    switch (kind) {
      case Kind::Trace: {
        if (cells.size() != 8) return fail(lineno, "expected 8 columns");
        if (!detail::parse_index(cells[0], idx) || idx <= prev_n)
          return fail(lineno, "n must be a strictly increasing positive integer");
        prev_n = idx;
        if (!detail::parse_vector_cell(cells[1])) return fail(lineno, "bad x vector");
        if (!cells[2].empty() && !detail::parse_vector_cell(cells[2]))
          return fail(lineno, "bad y vector");
        for (int c : {3, 4})
          if (!detail::parse_finite(cells[static_cast<std::size_t>(c)], v) || v < 0.0)
            return fail(lineno, "residual columns must be finite and nonnegative");
        for (int c : {5, 6, 7}) {
          const std::string& cell = cells[static_cast<std::size_t>(c)];
          if (!cell.empty() && (!detail::parse_finite(cell, v) || v < 0.0))
            return fail(lineno, "optional norm columns must be finite and nonnegative");
        }
        break;
      }
      case Kind::Certify: {
        if (cells.size() != 6) return fail(lineno, "expected 6 columns");
        if (cells[0].empty()) return fail(lineno, "empty check_name");
        if (!detail::parse_index(cells[1], idx)) return fail(lineno, "bad n");
        if (!detail::parse_finite(cells[2], v)) return fail(lineno, "bad margin_or_estimate");
        if (!cells[3].empty() && !detail::parse_vector_cell(cells[3]))
          return fail(lineno, "bad worst_x");
        if (!cells[4].empty() && !detail::parse_vector_cell(cells[4]))
          return fail(lineno, "bad worst_y");
        if (cells[5] != "pass" && cells[5] != "fail")
          return fail(lineno, "verdict must be pass or fail");
        break;
      }
      case Kind::Summary: {
        if (cells.size() != 5) return fail(lineno, "expected 5 columns");
        if (cells[0].empty()) return fail(lineno, "empty scheme");
        if (!detail::parse_index(cells[1], idx)) return fail(lineno, "bad iterations");
        static const char* reasons[] = {"tol-reached", "max-iter", "stagnation",
                                        "numerical-failure", "invalid-input"};
        bool known = false;
        for (const char* r : reasons) known = known || cells[2] == r;
        if (!known) return fail(lineno, "unknown terminal_reason: " + cells[2]);
        if (!cells[3].empty() && !detail::parse_finite(cells[3], v))
          return fail(lineno, "bad final_r_max");
        if (!cells[4].empty() && !detail::parse_finite(cells[4], v))
          return fail(lineno, "bad rate_rho");
        break;
      }
    }
    ++res.rows;
  }
  if (res.rows == 0) return fail(lineno, "no data rows");
  return res;
}

}  // namespace retract_iter
