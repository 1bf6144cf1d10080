#include "mvsc/trace.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "mvsc/data.hpp"
#include "mvsc/error.hpp"

namespace mvsc::trace {

std::vector<TraceRow> to_rows(const solver::Diagnostics& diagnostics) {
  std::vector<TraceRow> rows;
  rows.reserve(diagnostics.size());
  for (const auto& d : diagnostics)
    rows.push_back({d.iter, d.residual_C, d.residual_Z, d.gaps.Y, d.gaps.CiZi, d.gaps.Ci1,
                    d.gaps.CZ, d.gaps.C1, d.objective});
  return rows;
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& rows) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << kTraceHeader << '\n';
  char buf[64];
  auto put = [&](double v) {
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out << ',';
    out.write(buf, p - buf);
  };
  for (const TraceRow& r : rows) {
    out << r.iter;
    for (double v : {r.residual_C, r.residual_Z, r.gap_Y, r.gap_CiZi, r.gap_Ci1, r.gap_CZ,
                     r.gap_C1, r.objective})
      put(v);
    out << '\n';
  }
}

std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) throw DataError(path.string() + ": unexpected trace header");

  std::vector<TraceRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double v[9];
    int count = 0;
    const char* p = line.data();
    const char* end = p + line.size();
    while (count < 9) {
      auto [q, ec] = std::from_chars(p, end, v[count]);
      if (ec != std::errc()) break;
      ++count;
      p = q;
      if (p == end || *p != ',') break;
      ++p;
    }
    if (count != 9 || p != end)
      throw DataError(path.string() + ": malformed trace row " + std::to_string(lineno));
    rows.push_back({static_cast<int>(v[0]), v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]});
  }
  return rows;
}

std::string convergence_svg(const std::vector<TraceRow>& rows, const std::string& title) {
  if (rows.empty()) throw InvalidArgument("convergence plot: empty trace");

  double min_pos = std::numeric_limits<double>::infinity();
  for (const TraceRow& r : rows)
    for (double v : {r.residual_C, r.residual_Z})
      if (v > 0.0 && std::isfinite(v)) min_pos = std::min(min_pos, v);
  if (!std::isfinite(min_pos)) min_pos = 1.0;
  auto logv = [&](double v) { return std::log10(v > 0.0 && std::isfinite(v) ? v : min_pos); };

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const TraceRow& r : rows)
    for (double v : {r.residual_C, r.residual_Z}) {
      lo = std::min(lo, logv(v));
      hi = std::max(hi, logv(v));
    }
  const double ymin = std::pow(10.0, lo), ymax = std::pow(10.0, hi);
  if (hi - lo < 1e-12) {
    lo -= 0.5;
    hi += 0.5;
  }
  const int x_first = rows.front().iter, x_last = rows.back().iter;

  constexpr double W = 720, H = 440, L = 80, R = 150, T = 40, B = 50;
  const double pw = W - L - R, ph = H - T - B;
  auto px = [&](int it) {
    return x_last == x_first ? L + pw / 2 : L + pw * (it - x_first) / double(x_last - x_first);
  };
  auto py = [&](double v) { return T + ph * (hi - logv(v)) / (hi - lo); };

  std::ostringstream s;
  s.precision(6);
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << ' ' << H << "\" data-ymin=\"" << ymin << "\" data-ymax=\""
    << ymax << "\" data-points=\"" << rows.size() << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) s << "<text x=\"" << L << "\" y=\"24\" font-size=\"14\">" << title << "</text>\n";
  s << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  s << "<text x=\"" << L - 6 << "\" y=\"" << T + 4 << "\" font-size=\"11\" text-anchor=\"end\">"
    << ymax << "</text>\n";
  s << "<text x=\"" << L - 6 << "\" y=\"" << T + ph << "\" font-size=\"11\" text-anchor=\"end\">"
    << ymin << "</text>\n";
  s << "<text x=\"" << L << "\" y=\"" << H - 20 << "\" font-size=\"11\">" << x_first << "</text>\n";
  s << "<text x=\"" << L + pw << "\" y=\"" << H - 20 << "\" font-size=\"11\" text-anchor=\"end\">"
    << x_last << "</text>\n";
  s << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 8
    << "\" font-size=\"12\" text-anchor=\"middle\">iteration</text>\n";

  const struct {
    const char* name;
    const char* color;
    double TraceRow::*field;
  } series[] = {{"residual_C", "#1f77b4", &TraceRow::residual_C},
                {"residual_Z", "#d62728", &TraceRow::residual_Z}};
  int slot = 0;
  for (const auto& ser : series) {
    s << "<polyline class=\"" << ser.name << "\" fill=\"none\" stroke=\"" << ser.color
      << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i) s << ' ';
      s << px(rows[i].iter) << ',' << py(rows[i].*ser.field);
    }
    s << "\"/>\n";
    const double ly = T + 16 + 18 * slot++;
    s << "<line x1=\"" << L + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << L + pw + 36 << "\" y2=\""
      << ly << "\" stroke=\"" << ser.color << "\" stroke-width=\"2\"/>\n";
    s << "<text x=\"" << L + pw + 42 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">" << ser.name
      << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

void emit_convergence_plot(const std::filesystem::path& trace_csv,
                           const std::filesystem::path& svg_out) {
  const auto rows = read_trace_csv(trace_csv);
  std::ofstream out(svg_out);
  if (!out) throw DataError("cannot write " + svg_out.string());
  out << convergence_svg(rows, trace_csv.parent_path().filename().string());
}

}  // namespace mvsc::trace
