#include <algorithm>
#include <cmath>
#include <regex>

#include "doctest.h"
#include "mvsc/error.hpp"
#include "mvsc/trace.hpp"
#include "scratch.hpp"

using namespace mvsc;
using namespace mvsc::trace;

namespace {

std::vector<TraceRow> decreasing(int n) {
  std::vector<TraceRow> rows;
  for (int i = 0; i < n; ++i) {
    TraceRow r;
    r.iter = i + 1;
    r.residual_C = 10.0 * std::pow(0.95, i);
    r.residual_Z = 3.0 * std::pow(0.9, i);
    r.gap_CZ = 1.0 / (i + 1);
    r.objective = 100.0 - i;
    rows.push_back(r);
  }
  return rows;
}

std::vector<std::string> polylines(const std::string& svg) {
  std::vector<std::string> out;
  const std::regex re("<polyline[^>]*points=\"([^\"]*)\"");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it)
    out.push_back((*it)[1]);
  return out;
}

std::size_t count_points(const std::string& pts) {
  return static_cast<std::size_t>(std::count(pts.begin(), pts.end(), ',')) ;
}

double attr(const std::string& svg, const std::string& name) {
  const std::regex re(name + "=\"([^\"]*)\"");
  std::smatch m;
  REQUIRE(std::regex_search(svg, m, re));
  return std::stod(m[1]);
}

}  // namespace

TEST_SUITE("trace") {

TEST_CASE("500-row trace gives two 500-point polylines") {
  const std::string svg = convergence_svg(decreasing(500));
  const auto lines = polylines(svg);
  REQUIRE(lines.size() == 2);
  CHECK(count_points(lines[0]) == 500);
  CHECK(count_points(lines[1]) == 500);
  CHECK(svg.find("class=\"residual_C\"") != std::string::npos);
  CHECK(svg.find("class=\"residual_Z\"") != std::string::npos);
  CHECK(attr(svg, "data-points") == 500);
}

TEST_CASE("single-row trace") {
  const std::string svg = convergence_svg(decreasing(1));
  const auto lines = polylines(svg);
  REQUIRE(lines.size() == 2);
  CHECK(count_points(lines[0]) == 1);
  CHECK(svg.find("nan") == std::string::npos);
  CHECK(svg.find("inf") == std::string::npos);
}

TEST_CASE("y-axis spans the data range") {
  const auto rows = decreasing(120);
  const std::string svg = convergence_svg(rows);
  double lo = INFINITY, hi = 0;
  for (const auto& r : rows) {
    lo = std::min({lo, r.residual_C, r.residual_Z});
    hi = std::max({hi, r.residual_C, r.residual_Z});
  }
  CHECK(attr(svg, "data-ymin") == doctest::Approx(lo).epsilon(1e-5));
  CHECK(attr(svg, "data-ymax") == doctest::Approx(hi).epsilon(1e-5));
}

TEST_CASE("empty trace is rejected") {
  CHECK_THROWS_AS(convergence_svg({}), InvalidArgument);
  scratch::Dir dir("trace_empty");
  write_trace_csv(dir / "t.csv", {});
  CHECK_THROWS_AS(emit_convergence_plot(dir / "t.csv", dir / "p.svg"), InvalidArgument);
}

TEST_CASE("CSV round-trip and plot emission") {
  scratch::Dir dir("trace_rt");
  const auto rows = decreasing(37);
  write_trace_csv(dir / "t.csv", rows);
  const std::string text = scratch::slurp(dir / "t.csv");
  CHECK(text.substr(0, text.find('\n')) == kTraceHeader);
  const auto back = read_trace_csv(dir / "t.csv");
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].iter == rows[i].iter);
    CHECK(back[i].residual_C == rows[i].residual_C);
    CHECK(back[i].residual_Z == rows[i].residual_Z);
    CHECK(back[i].gap_CZ == rows[i].gap_CZ);
    CHECK(back[i].objective == rows[i].objective);
  }
  emit_convergence_plot(dir / "t.csv", dir / "p.svg");
  CHECK(polylines(scratch::slurp(dir / "p.svg")).size() == 2);
}

TEST_CASE("malformed trace CSV") {
  scratch::Dir dir("trace_bad");
  dir.write("bad.csv", std::string(kTraceHeader) + "\n1,2,3\n");
  CHECK_THROWS(read_trace_csv(dir / "bad.csv"));
  dir.write("hdr.csv", "iter,foo\n");
  CHECK_THROWS(read_trace_csv(dir / "hdr.csv"));
}

}  // TEST_SUITE
