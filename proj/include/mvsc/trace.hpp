#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mvsc/solver.hpp"

namespace mvsc::trace {

/// One row of a residual trace CSV.
struct TraceRow {
  int iter = 0;
  double residual_C = 0.0;
  double residual_Z = 0.0;
  double gap_Y = 0.0;
  double gap_CiZi = 0.0;
  double gap_Ci1 = 0.0;
  double gap_CZ = 0.0;
  double gap_C1 = 0.0;
  double objective = 0.0;
};

inline constexpr const char* kTraceHeader =
    "iter,residual_C,residual_Z,gap_Y,gap_CiZi,gap_Ci1,gap_CZ,gap_C1,objective";

std::vector<TraceRow> to_rows(const solver::Diagnostics& diagnostics);
void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& rows);
std::vector<TraceRow> read_trace_csv(const std::filesystem::path& path);

/// Standalone SVG with log10-scaled residual_C and residual_Z polylines against
/// the iteration index. The y-axis spans the [min, max] of the plotted values;
/// non-positive residuals are drawn at the smallest positive value present.
/// Throws InvalidArgument for an empty trace.
std::string convergence_svg(const std::vector<TraceRow>& rows, const std::string& title = {});

/// Reads a trace CSV and writes its convergence plot.
void emit_convergence_plot(const std::filesystem::path& trace_csv,
                           const std::filesystem::path& svg_out);

}  // namespace mvsc::trace
