#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "bsl/bench.hpp"

namespace bsl::plots {

/// One box of a panel: a label and its sensitivity sample.
struct BoxSeries {
    std::string topology;
    learn::Algorithm algorithm = learn::Algorithm::pc_stable;
    std::vector<double> values;
};

/// Writes a box-whisker panel. Each non-empty series becomes one
/// <g class="box"> element. Returns the number of boxes drawn.
int write_box_panel(std::ostream& out, const std::string& title,
                    const std::vector<BoxSeries>& series);

/// Log10 vertical axis from `lo` (bottom) to `hi` (top) over [top_px, bottom_px].
struct LogAxis {
    double lo = 1e-6;
    double hi = 1.0;
    double top_px = 40.0;
    double bottom_px = 360.0;

    double y(double p) const;
};

/// Scatter of comparison p-values on a log scale with a horizontal line at
/// alpha (<line class="alpha">). Rows without a test are left out.
void write_pvalue_scatter(std::ostream& out, const std::string& title,
                          const std::vector<bench::ComparisonRow>& rows, double alpha);

struct PlotOptions {
    double alpha = 0.05;
    std::pair<std::string, std::string> pair{"B", "U"};
};

struct PlotReport {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> warnings;
};

/// One box panel per (model, n_nodes, sigma) and one p-value scatter per
/// model, written into out_dir. Failed runs and missing sensitivities are
/// left out; groups left empty are skipped with a warning.
PlotReport emit_plots(const std::vector<bench::RunRecord>& records,
                      const std::filesystem::path& out_dir, const PlotOptions& options = {});

}  // namespace bsl::plots
