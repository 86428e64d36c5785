#include "bsl/plots.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <tuple>

#include "bsl/evaluation.hpp"
#include "bsl/format.hpp"

namespace bsl::plots {

namespace {

constexpr double kWidthPerBox = 48.0;
constexpr double kMarginLeft = 60.0;
constexpr double kMarginRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 360.0;
constexpr double kHeight = 420.0;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += ch;
        }
    }
    return out;
}

// Sensitivity axis, fixed to [0, 1].
double sens_y(double v) { return kBottom - v * (kBottom - kTop); }

void svg_open(std::ostream& out, double width, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
        << num(kHeight) << "\" viewBox=\"0 0 " << num(width) << ' ' << num(kHeight) << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << num(width / 2) << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"14\">" << escape(title) << "</text>\n";
}

void y_tick(std::ostream& out, double y, const std::string& label) {
    out << "<line x1=\"" << num(kMarginLeft - 5) << "\" y1=\"" << num(y) << "\" x2=\""
        << num(kMarginLeft) << "\" y2=\"" << num(y) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << num(kMarginLeft - 8) << "\" y=\"" << num(y + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" << escape(label)
        << "</text>\n";
}

const char* fill_for(std::size_t topology_index) {
    static const char* fills[] = {"#9ecae1", "#a1d99b", "#fdae6b", "#bcbddc", "#fc9272"};
    return fills[topology_index % 5];
}

}  // namespace

int write_box_panel(std::ostream& out, const std::string& title,
                    const std::vector<BoxSeries>& series) {
    const double width =
        kMarginLeft + kMarginRight + kWidthPerBox * static_cast<double>(std::max<std::size_t>(series.size(), 1));
    svg_open(out, width, title);
    out << "<line x1=\"" << num(kMarginLeft) << "\" y1=\"" << num(kTop) << "\" x2=\""
        << num(kMarginLeft) << "\" y2=\"" << num(kBottom) << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) y_tick(out, sens_y(t * 0.25), num(t * 0.25));
    out << "<text x=\"14\" y=\"" << num((kTop + kBottom) / 2) << "\" transform=\"rotate(-90 14 "
        << num((kTop + kBottom) / 2)
        << ")\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
           "sensitivity</text>\n";

    std::map<std::string, std::size_t> topology_index;
    int drawn = 0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        const BoxSeries& s = series[i];
        const std::size_t ti = topology_index.emplace(s.topology, topology_index.size()).first->second;
        const double cx = kMarginLeft + kWidthPerBox * (static_cast<double>(i) + 0.5);
        const std::string alg(learn::to_string(s.algorithm));
        out << "<text x=\"" << num(cx) << "\" y=\"" << num(kBottom + 16)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
            << escape(s.topology) << "</text>\n";
        out << "<text x=\"" << num(cx) << "\" y=\"" << num(kBottom + 30)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"8\">"
            << escape(alg) << "</text>\n";
        if (s.values.empty()) continue;

        const eval::BoxplotSummary b = eval::boxplot_summary(s.values);
        const double half = kWidthPerBox * 0.3;
        out << "<g class=\"box\" data-topology=\"" << escape(s.topology) << "\" data-algorithm=\""
            << alg << "\" data-median=\"" << format_double(b.median) << "\">\n";
        out << "  <line x1=\"" << num(cx) << "\" y1=\"" << num(sens_y(b.upper_whisker))
            << "\" x2=\"" << num(cx) << "\" y2=\"" << num(sens_y(b.q3)) << "\" stroke=\"black\"/>\n";
        out << "  <line x1=\"" << num(cx) << "\" y1=\"" << num(sens_y(b.q1)) << "\" x2=\""
            << num(cx) << "\" y2=\"" << num(sens_y(b.lower_whisker)) << "\" stroke=\"black\"/>\n";
        for (double w : {b.lower_whisker, b.upper_whisker}) {
            out << "  <line x1=\"" << num(cx - half / 2) << "\" y1=\"" << num(sens_y(w))
                << "\" x2=\"" << num(cx + half / 2) << "\" y2=\"" << num(sens_y(w))
                << "\" stroke=\"black\"/>\n";
        }
        out << "  <rect x=\"" << num(cx - half) << "\" y=\"" << num(sens_y(b.q3)) << "\" width=\""
            << num(2 * half) << "\" height=\"" << num(sens_y(b.q1) - sens_y(b.q3)) << "\" fill=\""
            << fill_for(ti) << "\" stroke=\"black\"/>\n";
        out << "  <line x1=\"" << num(cx - half) << "\" y1=\"" << num(sens_y(b.median))
            << "\" x2=\"" << num(cx + half) << "\" y2=\"" << num(sens_y(b.median))
            << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
        for (double o : b.outliers) {
            out << "  <circle cx=\"" << num(cx) << "\" cy=\"" << num(sens_y(o))
                << "\" r=\"2.5\" fill=\"none\" stroke=\"black\"/>\n";
        }
        out << "</g>\n";
        ++drawn;
    }
    out << "</svg>\n";
    return drawn;
}

double LogAxis::y(double p) const {
    const double l = std::log10(std::clamp(p, lo, hi));
    const double frac = (l - std::log10(lo)) / (std::log10(hi) - std::log10(lo));
    return bottom_px - frac * (bottom_px - top_px);
}

void write_pvalue_scatter(std::ostream& out, const std::string& title,
                          const std::vector<bench::ComparisonRow>& rows, double alpha) {
    double min_p = alpha;
    for (const auto& r : rows) {
        if (r.test) min_p = std::min(min_p, r.test->p_value);
    }
    LogAxis axis;
    axis.lo = std::pow(10.0, std::floor(std::log10(min_p)) - 1.0);
    axis.top_px = kTop;
    axis.bottom_px = kBottom;

    const double width =
        kMarginLeft + kMarginRight + 24.0 * static_cast<double>(std::max<std::size_t>(rows.size(), 1));
    svg_open(out, width, title);
    out << "<line x1=\"" << num(kMarginLeft) << "\" y1=\"" << num(kTop) << "\" x2=\""
        << num(kMarginLeft) << "\" y2=\"" << num(kBottom) << "\" stroke=\"black\"/>\n";
    for (double d = std::log10(axis.lo); d <= 0.0; d += 1.0) {
        y_tick(out, axis.y(std::pow(10.0, d)), "1e" + std::to_string(static_cast<int>(d)));
    }
    out << "<line class=\"alpha\" x1=\"" << num(kMarginLeft) << "\" y1=\"" << num(axis.y(alpha))
        << "\" x2=\"" << num(width - kMarginRight) << "\" y2=\"" << num(axis.y(alpha))
        << "\" stroke=\"black\" stroke-width=\"1.5\" data-alpha=\"" << format_double(alpha)
        << "\"/>\n";

    static const char* colors[] = {"#1f77b4", "#2ca02c", "#d62728"};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (!r.test) continue;
        const double cx = kMarginLeft + 24.0 * (static_cast<double>(i) + 0.5);
        out << "<circle class=\"pvalue\" cx=\"" << num(cx) << "\" cy=\""
            << num(axis.y(r.test->p_value)) << "\" r=\"4\" fill=\""
            << colors[static_cast<int>(r.algorithm) % 3] << "\" data-p=\""
            << format_double(r.test->p_value) << "\" data-n-nodes=\"" << r.n_nodes
            << "\" data-sigma=\"" << format_double(r.sigma) << "\" data-algorithm=\""
            << learn::to_string(r.algorithm) << "\"/>\n";
    }
    out << "</svg>\n";
}

PlotReport emit_plots(const std::vector<bench::RunRecord>& records,
                      const std::filesystem::path& out_dir, const PlotOptions& options) {
    if (records.empty()) throw std::invalid_argument("emit_plots: no records");
    std::filesystem::create_directories(out_dir);
    PlotReport report;

    auto open = [&](const std::string& name) {
        std::filesystem::path path = out_dir / name;
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        report.files.push_back(path);
        return out;
    };

    // Panel keys and box order follow first appearance, which is grid order
    // for records produced by run_grid.
    using PanelKey = std::tuple<sem::SemModel, int, double>;
    std::vector<PanelKey> panel_order;
    std::map<PanelKey, std::vector<BoxSeries>> panels;
    for (const auto& r : records) {
        PanelKey key{r.model, r.n_nodes, r.sigma};
        auto [it, inserted] = panels.try_emplace(key);
        if (inserted) panel_order.push_back(key);
        auto& boxes = it->second;
        auto box = std::find_if(boxes.begin(), boxes.end(), [&](const BoxSeries& b) {
            return b.topology == r.topology && b.algorithm == r.algorithm;
        });
        if (box == boxes.end()) box = boxes.insert(boxes.end(), {r.topology, r.algorithm, {}});
        if (r.ok() && r.sensitivity) box->values.push_back(*r.sensitivity);
    }

    for (const auto& key : panel_order) {
        const auto& [model, n_nodes, sigma] = key;
        const std::string tag = std::string(bench::to_string(model)) + "_n" +
                                std::to_string(n_nodes) + "_sigma" + format_double(sigma);
        const auto& boxes = panels[key];
        for (const auto& b : boxes) {
            if (b.values.empty()) {
                report.warnings.push_back("no sensitivities for " + tag + " " + b.topology + " " +
                                          std::string(learn::to_string(b.algorithm)) + "; box skipped");
            }
        }
        if (std::all_of(boxes.begin(), boxes.end(),
                        [](const BoxSeries& b) { return b.values.empty(); })) {
            report.warnings.push_back("panel " + tag + " is empty; skipped");
            continue;
        }
        auto out = open("box_" + tag + ".svg");
        write_box_panel(out, std::string(bench::to_string(model)) + ", N_nodes=" +
                                 std::to_string(n_nodes) + ", sigma=" + format_double(sigma),
                        boxes);
    }

    bool has_a = false;
    bool has_b = false;
    for (const auto& r : records) {
        has_a |= r.topology == options.pair.first;
        has_b |= r.topology == options.pair.second;
    }
    if (!has_a || !has_b) {
        report.warnings.push_back("topologies " + options.pair.first + " and " +
                                  options.pair.second + " not both present; p-value plots skipped");
        return report;
    }
    const auto rows = bench::compare_topologies(records, options.pair, options.alpha);
    std::vector<sem::SemModel> models;
    for (const auto& r : rows) {
        if (std::find(models.begin(), models.end(), r.model) == models.end()) models.push_back(r.model);
    }
    for (auto model : models) {
        std::vector<bench::ComparisonRow> subset;
        for (const auto& r : rows) {
            if (r.model == model) subset.push_back(r);
        }
        if (std::none_of(subset.begin(), subset.end(), [](const auto& r) { return r.test.has_value(); })) {
            report.warnings.push_back("no p-values for " + std::string(bench::to_string(model)) +
                                      "; scatter skipped");
            continue;
        }
        auto out = open("pvalues_" + std::string(bench::to_string(model)) + ".svg");
        write_pvalue_scatter(out,
                             std::string(bench::to_string(model)) + ": " + options.pair.first +
                                 " vs " + options.pair.second + " Wilcoxon p-values",
                             subset, options.alpha);
    }
    return report;
}

}  // namespace bsl::plots
