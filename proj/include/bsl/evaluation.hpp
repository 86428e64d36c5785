#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bsl/graph.hpp"

namespace bsl::eval {

/// Reference edge set used for scoring: the moral graph of the true DAG, or
/// the DAG skeleton (which is also the skeleton of its CPDAG).
enum class EvalMode { moral, cpdag_skeleton };

std::string_view to_string(EvalMode m);
/// Accepts "moral", "cpdag_skeleton" and "cpdag-skeleton".
EvalMode parse_eval_mode(std::string_view s);

/// Counts over all unordered node pairs.
struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;

    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

graph::UndirectedGraph reference_graph(const graph::Dag& true_dag, EvalMode mode);

/// Moralization of a learned PDAG: directed edges count as parentage, so
/// co-parents are married; undirected edges contribute adjacency only.
graph::UndirectedGraph moralize(const graph::Pdag& g);

ConfusionCounts compare_edges(const graph::UndirectedGraph& reference, const graph::Pdag& learned,
                              EvalMode mode);

/// tp / (tp + fn); empty when the reference has no edges.
std::optional<double> sensitivity(const ConfusionCounts& c);
/// tn / (tn + fp); empty when there are no negative pairs.
std::optional<double> specificity(const ConfusionCounts& c);

enum class WilcoxonMethod { exact, normal_approx };

struct WilcoxonResult {
    double rank_sum_statistic = 0.0;  // rank sum of the first sample
    double p_value = 1.0;             // two-sided
    WilcoxonMethod method = WilcoxonMethod::exact;
};

/// Largest group size for which the exact null distribution is used.
inline constexpr std::size_t kWilcoxonExactLimit = 12;

/// Two-sided Wilcoxon rank-sum test. Exact null enumeration when both samples
/// have at most 12 values and there are no ties; otherwise the normal
/// approximation with mid-ranks, tie-corrected variance and a 0.5 continuity
/// correction.
WilcoxonResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b);

/// Exact two-sided p-value for rank sum `w` of a group of m among m + n
/// untied observations: min(1, 2 min(P(W <= w), P(W >= w))).
double wilcoxon_exact_p(std::size_t m, std::size_t n, double w);
/// Normal-approximation p-value for untied samples of sizes m and n.
double wilcoxon_normal_p(std::size_t m, std::size_t n, double w, double tie_term = 0.0);

/// Tukey box-plot summary. Quartiles use linear interpolation between order
/// statistics at position (n - 1) q (R type 7). Whiskers extend to the most
/// extreme values within 1.5 IQR of the box.
struct BoxplotSummary {
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    double lower_whisker = 0.0;
    double upper_whisker = 0.0;
    std::vector<double> outliers;
};

BoxplotSummary boxplot_summary(std::span<const double> sample);

/// Linear-interpolation quantile of an already sorted sample.
double quantile_sorted(std::span<const double> sorted, double q);

double median(std::span<const double> sample);

}  // namespace bsl::eval
