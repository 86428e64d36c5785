#include "bsl/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "bsl/ci_tests.hpp"

namespace bsl::eval {

std::string_view to_string(EvalMode m) {
    return m == EvalMode::moral ? "moral" : "cpdag_skeleton";
}

EvalMode parse_eval_mode(std::string_view s) {
    if (s == "moral") return EvalMode::moral;
    if (s == "cpdag_skeleton" || s == "cpdag-skeleton") return EvalMode::cpdag_skeleton;
    throw std::invalid_argument("unknown eval mode '" + std::string(s) + "'");
}

graph::UndirectedGraph reference_graph(const graph::Dag& true_dag, EvalMode mode) {
    return mode == EvalMode::moral ? graph::moralize(true_dag) : graph::skeleton(true_dag);
}

graph::UndirectedGraph moralize(const graph::Pdag& g) {
    graph::UndirectedGraph m = graph::skeleton(g);
    for (graph::NodeId v = 0; v < g.n_nodes(); ++v) {
        auto pa = g.parents(v);
        for (std::size_t i = 0; i < pa.size(); ++i) {
            for (std::size_t j = i + 1; j < pa.size(); ++j) m.add_edge(pa[i], pa[j]);
        }
    }
    return m;
}

ConfusionCounts compare_edges(const graph::UndirectedGraph& reference, const graph::Pdag& learned,
                              EvalMode mode) {
    if (reference.n_nodes() != learned.n_nodes()) {
        throw std::invalid_argument("compare_edges: reference has " +
                                    std::to_string(reference.n_nodes()) + " nodes, learned has " +
                                    std::to_string(learned.n_nodes()));
    }
    const graph::UndirectedGraph got =
        mode == EvalMode::moral ? moralize(learned) : graph::skeleton(learned);
    ConfusionCounts c;
    for (const auto& e : reference.edges()) {
        if (got.edges().contains(e)) {
            ++c.tp;
        } else {
            ++c.fn;
        }
    }
    for (const auto& e : got.edges()) {
        if (!reference.edges().contains(e)) ++c.fp;
    }
    const std::int64_t n = reference.n_nodes();
    c.tn = n * (n - 1) / 2 - c.tp - c.fp - c.fn;
    return c;
}

std::optional<double> sensitivity(const ConfusionCounts& c) {
    if (c.tp + c.fn == 0) return std::nullopt;
    return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

std::optional<double> specificity(const ConfusionCounts& c) {
    if (c.tn + c.fp == 0) return std::nullopt;
    return static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
}

namespace {

// counts[s] = number of size-m subsets of {1..m+n} with sum s.
std::vector<double> rank_sum_counts(std::size_t m, std::size_t n) {
    const std::size_t total = m + n;
    const std::size_t max_sum = total * (total + 1) / 2;
    std::vector<std::vector<double>> dp(m + 1, std::vector<double>(max_sum + 1, 0.0));
    dp[0][0] = 1.0;
    for (std::size_t r = 1; r <= total; ++r) {
        for (std::size_t k = std::min(r, m); k >= 1; --k) {
            for (std::size_t s = max_sum; s >= r; --s) dp[k][s] += dp[k - 1][s - r];
        }
    }
    return dp[m];
}

double clamp_p(double p) { return std::clamp(p, std::numeric_limits<double>::min(), 1.0); }

}  // namespace

double wilcoxon_exact_p(std::size_t m, std::size_t n, double w) {
    if (m == 0 || n == 0) throw std::invalid_argument("wilcoxon: empty sample");
    const std::vector<double> counts = rank_sum_counts(m, n);
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    double lower = 0.0;
    double upper = 0.0;
    for (std::size_t s = 0; s < counts.size(); ++s) {
        if (static_cast<double>(s) <= w) lower += counts[s];
        if (static_cast<double>(s) >= w) upper += counts[s];
    }
    return clamp_p(std::min(1.0, 2.0 * std::min(lower, upper) / total));
}

double wilcoxon_normal_p(std::size_t m, std::size_t n, double w, double tie_term) {
    if (m == 0 || n == 0) throw std::invalid_argument("wilcoxon: empty sample");
    const double dm = static_cast<double>(m);
    const double dn = static_cast<double>(n);
    const double big_n = dm + dn;
    const double mean = dm * (big_n + 1.0) / 2.0;
    double variance = dm * dn / 12.0 * (big_n + 1.0);
    if (big_n > 1.0) variance -= dm * dn / 12.0 * tie_term / (big_n * (big_n - 1.0));
    if (!(variance > 0.0)) return 1.0;
    double z = w - mean;
    const double correction = z > 0.0 ? 0.5 : (z < 0.0 ? -0.5 : 0.0);
    z = (z - correction) / std::sqrt(variance);
    return clamp_p(std::min(1.0, 2.0 * ci::normal_upper_tail(std::abs(z))));
}

WilcoxonResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("wilcoxon: both samples must be non-empty");
    struct Obs {
        double value;
        bool first;
    };
    std::vector<Obs> all;
    all.reserve(a.size() + b.size());
    for (double v : a) all.push_back({v, true});
    for (double v : b) all.push_back({v, false});
    std::sort(all.begin(), all.end(), [](const Obs& l, const Obs& r) { return l.value < r.value; });

    double rank_sum = 0.0;
    double tie_term = 0.0;
    bool ties = false;
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j].value == all[i].value) ++j;
        const double t = static_cast<double>(j - i);
        const double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) {
            if (all[k].first) rank_sum += mid_rank;
        }
        if (t > 1.0) {
            ties = true;
            tie_term += t * t * t - t;
        }
        i = j;
    }

    WilcoxonResult res;
    res.rank_sum_statistic = rank_sum;
    if (!ties && a.size() <= kWilcoxonExactLimit && b.size() <= kWilcoxonExactLimit) {
        res.method = WilcoxonMethod::exact;
        res.p_value = wilcoxon_exact_p(a.size(), b.size(), rank_sum);
    } else {
        res.method = WilcoxonMethod::normal_approx;
        res.p_value = wilcoxon_normal_p(a.size(), b.size(), rank_sum, tie_term);
    }
    return res;
}

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double median(std::span<const double> sample) {
    std::vector<double> s(sample.begin(), sample.end());
    std::sort(s.begin(), s.end());
    return quantile_sorted(s, 0.5);
}

BoxplotSummary boxplot_summary(std::span<const double> sample) {
    if (sample.empty()) throw std::invalid_argument("boxplot of an empty sample");
    std::vector<double> s(sample.begin(), sample.end());
    std::sort(s.begin(), s.end());
    BoxplotSummary b;
    b.min = s.front();
    b.max = s.back();
    b.q1 = quantile_sorted(s, 0.25);
    b.median = quantile_sorted(s, 0.5);
    b.q3 = quantile_sorted(s, 0.75);
    const double iqr = b.q3 - b.q1;
    const double lo_fence = b.q1 - 1.5 * iqr;
    const double hi_fence = b.q3 + 1.5 * iqr;
    b.lower_whisker = b.q1;
    b.upper_whisker = b.q3;
    for (double v : s) {
        if (v < lo_fence || v > hi_fence) {
            b.outliers.push_back(v);
        } else {
            b.lower_whisker = std::min(b.lower_whisker, v);
            b.upper_whisker = std::max(b.upper_whisker, v);
        }
    }
    return b;
}

}  // namespace bsl::eval
