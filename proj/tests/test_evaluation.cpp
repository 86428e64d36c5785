#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "bsl/evaluation.hpp"
#include "bsl/topology.hpp"

using namespace bsl;
using eval::EvalMode;
using graph::Dag;
using graph::Pdag;

namespace {

// Rank-sum null distribution by listing every m-subset of {1..m+n}.
std::map<int, long long> enumerate_rank_sums(int m, int n) {
    std::map<int, long long> counts;
    std::vector<int> pick(m);
    std::iota(pick.begin(), pick.end(), 1);
    const int total = m + n;
    while (true) {
        counts[std::accumulate(pick.begin(), pick.end(), 0)]++;
        int i = m - 1;
        while (i >= 0 && pick[i] == total - (m - 1 - i)) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < m; ++j) pick[j] = pick[j - 1] + 1;
    }
    return counts;
}

double enumerated_p(const std::map<int, long long>& counts, int w) {
    double lower = 0.0;
    double upper = 0.0;
    double total = 0.0;
    for (auto [s, c] : counts) {
        total += static_cast<double>(c);
        if (s <= w) lower += static_cast<double>(c);
        if (s >= w) upper += static_cast<double>(c);
    }
    return std::min(1.0, 2.0 * std::min(lower, upper) / total);
}

}  // namespace

TEST_CASE("eval mode names") {
    CHECK(eval::parse_eval_mode("moral") == EvalMode::moral);
    CHECK(eval::parse_eval_mode("cpdag-skeleton") == EvalMode::cpdag_skeleton);
    CHECK(eval::parse_eval_mode("cpdag_skeleton") == EvalMode::cpdag_skeleton);
    CHECK_THROWS_AS(eval::parse_eval_mode("skeleton"), std::invalid_argument);
}

TEST_CASE("reference graphs") {
    Dag collider(3, {{0, 2}, {1, 2}});
    CHECK(eval::reference_graph(collider, EvalMode::moral).n_edges() == 3);
    CHECK(eval::reference_graph(collider, EvalMode::cpdag_skeleton).n_edges() == 2);
    Dag chain(3, {{0, 1}, {1, 2}});
    CHECK(eval::reference_graph(chain, EvalMode::moral).n_edges() == 2);
    CHECK(eval::reference_graph(chain, EvalMode::cpdag_skeleton).n_edges() == 2);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Dag tree = topology::generate_pa_dag({48, 1.25, seed});
        CHECK(eval::reference_graph(tree, EvalMode::cpdag_skeleton).n_edges() == 47);
        CHECK(eval::reference_graph(tree, EvalMode::moral).n_edges() >= 47);
    }
}

TEST_CASE("confusion counts") {
    Dag chain(3, {{0, 1}, {1, 2}});
    auto ref = eval::reference_graph(chain, EvalMode::cpdag_skeleton);

    auto same = eval::compare_edges(ref, graph::cpdag_of_dag(chain), EvalMode::cpdag_skeleton);
    CHECK(same.tp == 2);
    CHECK(same.fp == 0);
    CHECK(same.fn == 0);
    CHECK(same.tn == 1);

    auto empty = eval::compare_edges(ref, Pdag(3), EvalMode::cpdag_skeleton);
    CHECK(empty.tp == 0);
    CHECK(empty.fn == 2);

    Pdag learned(3);
    learned.add_undirected(0, 1);
    learned.add_undirected(0, 2);
    auto mixed = eval::compare_edges(ref, learned, EvalMode::cpdag_skeleton);
    CHECK(mixed.tp == 1);
    CHECK(mixed.fp == 1);
    CHECK(mixed.fn == 1);
    CHECK(mixed.tn == 0);

    CHECK_THROWS_AS(eval::compare_edges(ref, Pdag(4), EvalMode::moral), std::invalid_argument);
}

TEST_CASE("moral mode marries learned co-parents only through directed edges") {
    Pdag p(4);
    p.add_directed(0, 2);
    p.add_directed(1, 2);
    p.add_undirected(2, 3);
    auto m = eval::moralize(p);
    CHECK(m.has_edge(0, 1));
    CHECK_FALSE(m.has_edge(0, 3));
    CHECK(m.n_edges() == 4);

    Dag collider(3, {{0, 2}, {1, 2}});
    auto c = eval::compare_edges(eval::reference_graph(collider, EvalMode::moral),
                                 graph::cpdag_of_dag(collider), EvalMode::moral);
    CHECK(c.tp == 3);
    CHECK(c.fn == 0);
}

TEST_CASE("counts partition the pairs and survive relabeling") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Dag truth = topology::generate_pa_dag({12, 1.0, seed});
        Dag other = topology::generate_pa_dag({12, 1.0, seed + 100});
        std::vector<int> perm(12);
        std::iota(perm.begin(), perm.end(), 0);
        std::rotate(perm.begin(), perm.begin() + 5, perm.end());
        auto relabel = [&](const Dag& g) {
            std::vector<graph::Edge> e;
            for (auto [u, v] : g.edges()) e.emplace_back(perm[u], perm[v]);
            return Dag(12, e);
        };
        for (auto mode : {EvalMode::moral, EvalMode::cpdag_skeleton}) {
            auto c = eval::compare_edges(eval::reference_graph(truth, mode), graph::cpdag_of_dag(other), mode);
            CHECK(c.tp + c.fp + c.fn + c.tn == 66);
            CHECK(*eval::sensitivity(c) + static_cast<double>(c.fn) / static_cast<double>(c.tp + c.fn) ==
                  doctest::Approx(1.0));
            auto r = eval::compare_edges(eval::reference_graph(relabel(truth), mode),
                                         graph::cpdag_of_dag(relabel(other)), mode);
            CHECK(r == c);
        }
    }
}

TEST_CASE("sensitivity and specificity") {
    CHECK(eval::sensitivity({47, 0, 0, 0}) == 1.0);
    CHECK(eval::sensitivity({0, 3, 5, 10}) == 0.0);
    CHECK(eval::sensitivity({1, 0, 1, 0}) == 0.5);
    CHECK_FALSE(eval::sensitivity({0, 2, 0, 4}).has_value());
    CHECK(eval::specificity({5, 0, 2, 9}) == 1.0);
    CHECK(eval::specificity({0, 1, 0, 3}) == 0.75);
    CHECK_FALSE(eval::specificity({3, 0, 0, 0}).has_value());

    // Complete learned graph against a 4-node chain: 3 true edges, 3 false ones, no negatives.
    Dag chain(4, {{0, 1}, {1, 2}, {2, 3}});
    Pdag complete(4);
    for (int a = 0; a < 4; ++a) {
        for (int b = a + 1; b < 4; ++b) complete.add_undirected(a, b);
    }
    auto c = eval::compare_edges(eval::reference_graph(chain, EvalMode::cpdag_skeleton), complete,
                                 EvalMode::cpdag_skeleton);
    CHECK(c.fp == 3);
    CHECK(eval::specificity(c) == 0.0);
}

TEST_CASE("wilcoxon examples") {
    const double a[] = {1, 2, 3};
    const double b[] = {4, 5, 6};
    auto r = eval::wilcoxon_rank_sum(a, b);
    CHECK(r.method == eval::WilcoxonMethod::exact);
    CHECK(r.rank_sum_statistic == 6.0);
    CHECK(r.p_value == doctest::Approx(0.1).epsilon(1e-15));

    const double x[] = {0.3, 0.9, 0.1, 0.5};
    auto same = eval::wilcoxon_rank_sum(x, x);
    CHECK(same.p_value == 1.0);

    std::vector<double> ones(20, 1.0);
    std::vector<double> zeros(20, 0.0);
    auto sep = eval::wilcoxon_rank_sum(ones, zeros);
    CHECK(sep.method == eval::WilcoxonMethod::normal_approx);
    CHECK(sep.p_value < 1e-6);
    CHECK(sep.p_value == doctest::Approx(4.6826823587420934712e-10).epsilon(1e-9));

    std::vector<double> flat(10, 0.7);
    auto all_tied = eval::wilcoxon_rank_sum(flat, flat);
    CHECK(all_tied.p_value == 1.0);

    // Tied samples: mid-ranks, tie-corrected variance, continuity correction.
    const double ta[] = {1, 2, 2, 3};
    const double tb[] = {2, 4, 5, 5};
    auto tied = eval::wilcoxon_rank_sum(ta, tb);
    CHECK(tied.method == eval::WilcoxonMethod::normal_approx);
    CHECK(tied.rank_sum_statistic == 12.0);
    CHECK(tied.p_value == doctest::Approx(0.10159149986165276232).epsilon(1e-12));

    CHECK_THROWS_AS(eval::wilcoxon_rank_sum(std::span<const double>{}, b), std::invalid_argument);
}

TEST_CASE("wilcoxon method threshold") {
    std::vector<double> a12(12);
    std::vector<double> b12(12);
    std::iota(a12.begin(), a12.end(), 0.0);
    std::iota(b12.begin(), b12.end(), 0.5);
    CHECK(eval::wilcoxon_rank_sum(a12, b12).method == eval::WilcoxonMethod::exact);
    std::vector<double> b13(13);
    std::iota(b13.begin(), b13.end(), 0.5);
    CHECK(eval::wilcoxon_rank_sum(a12, b13).method == eval::WilcoxonMethod::normal_approx);
}

TEST_CASE("exact p equals full enumeration") {
    int mismatches = 0;
    for (int m = 1; m <= 8; ++m) {
        for (int n = 1; n <= 8; ++n) {
            const auto counts = enumerate_rank_sums(m, n);
            for (auto [w, c] : counts) {
                mismatches += eval::wilcoxon_exact_p(m, n, w) != enumerated_p(counts, w);
            }
        }
    }
    CHECK(mismatches == 0);
}

TEST_CASE("normal approximation tracks the exact p away from tiny samples") {
    double worst = 0.0;
    for (int m = 2; m <= 8; ++m) {
        for (int n = 2; n <= 8; ++n) {
            if (std::max(m, n) < 4) continue;
            for (auto [w, c] : enumerate_rank_sums(m, n)) {
                worst = std::max(worst, std::abs(eval::wilcoxon_normal_p(m, n, w) -
                                                 eval::wilcoxon_exact_p(m, n, w)));
            }
        }
    }
    CHECK(worst < 0.05);
}

TEST_CASE("normal approximation is poor when one sample is a singleton") {
    // Sizes (3, 1) and (1, 3): the largest gap over all sizes up to 8.
    double worst = 0.0;
    for (auto [w, c] : enumerate_rank_sums(3, 1)) {
        worst = std::max(worst, std::abs(eval::wilcoxon_normal_p(3, 1, w) - eval::wilcoxon_exact_p(3, 1, w)));
    }
    CHECK(worst == doctest::Approx(0.12890663047730233).epsilon(1e-9));
}

TEST_CASE("wilcoxon symmetry and shift monotonicity") {
    const std::vector<std::vector<double>> samples = {
        {0.1, 0.4, 0.35}, {0.2, 0.5, 0.9, 0.15}, {0.05, 0.6}, {0.3, 0.31, 0.8, 0.7, 0.65},
    };
    for (const auto& a : samples) {
        for (const auto& b : samples) {
            CHECK(eval::wilcoxon_rank_sum(a, b).p_value == eval::wilcoxon_rank_sum(b, a).p_value);
            // Only from the lower tail does moving b up push W further out.
            const double m = static_cast<double>(a.size());
            const double null_mean = m * (m + static_cast<double>(b.size()) + 1.0) / 2.0;
            if (eval::wilcoxon_rank_sum(a, b).rank_sum_statistic > null_mean) continue;
            for (double c : {0.01, 0.1, 0.5, 2.0}) {
                std::vector<double> shifted = b;
                for (double& v : shifted) v += c;
                CHECK(eval::wilcoxon_rank_sum(a, shifted).p_value <=
                      eval::wilcoxon_rank_sum(a, b).p_value + 1e-15);
            }
        }
    }
}

TEST_CASE("boxplot summary") {
    const double five[] = {1, 2, 3, 4, 5};
    auto b = eval::boxplot_summary(five);
    CHECK(b.median == 3.0);
    CHECK(b.q1 == 2.0);
    CHECK(b.q3 == 4.0);
    CHECK(b.min == 1.0);
    CHECK(b.max == 5.0);
    CHECK(b.outliers.empty());

    std::vector<double> flat(20, 0.42);
    auto d = eval::boxplot_summary(flat);
    CHECK(d.q1 == d.q3);
    CHECK(d.lower_whisker == 0.42);
    CHECK(d.upper_whisker == 0.42);
    CHECK(d.outliers.empty());

    const double spike[] = {0, 0, 0, 0, 10};
    auto s = eval::boxplot_summary(spike);
    CHECK(s.q3 == 0.0);
    CHECK(s.outliers == std::vector<double>{10.0});
    CHECK(s.upper_whisker == 0.0);

    // Type-7 interpolation on an even count.
    const double four[] = {1, 2, 3, 4};
    auto q = eval::boxplot_summary(four);
    CHECK(q.q1 == doctest::Approx(1.75));
    CHECK(q.median == doctest::Approx(2.5));
    CHECK(q.q3 == doctest::Approx(3.25));

    CHECK_THROWS_AS(eval::boxplot_summary(std::span<const double>{}), std::invalid_argument);
}
