#include "bsl/learners.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>

namespace bsl::learn {

namespace {

// Visits every size-k subset of `pool` in lexicographic order of positions.
// Stops early when `visit` returns true.
template <typename Visit>
bool for_each_subset(const std::vector<NodeId>& pool, std::size_t k, Visit&& visit) {
    if (k > pool.size()) return false;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    std::vector<NodeId> subset(k);
    while (true) {
        for (std::size_t i = 0; i < k; ++i) subset[i] = pool[idx[i]];
        if (visit(static_cast<const std::vector<NodeId>&>(subset))) return true;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == pool.size() - k + (i - 1)) --i;
        if (i == 0) return false;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

bool within_cap(const LearnParams& params, std::size_t cond_size) {
    return !params.max_condset || cond_size <= static_cast<std::size_t>(*params.max_condset);
}

std::vector<NodeId> without(const std::vector<NodeId>& set, NodeId v) {
    std::vector<NodeId> out;
    out.reserve(set.size());
    for (NodeId u : set) {
        if (u != v) out.push_back(u);
    }
    return out;
}

bool contains(const std::vector<NodeId>& sorted, NodeId v) {
    return std::binary_search(sorted.begin(), sorted.end(), v);
}

void insert_sorted(std::vector<NodeId>& sorted, NodeId v) {
    sorted.insert(std::upper_bound(sorted.begin(), sorted.end(), v), v);
}

// Single backward pass in index order; each member is tested against the
// blanket as it stands at that moment.
void shrink(ci::IndependenceTest& test, NodeId target, std::vector<NodeId>& mb) {
    for (std::size_t i = 0; i < mb.size();) {
        NodeId v = mb[i];
        std::vector<NodeId> rest = without(mb, v);
        if (test(target, v, rest).independent) {
            mb.erase(mb.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
            ++i;
        }
    }
}

LearnResult finish(ci::IndependenceTest& test, const std::vector<std::vector<char>>& adj,
                   graph::SepsetTable sepsets, std::int64_t tests_before,
                   std::int64_t skipped_before) {
    const int n = test.n_vars();
    graph::UndirectedGraph skel(n);
    for (NodeId x = 0; x < n; ++x) {
        for (NodeId y = x + 1; y < n; ++y) {
            if (adj[x][y]) skel.add_edge(x, y);
        }
    }
    LearnResult out;
    out.pdag = graph::meek_closure(graph::orient_v_structures(skel, sepsets, &out.orientation),
                                   &out.orientation);
    out.sepsets = std::move(sepsets);
    out.n_tests = test.n_tests() - tests_before;
    out.n_skipped_tests = test.n_skipped() - skipped_before;
    return out;
}

}  // namespace

std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::pc_stable: return "pc_stable";
        case Algorithm::grow_shrink: return "grow_shrink";
        case Algorithm::fast_iamb: return "fast_iamb";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view s) {
    std::string norm(s);
    std::replace(norm.begin(), norm.end(), '-', '_');
    if (norm == "pc_stable" || norm == "pc") return Algorithm::pc_stable;
    if (norm == "grow_shrink" || norm == "gs") return Algorithm::grow_shrink;
    if (norm == "fast_iamb" || norm == "iamb" || norm == "im") return Algorithm::fast_iamb;
    throw std::invalid_argument("unknown algorithm '" + std::string(s) + "'");
}

void LearnParams::validate() const {
    test.validate();
    if (max_condset && *max_condset < 0) throw std::invalid_argument("max_condset must be >= 0");
}

LearnResult pc_stable(ci::IndependenceTest& test, const LearnParams& params) {
    params.validate();
    const int n = test.n_vars();
    const std::int64_t tests_before = test.n_tests();
    const std::int64_t skipped_before = test.n_skipped();

    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 1));
    for (NodeId v = 0; v < n; ++v) adj[v][v] = 0;
    graph::SepsetTable sepsets;

    struct Removal {
        NodeId x;
        NodeId y;
        std::vector<NodeId> sepset;
    };

    for (std::size_t level = 0; within_cap(params, level); ++level) {
        std::vector<std::vector<NodeId>> frozen(n);
        for (NodeId u = 0; u < n; ++u) {
            for (NodeId v = 0; v < n; ++v) {
                if (adj[u][v]) frozen[u].push_back(v);
            }
        }
        bool any_pair_testable = false;
        std::vector<Removal> removals;
        for (NodeId x = 0; x < n; ++x) {
            for (NodeId y = x + 1; y < n; ++y) {
                if (!adj[x][y]) continue;
                const std::vector<NodeId> pool_x = without(frozen[x], y);
                const std::vector<NodeId> pool_y = without(frozen[y], x);
                if (pool_x.size() < level && pool_y.size() < level) continue;
                any_pair_testable = true;

                bool found = false;
                double best_p = -1.0;
                std::vector<NodeId> best;
                auto consider = [&](const std::vector<NodeId>& s) {
                    ci::CiResult r = test(x, y, s);
                    if (!r.independent) return false;
                    if (!found || r.p_value > best_p || (r.p_value == best_p && s < best)) {
                        found = true;
                        best_p = r.p_value;
                        best = s;
                    }
                    return false;
                };
                for_each_subset(pool_x, level, consider);
                for_each_subset(pool_y, level, [&](const std::vector<NodeId>& s) {
                    bool seen = std::all_of(s.begin(), s.end(),
                                            [&](NodeId v) { return contains(pool_x, v); });
                    return seen ? false : consider(s);
                });
                if (found) removals.push_back({x, y, std::move(best)});
            }
        }
        for (auto& r : removals) {
            adj[r.x][r.y] = adj[r.y][r.x] = 0;
            sepsets.set(r.x, r.y, std::move(r.sepset));
        }
        if (!any_pair_testable) break;
    }
    return finish(test, adj, std::move(sepsets), tests_before, skipped_before);
}

LearnResult pc_stable(const sem::DataMatrix& data, const LearnParams& params) {
    ci::DataIndependenceTest test(data, params.test);
    return pc_stable(test, params);
}

std::vector<NodeId> grow_shrink_mb(ci::IndependenceTest& test, NodeId target,
                                   const LearnParams& params) {
    params.validate();
    const int n = test.n_vars();
    std::vector<NodeId> mb;
    while (within_cap(params, mb.size())) {
        NodeId best = -1;
        double best_p = 0.0;
        for (NodeId v = 0; v < n; ++v) {
            if (v == target || contains(mb, v)) continue;
            ci::CiResult r = test(target, v, mb);
            if (r.independent) continue;
            if (best < 0 || r.p_value < best_p) {
                best = v;
                best_p = r.p_value;
            }
        }
        if (best < 0) break;
        insert_sorted(mb, best);
    }
    shrink(test, target, mb);
    return mb;
}

std::vector<NodeId> fast_iamb_mb(ci::IndependenceTest& test, NodeId target,
                                 const LearnParams& params) {
    params.validate();
    const int n = test.n_vars();
    std::vector<NodeId> mb;
    std::set<std::vector<NodeId>> seen{mb};
    while (within_cap(params, mb.size())) {
        std::vector<std::pair<double, NodeId>> ranked;
        for (NodeId v = 0; v < n; ++v) {
            if (v == target || contains(mb, v)) continue;
            ci::CiResult r = test(target, v, mb);
            if (!r.independent) ranked.emplace_back(r.p_value, v);
        }
        if (ranked.empty()) break;
        std::sort(ranked.begin(), ranked.end());

        insert_sorted(mb, ranked.front().second);
        for (std::size_t i = 1; i < ranked.size() && within_cap(params, mb.size()); ++i) {
            NodeId v = ranked[i].second;
            if (test(target, v, mb).independent) break;
            insert_sorted(mb, v);
        }
        shrink(test, target, mb);
        // A blanket seen before means the grow/shrink steps are cycling.
        if (!seen.insert(mb).second) break;
    }
    return mb;
}

LearnResult mb_based_learn(ci::IndependenceTest& test, const LearnParams& params) {
    params.validate();
    if (params.algorithm == Algorithm::pc_stable) {
        throw std::invalid_argument("mb_based_learn: pc_stable is not blanket based");
    }
    const int n = test.n_vars();
    const std::int64_t tests_before = test.n_tests();
    const std::int64_t skipped_before = test.n_skipped();

    std::vector<std::vector<NodeId>> raw(n);
    for (NodeId t = 0; t < n; ++t) {
        raw[t] = params.algorithm == Algorithm::grow_shrink ? grow_shrink_mb(test, t, params)
                                                            : fast_iamb_mb(test, t, params);
    }
    std::vector<std::vector<NodeId>> mb(n);
    for (NodeId x = 0; x < n; ++x) {
        for (NodeId y : raw[x]) {
            if (contains(raw[y], x)) mb[x].push_back(y);
        }
    }

    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    graph::SepsetTable sepsets;
    for (NodeId x = 0; x < n; ++x) {
        for (NodeId y : mb[x]) {
            if (y < x) continue;
            std::vector<NodeId> from_x = without(mb[x], y);
            std::vector<NodeId> from_y = without(mb[y], x);
            const std::vector<NodeId>& pool = from_x.size() <= from_y.size() ? from_x : from_y;
            bool separated = false;
            for (std::size_t k = 0; k <= pool.size() && within_cap(params, k) && !separated; ++k) {
                separated = for_each_subset(pool, k, [&](const std::vector<NodeId>& s) {
                    if (!test(x, y, s).independent) return false;
                    sepsets.set(x, y, s);
                    return true;
                });
            }
            if (!separated) adj[x][y] = adj[y][x] = 1;
        }
    }
    return finish(test, adj, std::move(sepsets), tests_before, skipped_before);
}

LearnResult learn(ci::IndependenceTest& test, const LearnParams& params) {
    return params.algorithm == Algorithm::pc_stable ? pc_stable(test, params)
                                                    : mb_based_learn(test, params);
}

LearnResult learn(const sem::DataMatrix& data, const LearnParams& params) {
    ci::DataIndependenceTest test(data, params.test);
    return learn(test, params);
}

}  // namespace bsl::learn
