#pragma once

// Independent oracles shared by the test binaries. Nothing in here calls into
// the library routines it is used to check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "bsl/graph.hpp"

namespace testsupport {

using bsl::graph::Dag;
using bsl::graph::Edge;
using bsl::graph::NodeId;

inline bool has_cycle(int n, const std::vector<Edge>& edges) {
    // Repeatedly strip nodes without incoming edges.
    std::vector<int> indeg(n, 0);
    for (auto [u, v] : edges) ++indeg[v];
    std::vector<bool> gone(n, false);
    for (int removed = 0; removed < n; ++removed) {
        int pick = -1;
        for (int v = 0; v < n && pick < 0; ++v) {
            if (!gone[v] && indeg[v] == 0) pick = v;
        }
        if (pick < 0) return true;
        gone[pick] = true;
        for (auto [u, v] : edges) {
            if (u == pick) --indeg[v];
        }
    }
    return false;
}

/// Every labelled DAG on n nodes: each pair is absent, forward or backward,
/// cyclic choices dropped. 1, 3, 25, 543, 29281 for n = 1..5.
inline std::vector<Dag> enumerate_dags(int n) {
    std::vector<Edge> pairs;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
    std::size_t total = 1;
    for (std::size_t k = 0; k < pairs.size(); ++k) total *= 3;
    std::vector<Dag> out;
    for (std::size_t code = 0; code < total; ++code) {
        std::vector<Edge> edges;
        std::size_t c = code;
        for (auto [i, j] : pairs) {
            const std::size_t digit = c % 3;
            c /= 3;
            if (digit == 1) edges.emplace_back(i, j);
            if (digit == 2) edges.emplace_back(j, i);
        }
        if (!has_cycle(n, edges)) out.emplace_back(n, edges);
    }
    return out;
}

struct Query {
    NodeId x;
    NodeId y;
    std::vector<NodeId> z;
};

/// All (x < y, z subset of the remaining nodes) queries on n nodes.
inline std::vector<Query> all_queries(int n) {
    std::vector<Query> qs;
    for (int x = 0; x < n; ++x) {
        for (int y = x + 1; y < n; ++y) {
            std::vector<NodeId> rest;
            for (int v = 0; v < n; ++v) {
                if (v != x && v != y) rest.push_back(v);
            }
            for (unsigned mask = 0; mask < (1u << rest.size()); ++mask) {
                Query q{x, y, {}};
                for (std::size_t b = 0; b < rest.size(); ++b) {
                    if (mask & (1u << b)) q.z.push_back(rest[b]);
                }
                qs.push_back(std::move(q));
            }
        }
    }
    return qs;
}

inline std::vector<bool> descendants_or_self(const Dag& g, NodeId v) {
    std::vector<bool> seen(g.n_nodes(), false);
    std::vector<NodeId> stack{v};
    seen[v] = true;
    while (!stack.empty()) {
        NodeId u = stack.back();
        stack.pop_back();
        for (NodeId c : g.children(u)) {
            if (!seen[c]) {
                seen[c] = true;
                stack.push_back(c);
            }
        }
    }
    return seen;
}

/// d-separation by enumerating every simple path of the skeleton and checking
/// each interior node against the textbook blocking rules.
inline bool path_d_separated(const Dag& g, NodeId x, NodeId y, const std::vector<NodeId>& z) {
    const int n = g.n_nodes();
    std::vector<bool> in_z(n, false);
    for (NodeId v : z) in_z[v] = true;
    std::vector<bool> collider_open(n, false);
    for (NodeId m = 0; m < n; ++m) {
        auto desc = descendants_or_self(g, m);
        for (NodeId v : z) collider_open[m] = collider_open[m] || desc[v];
    }

    std::vector<NodeId> path{x};
    std::vector<bool> on_path(n, false);
    on_path[x] = true;
    std::function<bool(NodeId)> active_from = [&](NodeId u) -> bool {
        if (u == y) {
            for (std::size_t i = 1; i + 1 < path.size(); ++i) {
                NodeId a = path[i - 1];
                NodeId m = path[i];
                NodeId b = path[i + 1];
                const bool collider = g.has_edge(a, m) && g.has_edge(b, m);
                if (collider ? !collider_open[m] : in_z[m]) return false;
            }
            return true;
        }
        for (NodeId w = 0; w < n; ++w) {
            if (on_path[w] || !g.adjacent(u, w)) continue;
            on_path[w] = true;
            path.push_back(w);
            const bool found = active_from(w);
            path.pop_back();
            on_path[w] = false;
            if (found) return true;
        }
        return false;
    };
    return !active_from(x);
}

/// Covariance of a linear-Gaussian SEM with unit noise and the given weights
/// (aligned with g.edges()).
inline Eigen::MatrixXd sem_covariance(const Dag& g, const std::vector<double>& weights) {
    const int n = g.n_nodes();
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
    std::size_t i = 0;
    for (auto [u, v] : g.edges()) b(v, u) = weights[i++];
    const Eigen::MatrixXd a = (Eigen::MatrixXd::Identity(n, n) - b).inverse();
    return a * a.transpose();
}

/// Partial correlation from the inverse of the covariance submatrix.
inline double precision_partial_corr(const Eigen::MatrixXd& cov, NodeId x, NodeId y,
                                     const std::vector<NodeId>& z) {
    std::vector<NodeId> idx{x, y};
    idx.insert(idx.end(), z.begin(), z.end());
    const auto k = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd sub(k, k);
    for (Eigen::Index r = 0; r < k; ++r) {
        for (Eigen::Index c = 0; c < k; ++c) sub(r, c) = cov(idx[r], idx[c]);
    }
    const Eigen::MatrixXd p = sub.inverse();
    return -p(0, 1) / std::sqrt(p(0, 0) * p(1, 1));
}

/// Weights drawn from +-[0.5, 1.5], generic enough to avoid cancellations.
inline std::vector<double> random_weights(std::size_t n_edges, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> mag(0.5, 1.5);
    std::bernoulli_distribution sign(0.5);
    std::vector<double> w(n_edges);
    for (double& v : w) v = sign(gen) ? mag(gen) : -mag(gen);
    return w;
}

/// Skeleton plus v-structures as a comparable key; two DAGs are Markov
/// equivalent iff their keys match.
inline std::pair<std::set<Edge>, std::set<std::tuple<NodeId, NodeId, NodeId>>>
equivalence_key(const Dag& g) {
    std::set<Edge> skel;
    for (auto [u, v] : g.edges()) skel.insert({std::min(u, v), std::max(u, v)});
    std::set<std::tuple<NodeId, NodeId, NodeId>> vs;
    for (NodeId w = 0; w < g.n_nodes(); ++w) {
        const auto& pa = g.parents(w);
        for (std::size_t i = 0; i < pa.size(); ++i) {
            for (std::size_t j = i + 1; j < pa.size(); ++j) {
                if (!g.adjacent(pa[i], pa[j])) vs.insert({pa[i], w, pa[j]});
            }
        }
    }
    return {skel, vs};
}

}  // namespace testsupport
